//! Problem instances: weighted interaction graphs with optional local fields,
//! their generators, and the vertex weight-sum parity classification that
//! decides which landscape symmetries apply.

mod generate;
mod io;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{
    average_degree, complete, complete_bipartite, cycle, generate_random, generate_regular,
    generate_tree_subgraph, hypercube, path, single_edge, RandomModel, WeightScheme,
};
pub use io::{parse_instance, read_instance, write_instance};

/// Largest magnitude for which an `f64` integer is treated as exact.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Weighted interaction graph plus local fields.
///
/// Weights are stored as `f64`; integer-valued weights up to 2^53 are exact
/// in that representation, and every integer test is an exact check on the
/// stored value rather than a tolerance test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingInstance {
    n: usize,
    edges: Vec<Edge>,
    fields: Vec<f64>,
    label: Option<String>,
}

impl IsingInstance {
    /// Builds a MaxCut instance (all fields zero). Edge endpoints may be given
    /// in either order; they are stored with `i < j` in the given edge order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("vertex count must be at least 1".into()));
        }
        let mut seen = HashMap::new();
        let mut stored = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop on vertex {a}")));
            }
            if !w.is_finite() {
                return Err(Error::InvalidInstance(format!("non-finite weight on ({a}, {b})")));
            }
            let (i, j) = (a.min(b), a.max(b));
            if seen.insert((i, j), stored.len()).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate edge ({i}, {j})")));
            }
            stored.push(Edge { i, j, w });
        }
        Ok(Self {
            n,
            edges: stored,
            fields: vec![0.0; n],
            label: None,
        })
    }

    /// Unit-weight instance.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|(i, j)| (i, j, 1.0)))
    }

    pub fn with_fields(mut self, fields: Vec<f64>) -> Result<Self> {
        if fields.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: fields.len(),
            });
        }
        if fields.iter().any(|h| !h.is_finite()) {
            return Err(Error::InvalidInstance("non-finite local field".into()));
        }
        self.fields = fields;
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label, or a generic description when none was set.
    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("n{}-m{}", self.n, self.edges.len()))
    }

    /// True when every local field is zero.
    pub fn is_maxcut(&self) -> bool {
        self.fields.iter().all(|&h| h == 0.0)
    }

    /// True when every weight and field is an exactly representable integer.
    pub fn is_integer(&self) -> bool {
        self.edges.iter().all(|e| is_exact_int(e.w)) && self.fields.iter().all(|&h| is_exact_int(h))
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    /// Adjacency lists `(neighbor, weight)`.
    pub fn neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push((e.j, e.w));
            adj[e.j].push((e.i, e.w));
        }
        adj
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        let (i, j) = (a.min(b), a.max(b));
        self.edges.iter().find(|e| e.i == i && e.j == j).map(|e| e.w)
    }

    /// `s_k = sum_j w_jk + h_k` for every vertex.
    pub fn vertex_sums(&self) -> Vec<f64> {
        let mut s = self.fields.clone();
        for e in &self.edges {
            s[e.i] += e.w;
            s[e.j] += e.w;
        }
        s
    }

    /// Exact integer vertex sums, `None` unless the instance is integer.
    pub fn integer_vertex_sums(&self) -> Option<Vec<i64>> {
        if !self.is_integer() {
            return None;
        }
        let mut s: Vec<i64> = self.fields.iter().map(|&h| h as i64).collect();
        for e in &self.edges {
            s[e.i] += e.w as i64;
            s[e.j] += e.w as i64;
        }
        Some(s)
    }

    /// Instance with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut hit = vec![false; self.n];
        for &v in perm {
            if v >= self.n || std::mem::replace(&mut hit[v], true) {
                return Err(Error::InvalidArgument("relabeling is not a permutation".into()));
            }
        }
        let mut fields = vec![0.0; self.n];
        for (v, &h) in self.fields.iter().enumerate() {
            fields[perm[v]] = h;
        }
        let out = Self::new(self.n, self.edges.iter().map(|e| (perm[e.i], perm[e.j], e.w)))?;
        let mut out = out.with_fields(fields)?;
        out.label = self.label.clone();
        Ok(out)
    }
}

pub(crate) fn is_exact_int(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() <= EXACT_INT_LIMIT
}

/// Landscape symmetry class of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryKind {
    /// Every vertex sum `s_k` is even.
    Ews,
    /// Every vertex sum `s_k` is odd.
    Ows,
    /// Integer coefficients with mixed vertex-sum parity.
    IntegerGeneral,
    /// Non-integer coefficients.
    RealGeneral,
}

impl SymmetryKind {
    pub fn has_shift_symmetry(self) -> bool {
        matches!(self, SymmetryKind::Ews | SymmetryKind::Ows)
    }

    pub fn is_integer(self) -> bool {
        self != SymmetryKind::RealGeneral
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryKind::Ews => "EWS",
            SymmetryKind::Ows => "OWS",
            SymmetryKind::IntegerGeneral => "IntegerGeneral",
            SymmetryKind::RealGeneral => "RealGeneral",
        })
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ews" => Ok(SymmetryKind::Ews),
            "ows" => Ok(SymmetryKind::Ows),
            "integer" | "integergeneral" | "integer-general" => Ok(SymmetryKind::IntegerGeneral),
            "real" | "realgeneral" | "real-general" => Ok(SymmetryKind::RealGeneral),
            other => Err(Error::InvalidArgument(format!("unknown symmetry class {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub kind: SymmetryKind,
    /// Exact `s_k = sum_j w_jk + h_k`; absent for real-valued instances.
    pub vertex_sums: Option<Vec<i64>>,
}

impl SymmetryClass {
    /// Per-vertex `s_k mod 2`.
    pub fn parities(&self) -> Option<Vec<u8>> {
        self.vertex_sums
            .as_ref()
            .map(|s| s.iter().map(|x| x.rem_euclid(2) as u8).collect())
    }
}

pub fn classify_symmetry(inst: &IsingInstance) -> SymmetryClass {
    let Some(sums) = inst.integer_vertex_sums() else {
        return SymmetryClass {
            kind: SymmetryKind::RealGeneral,
            vertex_sums: None,
        };
    };
    let kind = if sums.iter().all(|s| s.rem_euclid(2) == 0) {
        SymmetryKind::Ews
    } else if sums.iter().all(|s| s.rem_euclid(2) == 1) {
        SymmetryKind::Ows
    } else {
        SymmetryKind::IntegerGeneral
    };
    SymmetryClass {
        kind,
        vertex_sums: Some(sums),
    }
}

/// Length of the shortest cycle, `None` for forests.
pub fn girth(inst: &IsingInstance) -> Option<usize> {
    let adj = inst.neighbors();
    let n = inst.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &(v, _) in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
