use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::IsingInstance;
use crate::error::{Error, Result};

/// How edge weights are assigned by the generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum WeightScheme {
    Unit,
    /// `w_ij` drawn uniformly from `{-1, +1}`.
    PmOne,
    /// `w_ij` drawn uniformly from the listed values.
    Custom(Vec<f64>),
}

impl WeightScheme {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            WeightScheme::Unit => 1.0,
            WeightScheme::PmOne => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            WeightScheme::Custom(values) => values[rng.random_range(0..values.len())],
        }
    }

    fn validate(&self) -> Result<()> {
        if let WeightScheme::Custom(values) = self {
            if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(
                    "custom weight scheme needs finite values".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightScheme::Unit => "unit",
            WeightScheme::PmOne => "pm_one",
            WeightScheme::Custom(_) => "custom",
        }
    }
}

/// Random graph families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RandomModel {
    /// Erdős–Rényi `G(n, q)`.
    ErdosRenyi { q: f64 },
    /// Barabási–Albert preferential attachment with `m` edges per new vertex,
    /// grown from a star on `m + 1` vertices.
    BarabasiAlbert { m: usize },
    /// Watts–Strogatz ring of even degree `k` with rewiring probability `rewire`.
    WattsStrogatz { k: usize, rewire: f64 },
}

impl RandomModel {
    pub fn name(&self) -> &'static str {
        match self {
            RandomModel::ErdosRenyi { .. } => "ER",
            RandomModel::BarabasiAlbert { .. } => "BA",
            RandomModel::WattsStrogatz { .. } => "WS",
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn single_edge() -> IsingInstance {
    IsingInstance::unweighted(2, [(0, 1)]).unwrap().with_label("edge")
}

pub fn complete(n: usize) -> IsingInstance {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    IsingInstance::unweighted(n.max(1), edges)
        .unwrap()
        .with_label(format!("K{n}"))
}

pub fn complete_bipartite(a: usize, b: usize) -> IsingInstance {
    let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)));
    IsingInstance::unweighted((a + b).max(1), edges)
        .unwrap()
        .with_label(format!("K{a},{b}"))
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> IsingInstance {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    IsingInstance::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))
        .unwrap()
        .with_label(format!("C{n}"))
}

pub fn path(n: usize) -> IsingInstance {
    IsingInstance::unweighted(n.max(1), (1..n).map(|i| (i - 1, i)))
        .unwrap()
        .with_label(format!("P{n}"))
}

/// `dim`-dimensional hypercube graph.
pub fn hypercube(dim: u32) -> IsingInstance {
    let n = 1usize << dim;
    let edges = (0..n).flat_map(|v| {
        (0..dim)
            .map(move |b| (v, v ^ (1 << b)))
            .filter(|&(v, u)| v < u)
    });
    IsingInstance::unweighted(n, edges)
        .unwrap()
        .with_label(format!("Q{dim}"))
}

/// Mean vertex degree `2|E| / n`.
pub fn average_degree(inst: &IsingInstance) -> f64 {
    2.0 * inst.num_edges() as f64 / inst.n() as f64
}

/// Random simple `d`-regular graph on `n` vertices.
///
/// Stubs are paired at random; pairs that would form a self-loop or a
/// repeated edge are returned to the pool and re-paired, and the whole
/// attempt restarts if the remaining stubs cannot be paired.
pub fn generate_regular(n: usize, d: usize, weights: &WeightScheme, seed: u64) -> Result<IsingInstance> {
    weights.validate()?;
    if n == 0 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::Infeasible(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = rng_for(seed);
    let edges = loop {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            break edges;
        }
    };
    let weighted: Vec<_> = edges
        .into_iter()
        .map(|(i, j)| (i, j, weights.draw(&mut rng)))
        .collect();
    Ok(IsingInstance::new(n, weighted)?.with_label(format!("reg-n{n}-d{d}-s{seed}")))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<BTreeSet<(usize, usize)>> {
    let mut edges = BTreeSet::new();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && !edges.contains(&(a, b)) {
                edges.insert((a, b));
            } else {
                *leftover.entry(a).or_default() += 1;
                *leftover.entry(b).or_default() += 1;
            }
        }
        if leftover.is_empty() {
            break;
        }
        let nodes: Vec<usize> = leftover.keys().copied().collect();
        let pairable = nodes.iter().enumerate().any(|(x, &a)| {
            nodes[x + 1..].iter().any(|&b| !edges.contains(&(a, b)))
        });
        if !pairable {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c))
            .collect();
    }
    Some(edges)
}

/// Unweighted graph from one of the random models.
pub fn generate_random(model: RandomModel, n: usize, seed: u64) -> Result<IsingInstance> {
    if n == 0 {
        return Err(Error::Infeasible("random graph needs at least one vertex".into()));
    }
    let mut rng = rng_for(seed);
    let edges: BTreeSet<(usize, usize)> = match model {
        RandomModel::ErdosRenyi { q } => {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidArgument(format!("ER probability {q} outside [0, 1]")));
            }
            let mut edges = BTreeSet::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random::<f64>() < q {
                        edges.insert((i, j));
                    }
                }
            }
            edges
        }
        RandomModel::BarabasiAlbert { m } => barabasi_albert(n, m, &mut rng)?,
        RandomModel::WattsStrogatz { k, rewire } => watts_strogatz(n, k, rewire, &mut rng)?,
    };
    let label = format!("{}-n{n}-s{seed}", model.name());
    Ok(IsingInstance::unweighted(n, edges)?.with_label(label))
}

fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<BTreeSet<(usize, usize)>> {
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("BA needs 1 <= m < n, got m={m}, n={n}")));
    }
    let mut edges = BTreeSet::new();
    // degree-weighted endpoint list
    let mut repeated = Vec::new();
    for leaf in 1..=m {
        edges.insert((0, leaf));
        repeated.extend([0, leaf]);
    }
    for v in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(repeated[rng.random_range(0..repeated.len())]);
        }
        for &t in &targets {
            edges.insert((t, v));
            repeated.extend([t, v]);
        }
    }
    Ok(edges)
}

fn watts_strogatz(
    n: usize,
    k: usize,
    rewire: f64,
    rng: &mut ChaCha8Rng,
) -> Result<BTreeSet<(usize, usize)>> {
    if k == 0 || !k.is_multiple_of(2) || k >= n {
        return Err(Error::InvalidArgument(format!("WS needs even 0 < k < n, got k={k}, n={n}")));
    }
    if !(0.0..=1.0).contains(&rewire) {
        return Err(Error::InvalidArgument(format!("WS rewiring {rewire} outside [0, 1]")));
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in 1..=k / 2 {
            let v = (i + j) % n;
            adj[i].insert(v);
            adj[v].insert(i);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !adj[u].contains(&v) || rng.random::<f64>() >= rewire {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    Ok(adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect())
}

/// The tree seen by a depth-`p` light cone around one edge of a
/// `d`-regular graph. Edge 0 joins the two roots (vertices 0 and 1); every
/// non-leaf vertex has degree `d`.
pub fn generate_tree_subgraph(d: usize, p: usize) -> Result<IsingInstance> {
    if d == 0 || p == 0 {
        return Err(Error::InvalidArgument("tree subgraph needs d >= 1 and p >= 1".into()));
    }
    let mut edges = vec![(0, 1)];
    let mut frontier = vec![0usize, 1];
    let mut next_id = 2;
    for _ in 0..p {
        let mut next = Vec::with_capacity(frontier.len() * (d - 1));
        for &parent in &frontier {
            for _ in 0..d - 1 {
                edges.push((parent, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Ok(IsingInstance::unweighted(next_id, edges)?.with_label(format!("tree-d{d}-p{p}")))
}
