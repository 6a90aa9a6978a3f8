//! Classical cost evaluation, exact extremes by enumeration, and
//! approximation ratios.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_symmetry, IsingInstance, SymmetryKind};
use crate::par::{map_chunks, Execution};

/// Largest instance `brute_force_extremes` will enumerate.
pub const BRUTE_FORCE_CAP: usize = 30;

/// Spin `x_q` encoded by bit `q` of a basis index (`0 -> +1`, `1 -> -1`).
#[inline]
pub fn spin(y: usize, q: usize) -> f64 {
    1.0 - 2.0 * ((y >> q) & 1) as f64
}

pub fn spins_from_index(y: usize, n: usize) -> Vec<i8> {
    (0..n).map(|q| if (y >> q) & 1 == 0 { 1 } else { -1 }).collect()
}

pub fn index_from_spins(x: &[i8]) -> usize {
    x.iter()
        .enumerate()
        .filter(|(_, &s)| s < 0)
        .fold(0, |y, (q, _)| y | (1 << q))
}

fn check_spins(inst: &IsingInstance, x: &[i8]) -> Result<()> {
    if x.len() != inst.n() {
        return Err(Error::LengthMismatch {
            expected: inst.n(),
            got: x.len(),
        });
    }
    if x.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::InvalidArgument("spins must be +1 or -1".into()));
    }
    Ok(())
}

/// MaxCut value `1/2 sum w_ij (1 - x_i x_j)`; the instance must have no fields.
pub fn cut_value(inst: &IsingInstance, x: &[i8]) -> Result<f64> {
    if !inst.is_maxcut() {
        return Err(Error::InvalidArgument(
            "cut_value needs a MaxCut instance; use cost_value for local fields".into(),
        ));
    }
    cost_value(inst, x)
}

/// General cost `1/2 sum w_ij (1 - x_i x_j) - 1/2 sum h_i x_i`.
pub fn cost_value(inst: &IsingInstance, x: &[i8]) -> Result<f64> {
    check_spins(inst, x)?;
    Ok(cost_at_index(inst, index_from_spins(x)))
}

/// Ising energy `1/2 sum w_ij x_i x_j + 1/2 sum h_i x_i`.
pub fn ising_energy(inst: &IsingInstance, x: &[i8]) -> Result<f64> {
    check_spins(inst, x)?;
    let pair: f64 = inst
        .edges()
        .iter()
        .map(|e| e.w * f64::from(x[e.i] * x[e.j]))
        .sum();
    let field: f64 = inst.fields().iter().zip(x).map(|(h, &s)| h * f64::from(s)).sum();
    Ok(0.5 * (pair + field))
}

/// Cost of the basis state with index `y`.
pub fn cost_at_index(inst: &IsingInstance, y: usize) -> f64 {
    let mut c = 0.0;
    for e in inst.edges() {
        if ((y >> e.i) ^ (y >> e.j)) & 1 == 1 {
            c += e.w;
        }
    }
    for (q, &h) in inst.fields().iter().enumerate() {
        if h != 0.0 {
            c -= 0.5 * h * spin(y, q);
        }
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutExtremes {
    pub c_max: f64,
    pub c_min: f64,
    pub argmax: Vec<i8>,
    pub argmin: Vec<i8>,
    /// Sum of all edge weights; the cost of a uniformly random assignment is half of it.
    pub total_weight: f64,
    pub num_edges: usize,
    /// Fraction of edges in a maximum cut, for unweighted instances.
    pub k: Option<f64>,
}

impl CutExtremes {
    /// Expected cost of a uniformly random assignment.
    pub fn random_cost(&self) -> f64 {
        0.5 * self.total_weight
    }
}

#[derive(Clone, Copy)]
struct ChunkBest {
    max: f64,
    argmax: usize,
    min: f64,
    argmin: usize,
    parity_ok: bool,
}

pub fn brute_force_extremes(inst: &IsingInstance) -> Result<CutExtremes> {
    brute_force_extremes_with(inst, Execution::default())
}

/// Exact `C_max` and `C_min` by Gray-code enumeration.
///
/// MaxCut instances fix the last spin to `+1` (global flip symmetry) and
/// enumerate `2^(n-1)` states; instances with fields enumerate all `2^n`.
/// On EWS MaxCut instances every visited cost is checked to be an even integer.
pub fn brute_force_extremes_with(inst: &IsingInstance, exec: Execution) -> Result<CutExtremes> {
    let n = inst.n();
    if n > BRUTE_FORCE_CAP {
        return Err(Error::TooLargeForBruteForce {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let free = if inst.is_maxcut() { n - 1 } else { n };
    let check_parity = inst.is_maxcut() && classify_symmetry(inst).kind == SymmetryKind::Ews;
    let adj = inst.neighbors();
    let fields = inst.fields();

    let low = free.min(16);
    let chunks = 1usize << (free - low);
    let per_chunk = 1usize << low;
    let parts = map_chunks(exec, chunks, 1, |range| {
        let prefix = range.start << low;
        let mut y = prefix;
        let mut c = cost_at_index(inst, y);
        let mut best = ChunkBest {
            max: c,
            argmax: y,
            min: c,
            argmin: y,
            parity_ok: !check_parity || c.rem_euclid(2.0) == 0.0,
        };
        for t in 1..per_chunk {
            let k = t.trailing_zeros() as usize;
            let xk = spin(y, k);
            let local: f64 = adj[k].iter().map(|&(j, w)| w * spin(y, j)).sum::<f64>() + fields[k];
            c += xk * local;
            y ^= 1 << k;
            if c > best.max {
                best.max = c;
                best.argmax = y;
            }
            if c < best.min {
                best.min = c;
                best.argmin = y;
            }
            if check_parity && c.rem_euclid(2.0) != 0.0 {
                best.parity_ok = false;
            }
        }
        best
    });

    let mut best = parts[0];
    for part in &parts[1..] {
        best.parity_ok &= part.parity_ok;
        if part.max > best.max {
            best.max = part.max;
            best.argmax = part.argmax;
        }
        if part.min < best.min {
            best.min = part.min;
            best.argmin = part.argmin;
        }
    }
    if !best.parity_ok {
        return Err(Error::InvariantViolation(
            "odd cost value found on an EWS instance".into(),
        ));
    }
    // recompute directly so incremental drift never reaches the caller
    let c_max = cost_at_index(inst, best.argmax);
    let c_min = cost_at_index(inst, best.argmin);
    let k = (inst.is_unweighted() && inst.num_edges() > 0 && inst.is_maxcut())
        .then(|| c_max / inst.num_edges() as f64);
    Ok(CutExtremes {
        c_max,
        c_min,
        argmax: spins_from_index(best.argmax, n),
        argmin: spins_from_index(best.argmin, n),
        total_weight: inst.total_weight(),
        num_edges: inst.num_edges(),
        k,
    })
}

/// `(c - C_min) / (C_max - C_min)`, unclamped.
pub fn approximation_ratio(c: f64, ext: &CutExtremes) -> Result<f64> {
    let span = ext.c_max - ext.c_min;
    if span <= 0.0 {
        return Err(Error::DegenerateExtremes(ext.c_max));
    }
    Ok((c - ext.c_min) / span)
}

/// Ratio clamped to `[0, 1]` for reporting.
pub fn clamped_ratio(c: f64, ext: &CutExtremes) -> Result<f64> {
    approximation_ratio(c, ext).map(|r| r.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_bipartite, cycle, single_edge};

    fn naive_extremes(inst: &IsingInstance) -> (f64, f64) {
        (0..1usize << inst.n())
            .map(|y| cost_at_index(inst, y))
            .fold((f64::MIN, f64::MAX), |(hi, lo), c| (hi.max(c), lo.min(c)))
    }

    #[test]
    fn cut_value_examples() {
        assert_eq!(cut_value(&single_edge(), &[1, -1]).unwrap(), 1.0);
        assert_eq!(cut_value(&complete(5), &[1; 5]).unwrap(), 0.0);
        assert_eq!(cut_value(&complete(3), &[1, 1, -1]).unwrap(), 2.0);
        assert!(cut_value(&complete(3), &[1, 1]).is_err());
        assert!(cut_value(&complete(3), &[1, 1, 0]).is_err());
        let with_field = complete(3).with_fields(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(cut_value(&with_field, &[1, 1, 1]).is_err());
    }

    #[test]
    fn extremes_examples() {
        let e = brute_force_extremes(&complete(3)).unwrap();
        assert_eq!((e.c_max, e.c_min), (2.0, 0.0));
        let e = brute_force_extremes(&cycle(4)).unwrap();
        assert_eq!((e.c_max, e.k), (4.0, Some(1.0)));
        let e = brute_force_extremes(&complete_bipartite(3, 3)).unwrap();
        assert_eq!((e.c_max, e.k), (9.0, Some(1.0)));
        assert_eq!(cut_value(&complete_bipartite(3, 3), &e.argmax).unwrap(), 9.0);
    }

    #[test]
    fn ratio_examples() {
        let e = brute_force_extremes(&cycle(4)).unwrap();
        assert_eq!(approximation_ratio(4.0, &e).unwrap(), 1.0);
        assert_eq!(approximation_ratio(0.0, &e).unwrap(), 0.0);
        assert_eq!(approximation_ratio(3.0, &e).unwrap(), 0.75);
        assert_eq!(clamped_ratio(5.0, &e).unwrap(), 1.0);
        let flat = IsingInstance::unweighted(3, []).unwrap();
        let e = brute_force_extremes(&flat).unwrap();
        assert!(matches!(approximation_ratio(0.0, &e), Err(Error::DegenerateExtremes(_))));
    }

    #[test]
    fn fields_use_full_enumeration() {
        let g = complete(4).with_fields(vec![3.0, -1.0, 0.5, 2.0]).unwrap();
        let e = brute_force_extremes(&g).unwrap();
        assert_eq!((e.c_max, e.c_min), naive_extremes(&g));
        assert_eq!(cost_value(&g, &e.argmax).unwrap(), e.c_max);
    }

    #[test]
    fn cost_and_energy_relation() {
        let g = IsingInstance::new(4, [(0, 1, 2.0), (1, 2, -1.0), (2, 3, 0.5)])
            .unwrap()
            .with_fields(vec![1.0, 0.0, -2.0, 0.25])
            .unwrap();
        for y in 0..16 {
            let x = spins_from_index(y, 4);
            let c = cost_value(&g, &x).unwrap();
            let e = ising_energy(&g, &x).unwrap();
            assert!((c - (0.5 * g.total_weight() - e)).abs() < 1e-12);
        }
    }

    #[test]
    fn execution_modes_agree() {
        let g = crate::graph::generate_regular(20, 3, &crate::graph::WeightScheme::PmOne, 4).unwrap();
        let a = brute_force_extremes_with(&g, Execution::Sequential).unwrap();
        let b = brute_force_extremes_with(&g, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn size_guard() {
        let g = IsingInstance::unweighted(31, [(0, 1)]).unwrap();
        assert!(matches!(
            brute_force_extremes(&g),
            Err(Error::TooLargeForBruteForce { .. })
        ));
    }
}
