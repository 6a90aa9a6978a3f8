//! Recursive QAOA: freeze the most correlated pair `x_l = sign(M_kl) x_k`,
//! contract the instance, repeat, and solve the small remainder exactly.
//!
//! Offsets use the cost convention `C = 1/2 sum w (1 - x x) - 1/2 sum h x`:
//! for every assignment of the reduced variables,
//! `C_original(lifted) = C_reduced + cost_offset`. The Ising-energy
//! convention `E = 1/2 sum w x x + 1/2 sum h x` is reported alongside, with
//! `E_original(lifted) = E_reduced + energy_offset`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_symmetry, is_exact_int, IsingInstance, SymmetryClass, SymmetryKind};
use crate::maxcut::{brute_force_extremes_with, cost_value};
use crate::par::Execution;
use crate::params::ParameterSet;
use crate::simulator::{QaoaSimulator, DEFAULT_QUBIT_CAP};
use crate::symmetry::canonicalize_to_u;
use crate::transfer::{receiver_optimum, OptimizerConfig};

/// Correlations within this distance of the maximum count as ties.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// Surviving vertex `k`, indexed in the instance before the step.
    pub survivor: usize,
    /// Eliminated vertex `l`, indexed in the instance before the step.
    pub removed: usize,
    /// `+1` or `-1`; the constraint is `x_l = sign * x_k`.
    pub sign: i8,
    /// `M_kl` when the pair was chosen by correlation.
    pub correlation: Option<f64>,
    /// The contracted instance; vertices above `removed` shift down by one.
    pub instance: IsingInstance,
    pub cost_offset: f64,
    pub energy_offset: f64,
    /// Offsets summed over the chain up to and including this step.
    pub total_cost_offset: f64,
    pub total_energy_offset: f64,
}

impl ReductionStep {
    /// Survivor index in the contracted instance.
    pub fn survivor_after(&self) -> usize {
        if self.survivor > self.removed {
            self.survivor - 1
        } else {
            self.survivor
        }
    }

    /// Expands an assignment of the contracted instance to the previous one.
    pub fn lift(&self, reduced: &[i8]) -> Vec<i8> {
        let mut x = Vec::with_capacity(reduced.len() + 1);
        x.extend_from_slice(&reduced[..self.removed]);
        x.push(self.sign * reduced[self.survivor_after()]);
        x.extend_from_slice(&reduced[self.removed..]);
        x
    }
}

/// Edge of largest `|<Z_k Z_l>|`; ties go to the lexicographically smallest `(k, l)`.
pub fn max_correlation_edge(inst: &IsingInstance, params: &ParameterSet) -> Result<(usize, usize, f64)> {
    let state = QaoaSimulator::new(inst)?.prepare_state(params);
    if inst.num_edges() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let mut pairs: Vec<(usize, usize)> = inst.edges().iter().map(|e| (e.i, e.j)).collect();
    pairs.sort_unstable();
    let mut best: Option<(usize, usize, f64)> = None;
    for (k, l) in pairs {
        let m = state.zz_correlation(k, l)?;
        if best.is_none_or(|(_, _, b)| m.abs() > b.abs() + TIE_TOL) {
            best = Some((k, l, m));
        }
    }
    Ok(best.expect("edge set is non-empty"))
}

/// Imposes `x_l = sign * x_k` and removes vertex `l`.
pub fn contract(inst: &IsingInstance, k: usize, l: usize, sign: i8) -> Result<ReductionStep> {
    let n = inst.n();
    for v in [k, l] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")));
    }
    let w_kl = inst.edge_weight(k, l).ok_or(Error::NotAnEdge(k, l))?;
    let s = f64::from(sign);

    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut moved = Vec::new();
    for e in inst.edges() {
        let (i, j) = (e.i, e.j);
        if (i == k && j == l) || (i == l && j == k) {
            continue;
        }
        if i == l || j == l {
            moved.push((if i == l { j } else { i }, e.w));
        } else {
            weights.insert((i, j), e.w);
        }
    }
    let mut cost_offset = 0.5 * (1.0 - s) * w_kl;
    for (j, w) in moved {
        cost_offset += 0.5 * (1.0 - s) * w;
        let key = (j.min(k), j.max(k));
        let merged = weights.get(&key).copied().unwrap_or(0.0) + s * w;
        if merged == 0.0 {
            weights.remove(&key);
        } else {
            weights.insert(key, merged);
        }
    }
    let shift = |v: usize| if v > l { v - 1 } else { v };
    let mut fields: Vec<f64> = inst.fields().to_vec();
    fields[k] += s * fields[l];
    fields.remove(l);
    let reduced = IsingInstance::new(
        n - 1,
        weights.into_iter().map(|((i, j), w)| (shift(i), shift(j), w)),
    )?
    .with_fields(fields)?;
    let reduced = match inst.label() {
        Some(label) => reduced.with_label(format!("{label}/{}", n - 1)),
        None => reduced,
    };
    let energy_offset = 0.5 * s * w_kl;
    Ok(ReductionStep {
        survivor: k,
        removed: l,
        sign,
        correlation: None,
        instance: reduced,
        cost_offset,
        energy_offset,
        total_cost_offset: cost_offset,
        total_energy_offset: energy_offset,
    })
}

/// Contracts a sequence of `(k, l, sign)` constraints, each indexed in the
/// instance produced by the previous one.
pub fn contract_chain(inst: &IsingInstance, moves: &[(usize, usize, i8)]) -> Result<Vec<ReductionStep>> {
    let mut steps: Vec<ReductionStep> = Vec::with_capacity(moves.len());
    for &(k, l, sign) in moves {
        let current = steps.last().map_or(inst, |s| &s.instance);
        let mut step = contract(current, k, l, sign)?;
        if let Some(prev) = steps.last() {
            step.total_cost_offset += prev.total_cost_offset;
            step.total_energy_offset += prev.total_energy_offset;
        }
        steps.push(step);
    }
    Ok(steps)
}

/// Lifts an assignment of the last instance in `steps` back to the first.
pub fn lift_through(steps: &[ReductionStep], reduced: &[i8]) -> Vec<i8> {
    steps
        .iter()
        .rev()
        .fold(reduced.to_vec(), |x, step| step.lift(&x))
}

/// One JSON-lines record of the step log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iteration: usize,
    pub n_before: usize,
    /// Vertex ids of the input instance.
    pub eliminated: usize,
    pub survivor: usize,
    pub sign: i8,
    pub correlation: f64,
    pub class_before: SymmetryKind,
    pub class_after: SymmetryKind,
    pub params: ParameterSet,
    pub expectation: f64,
    pub cost_offset: f64,
    pub total_cost_offset: f64,
    pub energy_offset: f64,
    pub offset_convention: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RqaoaResult {
    pub assignment: Vec<i8>,
    pub cost: f64,
    pub steps: Vec<ReductionStep>,
    pub log: Vec<StepRecord>,
    /// Class of the input and of every contracted instance.
    pub classes: Vec<SymmetryKind>,
}

impl RqaoaResult {
    pub fn write_log_jsonl(&self, mut out: impl Write) -> Result<()> {
        for rec in &self.log {
            let line = serde_json::to_string(rec).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

/// Runs RQAOA down to at most `stop_at` vertices and brute-forces the rest.
///
/// Each iteration optimizes depth-`p` angles by multistart, warm-started from
/// the previous iteration's angles canonicalized for the current class when
/// that class has a shift symmetry.
pub fn rqaoa_run(inst: &IsingInstance, p: usize, cfg: &OptimizerConfig, stop_at: usize) -> Result<RqaoaResult> {
    if stop_at < 2 {
        return Err(Error::InvalidArgument("stop_at must be at least 2".into()));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("depth p must be at least 1".into()));
    }
    if inst.n() > DEFAULT_QUBIT_CAP {
        return Err(Error::TooManyQubits {
            n: inst.n(),
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut log = Vec::new();
    let mut classes = vec![classify_symmetry(inst).kind];
    let mut ids: Vec<usize> = (0..inst.n()).collect();
    let mut previous: Option<ParameterSet> = None;

    loop {
        let current = steps.last().map_or(inst, |s| &s.instance);
        if current.n() <= stop_at || current.num_edges() == 0 {
            break;
        }
        let kind = *classes.last().expect("non-empty");
        let warm: Vec<ParameterSet> = previous
            .iter()
            .filter_map(|x| {
                if kind.has_shift_symmetry() {
                    canonicalize_to_u(x, kind).ok().map(|c| c.params)
                } else {
                    Some(x.clone())
                }
            })
            .collect();
        let best = receiver_optimum(current, p, cfg, &warm)?;
        let (k, l, m) = max_correlation_edge(current, &best.params)?;
        let sign = if m < 0.0 { -1 } else { 1 };
        let mut step = contract(current, k, l, sign)?;
        step.correlation = Some(m);
        if let Some(prev) = steps.last() {
            step.total_cost_offset += prev.total_cost_offset;
            step.total_energy_offset += prev.total_energy_offset;
        }
        let class_after = classify_symmetry(&step.instance).kind;
        log.push(StepRecord {
            iteration: steps.len(),
            n_before: current.n(),
            eliminated: ids[l],
            survivor: ids[k],
            sign,
            correlation: m,
            class_before: kind,
            class_after,
            params: best.params.clone(),
            expectation: best.value,
            cost_offset: step.cost_offset,
            total_cost_offset: step.total_cost_offset,
            energy_offset: step.energy_offset,
            offset_convention: "C_original = C_reduced + total_cost_offset".into(),
        });
        ids.remove(l);
        classes.push(class_after);
        previous = Some(best.params);
        steps.push(step);
    }

    let last = steps.last().map_or(inst, |s| &s.instance);
    let remainder = brute_force_extremes_with(last, Execution::Sequential)?;
    let assignment = lift_through(&steps, &remainder.argmax);
    let cost = cost_value(inst, &assignment)?;
    let expected = remainder.c_max + steps.last().map_or(0.0, |s| s.total_cost_offset);
    if (cost - expected).abs() > 1e-9 * (1.0 + cost.abs()) {
        return Err(Error::InvariantViolation(format!(
            "lifted cost {cost} differs from reduced cost plus offset {expected}"
        )));
    }
    Ok(RqaoaResult {
        assignment,
        cost,
        steps,
        log,
        classes,
    })
}

/// Exact parity bookkeeping for one contraction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepAudit {
    /// `s_before(k)` and `s_before(l)` share a parity (true at every step of
    /// an EWS chain and at the first step of an OWS chain).
    pub same_parity_pair: bool,
    /// `s_after(k)`.
    pub merged_sum: i64,
    pub merged_even: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainAudit {
    /// Class of the input and of every contracted instance.
    pub classes: Vec<SymmetryClass>,
    /// Per-step parity data; empty for non-integer chains.
    pub steps: Vec<StepAudit>,
}

fn as_int(x: f64) -> Option<i64> {
    is_exact_int(x).then_some(x as i64)
}

/// Classifies every instance of a contraction chain and checks, in exact
/// integer arithmetic, `s'(k) = s(k) + sign s(l) - w_lk - sign w_lk` and
/// `s'(i) = s(i) - w_il + sign w_il` for every other vertex.
pub fn audit_symmetry_chain(inst: &IsingInstance, steps: &[ReductionStep]) -> Result<ChainAudit> {
    let mut classes = vec![classify_symmetry(inst)];
    let mut audits = Vec::new();
    let mut current = inst;
    for (idx, step) in steps.iter().enumerate() {
        let again = contract(current, step.survivor, step.removed, step.sign).map_err(|e| Error::ChainMismatch {
            step: idx,
            reason: e.to_string(),
        })?;
        if again.instance.edges() != step.instance.edges() || again.instance.fields() != step.instance.fields() {
            return Err(Error::ChainMismatch {
                step: idx,
                reason: "recorded instance differs from the contraction of its predecessor".into(),
            });
        }
        let before = classes.last().expect("non-empty");
        let after = classify_symmetry(&step.instance);
        if let (Some(s), Some(s2)) = (&before.vertex_sums, &after.vertex_sums) {
            let (k, l, sign) = (step.survivor, step.removed, i64::from(step.sign));
            let w = |a: usize, b: usize| current.edge_weight(a, b).and_then(as_int).unwrap_or(0);
            let shift = |v: usize| if v > l { v - 1 } else { v };
            let w_lk = w(l, k);
            let merged = s2[shift(k)];
            if merged != s[k] + sign * s[l] - w_lk - sign * w_lk {
                return Err(Error::InvariantViolation(format!(
                    "step {idx}: merged vertex sum {merged} breaks the contraction identity"
                )));
            }
            for i in (0..current.n()).filter(|&i| i != k && i != l) {
                let w_il = w(i, l);
                if s2[shift(i)] != s[i] - w_il + sign * w_il {
                    return Err(Error::InvariantViolation(format!("step {idx}: vertex {i} sum changed unexpectedly")));
                }
            }
            audits.push(StepAudit {
                same_parity_pair: (s[k] - s[l]).rem_euclid(2) == 0,
                merged_sum: merged,
                merged_even: merged.rem_euclid(2) == 0,
            });
        }
        classes.push(after);
        current = &step.instance;
    }
    Ok(ChainAudit { classes, steps: audits })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::graph::{complete, cycle, single_edge};
    use crate::maxcut::{brute_force_extremes, cost_value, ising_energy, spins_from_index};

    #[test]
    fn single_edge_correlation() {
        let (k, l, m) = max_correlation_edge(&single_edge(), &ParameterSet::single(PI / 2.0, PI / 8.0)).unwrap();
        assert_eq!((k, l), (0, 1));
        assert!((m + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ties_pick_first_edge() {
        let g = IsingInstance::unweighted(4, [(2, 3), (0, 1), (1, 2), (0, 3)]).unwrap();
        let (k, l, m) = max_correlation_edge(&g, &ParameterSet::single(0.0, 0.0)).unwrap();
        assert_eq!((k, l), (0, 1));
        assert!(m.abs() < 1e-15);
        let (k, l, _) = max_correlation_edge(&cycle(4), &ParameterSet::single(PI / 4.0, PI / 8.0)).unwrap();
        assert_eq!((k, l), (0, 1));
        let empty = IsingInstance::unweighted(3, []).unwrap();
        assert!(matches!(
            max_correlation_edge(&empty, &ParameterSet::single(0.1, 0.1)),
            Err(Error::EmptyEdgeSet)
        ));
    }

    #[test]
    fn k4_contraction_breaks_ows() {
        let step = contract(&complete(4), 2, 3, 1).unwrap();
        let t = &step.instance;
        assert_eq!(t.edge_weight(0, 1), Some(1.0));
        assert_eq!(t.edge_weight(0, 2), Some(2.0));
        assert_eq!(t.edge_weight(1, 2), Some(2.0));
        assert_eq!(t.integer_vertex_sums().unwrap(), vec![3, 3, 4]);
        assert_eq!(classify_symmetry(t).kind, SymmetryKind::IntegerGeneral);
        let audit = audit_symmetry_chain(&complete(4), &[step]).unwrap();
        assert_eq!(audit.classes[0].kind, SymmetryKind::Ows);
        assert_ne!(audit.classes[1].kind, SymmetryKind::Ows);
        assert!(audit.steps[0].merged_even);
    }

    #[test]
    fn c4_contraction_keeps_ews() {
        let step = contract(&cycle(4), 0, 1, 1).unwrap();
        let t = &step.instance;
        assert_eq!(t.num_edges(), 3);
        assert!(t.edges().iter().all(|e| e.w == 1.0));
        assert_eq!(classify_symmetry(t).kind, SymmetryKind::Ews);
    }

    #[test]
    fn cancellation_removes_edges() {
        // triangle 0-1-2 with w_02 = w_12: x_1 = -x_0 cancels edge (0, 2)
        let g = IsingInstance::unweighted(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let step = contract(&g, 0, 1, -1).unwrap();
        assert_eq!(step.instance.num_edges(), 0);
        assert!(contract(&cycle(4), 0, 2, 1).is_err());
    }

    #[test]
    fn offsets_reproduce_original_values() {
        let g = IsingInstance::new(5, [(0, 1, 2.0), (1, 2, -1.0), (2, 3, 3.0), (0, 3, 1.0), (1, 4, 1.0), (3, 4, -2.0)])
            .unwrap()
            .with_fields(vec![1.0, 0.0, -1.0, 2.0, 0.0])
            .unwrap();
        let mut moves = Vec::new();
        let mut current = g.clone();
        for sign in [-1, 1, -1] {
            let e = current.edges()[0];
            moves.push((e.i, e.j, sign));
            current = contract(&current, e.i, e.j, sign).unwrap().instance;
        }
        let steps = contract_chain(&g, &moves).unwrap();
        for (depth, step) in steps.iter().enumerate() {
            let m = step.instance.n();
            for y in 0..1usize << m {
                let x = spins_from_index(y, m);
                let lifted = lift_through(&steps[..=depth], &x);
                let c0 = cost_value(&g, &lifted).unwrap();
                let c1 = cost_value(&step.instance, &x).unwrap();
                assert_eq!(c0, c1 + step.total_cost_offset);
                let e0 = ising_energy(&g, &lifted).unwrap();
                let e1 = ising_energy(&step.instance, &x).unwrap();
                assert_eq!(e0, e1 + step.total_energy_offset);
            }
        }
        audit_symmetry_chain(&g, &steps).unwrap();
    }

    #[test]
    fn audit_rejects_broken_chain() {
        let mut steps = contract_chain(&cycle(5), &[(0, 1, 1), (0, 1, -1)]).unwrap();
        steps[1].sign = 1;
        assert!(matches!(
            audit_symmetry_chain(&cycle(5), &steps),
            Err(Error::ChainMismatch { step: 1, .. })
        ));
    }

    #[test]
    fn runs_reach_maximum_cuts() {
        let cfg = OptimizerConfig::default();
        let r = rqaoa_run(&single_edge(), 1, &cfg, 2).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.cost, 1.0);
        let r = rqaoa_run(&cycle(6), 1, &cfg, 3).unwrap();
        assert_eq!(r.cost, brute_force_extremes(&cycle(6)).unwrap().c_max);
        assert_eq!(r.cost, 6.0);
        assert_eq!(r.steps.len(), 3);
        assert_eq!(r.log.len(), 3);
        let mut buf = Vec::new();
        r.write_log_jsonl(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 3);
        let r = rqaoa_run(&complete(4), 1, &cfg, 2).unwrap();
        assert_eq!(r.cost, 4.0);
        assert!(rqaoa_run(&complete(4), 1, &cfg, 1).is_err());
    }
}
