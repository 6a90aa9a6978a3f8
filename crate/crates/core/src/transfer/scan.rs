use std::fmt;
use std::io::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::optimize::{multistart, receiver_optimum, OptimizerConfig};
use super::{transfer_error_with, TransferReport};
use crate::analytic::{random_guess_reference, tree_optimum};
use crate::error::{Error, Result};
use crate::fixtures::tree3_p2;
use crate::graph::{
    average_degree, classify_symmetry, generate_random, generate_regular, generate_tree_subgraph, IsingInstance,
    RandomModel, SymmetryKind, WeightScheme,
};
use crate::maxcut::brute_force_extremes_with;
use crate::par::{map_indices, Execution};
use crate::params::ParameterSet;
use crate::simulator::{QaoaSimulator, DEFAULT_QUBIT_CAP};
use crate::symmetry::{apply_transform, canonicalize_to_u, non_u_member, wrap_angles, DomainTag, SymmetryTransform};

pub const CSV_HEADER: &str = "model,n,d,d_prime,p,domain,mean_delta,p25,p75,random_guess_ref";

/// Receiver family; `d` in the plan is the exact degree for regular graphs and
/// the target average degree otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ReceiverModel {
    Regular,
    /// `q = d / (n - 1)`
    ErdosRenyi,
    /// `m = max(1, round(d / 2))`
    BarabasiAlbert,
    /// ring degree `k = d` (must be even)
    WattsStrogatz { rewire: f64 },
}

impl ReceiverModel {
    pub fn name(&self) -> &'static str {
        match self {
            ReceiverModel::Regular => "regular",
            ReceiverModel::ErdosRenyi => "ER",
            ReceiverModel::BarabasiAlbert => "BA",
            ReceiverModel::WattsStrogatz { .. } => "WS",
        }
    }

    fn generate(&self, n: usize, d: usize, weights: &WeightScheme, seed: u64) -> Result<IsingInstance> {
        match *self {
            ReceiverModel::Regular => generate_regular(n, d, weights, seed),
            ReceiverModel::ErdosRenyi => {
                if n < 2 {
                    return Err(Error::Infeasible("ER receiver needs n >= 2".into()));
                }
                let q = d as f64 / (n - 1) as f64;
                generate_random(RandomModel::ErdosRenyi { q }, n, seed)
            }
            ReceiverModel::BarabasiAlbert => {
                let m = ((d as f64 / 2.0).round() as usize).max(1);
                generate_random(RandomModel::BarabasiAlbert { m }, n, seed)
            }
            ReceiverModel::WattsStrogatz { rewire } => {
                generate_random(RandomModel::WattsStrogatz { k: d, rewire }, n, seed)
            }
        }
    }
}

/// Which member of a donor's optimal orbit is transferred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DonorSelector {
    U1,
    U2,
    /// A member outside `U1^p` and `U2^p`.
    NonU,
    /// One of the eight depth-two sets of the 3-regular tree, numbered from 1.
    Set(usize),
}

impl fmt::Display for DonorSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DonorSelector::U1 => f.write_str("U1"),
            DonorSelector::U2 => f.write_str("U2"),
            DonorSelector::NonU => f.write_str("nonU"),
            DonorSelector::Set(k) => write!(f, "set{k}"),
        }
    }
}

impl std::str::FromStr for DonorSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "u1" => Ok(DonorSelector::U1),
            "u2" => Ok(DonorSelector::U2),
            "nonu" | "non-u" | "neither" => Ok(DonorSelector::NonU),
            other => other
                .strip_prefix("set")
                .and_then(|k| k.parse().ok())
                .filter(|k| (1..=8).contains(k))
                .map(DonorSelector::Set)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown donor selector {s:?}"))),
        }
    }
}

/// Landscape class used for a donor tree's orbit: that of the `d'`-regular
/// graph the tree is cut from.
pub fn donor_class(d_prime: usize) -> SymmetryKind {
    if d_prime % 2 == 1 {
        SymmetryKind::Ows
    } else {
        SymmetryKind::Ews
    }
}

/// Optimal `U1^p` angles of the `d'`-regular tree, maximizing the cut
/// probability of its central edge.
fn tree_u1_params(d_prime: usize, p: usize, cfg: &OptimizerConfig) -> Result<ParameterSet> {
    if p == 1 {
        return Ok(tree_optimum(d_prime)?.params());
    }
    if p == 2 && d_prime == 3 {
        return Ok(tree3_p2().swap_remove(0));
    }
    let tree = generate_tree_subgraph(d_prime, p)?;
    let sim = QaoaSimulator::with_options(&tree, DEFAULT_QUBIT_CAP, cfg.execution)?;
    let objective = |x: &ParameterSet| {
        let zz = sim.prepare_state(x).zz_correlation(0, 1).unwrap_or(1.0);
        0.5 * (1.0 - zz)
    };
    let best = multistart(&objective, p, cfg, &[])?;
    let canon = canonicalize_to_u(&best.params, donor_class(d_prime))?;
    if canon.domain == DomainTag::U1 {
        return Ok(canon.params);
    }
    Ok(wrap_angles(&apply_transform(&canon.params, SymmetryTransform::TimeReversal)?))
}

/// Donor angles of the `d'`-regular tree at depth `p` chosen by `selector`.
pub fn donor_params(d_prime: usize, p: usize, selector: DonorSelector, cfg: &OptimizerConfig) -> Result<ParameterSet> {
    if let DonorSelector::Set(k) = selector {
        if d_prime != 3 || p != 2 || !(1..=8).contains(&k) {
            return Err(Error::Infeasible(format!(
                "set{k} exists only for the 3-regular tree at p=2"
            )));
        }
        return Ok(tree3_p2().swap_remove(k - 1));
    }
    let base = tree_u1_params(d_prime, p, cfg)?;
    match selector {
        DonorSelector::U1 => Ok(base),
        DonorSelector::U2 => Ok(wrap_angles(&apply_transform(&base, SymmetryTransform::TimeReversal)?)),
        DonorSelector::NonU => non_u_member(&base, donor_class(d_prime))?.ok_or_else(|| {
            Error::Infeasible(format!("no orbit member outside U1 and U2 for d'={d_prime}"))
        }),
        DonorSelector::Set(_) => unreachable!(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPlan {
    pub model: ReceiverModel,
    pub n: usize,
    pub degrees: Vec<usize>,
    pub weights: WeightScheme,
    pub instances: usize,
    pub seed: u64,
    pub donor_degrees: Vec<usize>,
    pub donors: Vec<DonorSelector>,
    pub p: usize,
    pub optimizer: OptimizerConfig,
    /// Parallelism across experiment points; each simulation runs sequentially.
    pub execution: Execution,
}

impl ScanPlan {
    pub fn regular(n: usize, degrees: Vec<usize>, donor_degrees: Vec<usize>, p: usize) -> Self {
        Self {
            model: ReceiverModel::Regular,
            n,
            degrees,
            weights: WeightScheme::Unit,
            instances: 10,
            seed: 0,
            donor_degrees,
            donors: vec![DonorSelector::U1],
            p,
            optimizer: OptimizerConfig::default(),
            execution: Execution::default(),
        }
    }
}

/// One aggregated `(d, d', domain)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub model: String,
    pub n: usize,
    pub d: usize,
    pub d_prime: usize,
    pub p: usize,
    pub domain: String,
    pub mean_delta: f64,
    pub p25: f64,
    pub p75: f64,
    /// Mean of `r* - r(random assignment)` over the receivers.
    pub random_guess_ref: f64,
    pub instances: usize,
}

/// Everything computed for one receiver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanInstance {
    pub d: usize,
    pub index: usize,
    pub seed: u64,
    pub receiver: String,
    pub average_degree: f64,
    pub class: SymmetryKind,
    pub c_max: f64,
    pub c_min: f64,
    pub random_guess_ref: f64,
    pub optimizer_converged: bool,
    pub reports: Vec<ScanTransfer>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTransfer {
    pub d_prime: usize,
    pub domain: String,
    pub report: TransferReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub plan: ScanPlan,
    pub rows: Vec<ScanRow>,
    pub instances: Vec<ScanInstance>,
    pub warnings: Vec<String>,
}

/// Percentile by linear interpolation between order statistics.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
}

/// Seed for receiver `index` of degree `d`, independent of evaluation order.
fn point_seed(seed: u64, d: usize, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((d as u64) << 32) | index as u64);
    rng.next_u64()
}

struct Donor {
    d_prime: usize,
    label: String,
    params: ParameterSet,
}

fn run_point(
    plan: &ScanPlan,
    donors: &[Donor],
    d: usize,
    index: usize,
) -> std::result::Result<ScanInstance, String> {
    let seed = point_seed(plan.seed, d, index);
    let fail = |e: Error| format!("d={d} instance {index}: {e}");
    let inst = plan.model.generate(plan.n, d, &plan.weights, seed).map_err(fail)?;
    let ext = brute_force_extremes_with(&inst, Execution::Sequential).map_err(fail)?;
    if ext.c_max <= ext.c_min {
        return Err(fail(Error::DegenerateExtremes(ext.c_max)));
    }
    let cfg = OptimizerConfig {
        execution: Execution::Sequential,
        ..plan.optimizer
    };
    let warm: Vec<ParameterSet> = donors.iter().map(|d| d.params.clone()).collect();
    let best = receiver_optimum(&inst, plan.p, &cfg, &warm).map_err(fail)?;
    let sim = QaoaSimulator::with_options(&inst, DEFAULT_QUBIT_CAP, Execution::Sequential).map_err(fail)?;
    let ratio_star = crate::maxcut::approximation_ratio(best.value, &ext).map_err(fail)?;
    let reports = donors
        .iter()
        .map(|donor| {
            let r = transfer_error_with(&sim, &ext, &donor.params, &best.params)?
                .with_donor(format!("tree-d{}-{}", donor.d_prime, donor.label));
            Ok(ScanTransfer {
                d_prime: donor.d_prime,
                domain: donor.label.clone(),
                report: r,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(fail)?;
    Ok(ScanInstance {
        d,
        index,
        seed,
        receiver: inst.name(),
        average_degree: average_degree(&inst),
        class: classify_symmetry(&inst).kind,
        c_max: ext.c_max,
        c_min: ext.c_min,
        random_guess_ref: random_guess_reference(ratio_star, &ext).map_err(fail)?,
        optimizer_converged: best.converged,
        reports,
    })
}

/// Runs a degree scan. Infeasible receivers or donors are skipped and listed
/// in `warnings`; rows follow the plan's degree, donor-degree and donor order.
pub fn scan_degrees(plan: &ScanPlan) -> Result<ScanResult> {
    if plan.p == 0 || plan.instances == 0 || plan.degrees.is_empty() || plan.donor_degrees.is_empty() {
        return Err(Error::InvalidArgument(
            "scan needs p >= 1, at least one instance, receiver degree and donor degree".into(),
        ));
    }
    if plan.donors.is_empty() {
        return Err(Error::InvalidArgument("scan needs at least one donor selector".into()));
    }
    if plan.n > DEFAULT_QUBIT_CAP {
        return Err(Error::TooManyQubits {
            n: plan.n,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    plan.optimizer.validate()?;

    let mut warnings = Vec::new();
    if plan.model != ReceiverModel::Regular && plan.weights != WeightScheme::Unit {
        warnings.push(format!("{} receivers are unweighted; weight scheme ignored", plan.model.name()));
    }
    let mut donors = Vec::new();
    for &dp in &plan.donor_degrees {
        for &sel in &plan.donors {
            match donor_params(dp, plan.p, sel, &plan.optimizer) {
                Ok(params) => donors.push(Donor {
                    d_prime: dp,
                    label: sel.to_string(),
                    params,
                }),
                Err(e) => warnings.push(format!("donor d'={dp} {sel}: {e}")),
            }
        }
    }

    let points: Vec<(usize, usize)> = plan
        .degrees
        .iter()
        .flat_map(|&d| (0..plan.instances).map(move |i| (d, i)))
        .collect();
    let results = map_indices(plan.execution, points.len(), |k| {
        let (d, i) = points[k];
        run_point(plan, &donors, d, i)
    });
    let mut instances = Vec::new();
    for r in results {
        match r {
            Ok(inst) => instances.push(inst),
            Err(w) => warnings.push(w),
        }
    }

    let mut rows = Vec::new();
    for &d in &plan.degrees {
        let at_d: Vec<&ScanInstance> = instances.iter().filter(|s| s.d == d).collect();
        if at_d.is_empty() {
            continue;
        }
        let guess = at_d.iter().map(|s| s.random_guess_ref).sum::<f64>() / at_d.len() as f64;
        for donor in &donors {
            let deltas: Vec<f64> = at_d
                .iter()
                .flat_map(|s| &s.reports)
                .filter(|t| t.d_prime == donor.d_prime && t.domain == donor.label)
                .map(|t| t.report.delta)
                .collect();
            rows.push(ScanRow {
                model: plan.model.name().into(),
                n: plan.n,
                d,
                d_prime: donor.d_prime,
                p: plan.p,
                domain: donor.label.clone(),
                mean_delta: deltas.iter().sum::<f64>() / deltas.len() as f64,
                p25: percentile(&deltas, 0.25),
                p75: percentile(&deltas, 0.75),
                random_guess_ref: guess,
                instances: deltas.len(),
            });
        }
    }
    Ok(ScanResult {
        plan: plan.clone(),
        rows,
        instances,
        warnings,
    })
}

pub fn write_csv(rows: &[ScanRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.model, r.n, r.d, r.d_prime, r.p, r.domain, r.mean_delta, r.p25, r.p75, r.random_guess_ref
        )?;
    }
    Ok(())
}
