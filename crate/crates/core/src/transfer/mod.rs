//! Transferability error between donor and receiver instances, local
//! optimization of QAOA angles, and degree-scan experiments.

mod optimize;
mod scan;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::IsingInstance;
use crate::maxcut::{approximation_ratio, brute_force_extremes, CutExtremes};
use crate::params::ParameterSet;
use crate::simulator::QaoaSimulator;
use crate::symmetry::{domain_tag, wrap_to_a, DomainTag};

pub use optimize::{
    default_starts, maximize, multistart, optimize_local, receiver_optimum, Method, OptimizeOutcome,
    OptimizerConfig,
};
pub use scan::{
    donor_class, donor_params, percentile, scan_degrees, write_csv, DonorSelector, ReceiverModel, ScanInstance,
    ScanPlan, ScanResult, ScanRow, CSV_HEADER,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub receiver: String,
    pub donor: String,
    pub donor_params: ParameterSet,
    pub receiver_params: ParameterSet,
    /// `r_R` at the receiver-optimal parameters.
    pub ratio_optimal: f64,
    /// `r_R` at the donor parameters.
    pub ratio_donor: f64,
    pub delta: f64,
    pub donor_domain: DomainTag,
    pub receiver_domain: DomainTag,
}

impl TransferReport {
    pub fn with_donor(mut self, label: impl Into<String>) -> Self {
        self.donor = label.into();
        self
    }
}

/// Domain of a parameter set after the wraps valid for `inst`.
fn tag_for(inst: &IsingInstance, params: &ParameterSet) -> DomainTag {
    let w = wrap_to_a(params, inst);
    domain_tag(if w.cost_preserving { &w.params } else { params })
}

/// `Delta = r_R(receiver_opt) - r_R(donor_params)`.
pub fn transfer_error(
    receiver: &IsingInstance,
    donor_params: &ParameterSet,
    receiver_opt: &ParameterSet,
) -> Result<TransferReport> {
    let sim = QaoaSimulator::new(receiver)?;
    let ext = brute_force_extremes(receiver)?;
    transfer_error_with(&sim, &ext, donor_params, receiver_opt)
}

/// As [`transfer_error`] with a prepared simulator and known extremes.
pub fn transfer_error_with(
    sim: &QaoaSimulator<'_>,
    ext: &CutExtremes,
    donor_params: &ParameterSet,
    receiver_opt: &ParameterSet,
) -> Result<TransferReport> {
    if donor_params.p() != receiver_opt.p() {
        return Err(Error::LengthMismatch {
            expected: receiver_opt.p(),
            got: donor_params.p(),
        });
    }
    let inst = sim.instance();
    let ratio_optimal = approximation_ratio(sim.expectation(receiver_opt), ext)?;
    let ratio_donor = approximation_ratio(sim.expectation(donor_params), ext)?;
    Ok(TransferReport {
        receiver: inst.name(),
        donor: "donor".into(),
        donor_params: donor_params.clone(),
        receiver_params: receiver_opt.clone(),
        ratio_optimal,
        ratio_donor,
        delta: ratio_optimal - ratio_donor,
        donor_domain: tag_for(inst, donor_params),
        receiver_domain: tag_for(inst, receiver_opt),
    })
}
