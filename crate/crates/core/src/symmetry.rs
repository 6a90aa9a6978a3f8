//! Landscape symmetries of integer-weighted instances, the search domains
//! `A^p`, `U1^p`, `U2^p`, and canonicalization of optimal parameters.
//!
//! Layers are indexed from 0. All intervals are half-open `[lo, hi)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{IsingInstance, SymmetryKind};
use crate::params::ParameterSet;
use crate::simulator::QaoaSimulator;

/// Tolerance for treating two wrapped angles as the same point.
pub const DEDUP_TOL: f64 = 1e-12;

const TAU: f64 = 2.0 * PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    A,
    U1,
    U2,
    Custom,
}

/// Box applied to every layer: `gamma_i in [g0, g1)`, `beta_i in [b0, b1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub gamma: (f64, f64),
    pub beta: (f64, f64),
}

impl Domain {
    pub const A: Domain = Domain {
        kind: DomainKind::A,
        gamma: (-PI, PI),
        beta: (-FRAC_PI_4, FRAC_PI_4),
    };
    pub const U1: Domain = Domain {
        kind: DomainKind::U1,
        gamma: (0.0, FRAC_PI_2),
        beta: (0.0, FRAC_PI_4),
    };
    pub const U2: Domain = Domain {
        kind: DomainKind::U2,
        gamma: (-FRAC_PI_2, 0.0),
        beta: (-FRAC_PI_4, 0.0),
    };

    pub fn custom(gamma: (f64, f64), beta: (f64, f64)) -> Result<Domain> {
        if !(gamma.0 < gamma.1 && beta.0 < beta.1) {
            return Err(Error::InvalidArgument("empty domain interval".into()));
        }
        Ok(Domain {
            kind: DomainKind::Custom,
            gamma,
            beta,
        })
    }

    pub fn contains_pair(&self, gamma: f64, beta: f64) -> bool {
        (self.gamma.0..self.gamma.1).contains(&gamma) && (self.beta.0..self.beta.1).contains(&beta)
    }
}

pub fn in_domain(params: &ParameterSet, domain: &Domain) -> bool {
    params
        .gammas()
        .iter()
        .zip(params.betas())
        .all(|(&g, &b)| domain.contains_pair(g, b))
}

/// Which transferable domain a parameter set lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainTag {
    U1,
    U2,
    Neither,
}

impl fmt::Display for DomainTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainTag::U1 => "U1",
            DomainTag::U2 => "U2",
            DomainTag::Neither => "nonU",
        })
    }
}

pub fn domain_tag(params: &ParameterSet) -> DomainTag {
    if in_domain(params, &Domain::U1) {
        DomainTag::U1
    } else if in_domain(params, &Domain::U2) {
        DomainTag::U2
    } else {
        DomainTag::Neither
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryTransform {
    /// `gamma_i -> gamma_i +- pi`
    EwsShift { layer: usize, sign: Sign },
    /// `gamma_i -> gamma_i +- pi` and `beta_j -> -beta_j` for all `j >= i`
    OwsShift { layer: usize, sign: Sign },
    /// `(gamma, beta) -> (-gamma, -beta)`
    TimeReversal,
    /// `gamma_i -> gamma_i +- 2 pi`
    GammaPeriod { layer: usize, sign: Sign },
    /// `beta_i -> beta_i +- pi/2`
    BetaPeriod { layer: usize, sign: Sign },
}

impl SymmetryTransform {
    fn layer(&self) -> Option<usize> {
        match *self {
            SymmetryTransform::EwsShift { layer, .. }
            | SymmetryTransform::OwsShift { layer, .. }
            | SymmetryTransform::GammaPeriod { layer, .. }
            | SymmetryTransform::BetaPeriod { layer, .. } => Some(layer),
            SymmetryTransform::TimeReversal => None,
        }
    }

    /// Whether the output distribution `P(y)` (not only the cost) is preserved
    /// when the transform is a symmetry. A `pi/2` mixer shift relabels every
    /// outcome by a global bit flip.
    pub fn preserves_distribution(&self) -> bool {
        !matches!(self, SymmetryTransform::BetaPeriod { .. })
    }
}

impl fmt::Display for SymmetryTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |sign: &Sign| if *sign == Sign::Plus { '+' } else { '-' };
        match self {
            SymmetryTransform::EwsShift { layer, sign } => write!(f, "ews_shift({layer},{})", s(sign)),
            SymmetryTransform::OwsShift { layer, sign } => write!(f, "ows_shift({layer},{})", s(sign)),
            SymmetryTransform::TimeReversal => f.write_str("time_reversal"),
            SymmetryTransform::GammaPeriod { layer, sign } => write!(f, "gamma_period({layer},{})", s(sign)),
            SymmetryTransform::BetaPeriod { layer, sign } => write!(f, "beta_period({layer},{})", s(sign)),
        }
    }
}

/// Applies `t` without wrapping.
pub fn apply_transform(params: &ParameterSet, t: SymmetryTransform) -> Result<ParameterSet> {
    let p = params.p();
    if let Some(layer) = t.layer() {
        if layer >= p {
            return Err(Error::InvalidLayer { layer, p });
        }
    }
    let mut out = params.clone();
    match t {
        SymmetryTransform::EwsShift { layer, sign } => out.gammas_mut()[layer] += sign.value() * PI,
        SymmetryTransform::OwsShift { layer, sign } => {
            out.gammas_mut()[layer] += sign.value() * PI;
            for b in &mut out.betas_mut()[layer..] {
                *b = -*b;
            }
        }
        SymmetryTransform::TimeReversal => {
            out.gammas_mut().iter_mut().for_each(|g| *g = -*g);
            out.betas_mut().iter_mut().for_each(|b| *b = -*b);
        }
        SymmetryTransform::GammaPeriod { layer, sign } => out.gammas_mut()[layer] += sign.value() * TAU,
        SymmetryTransform::BetaPeriod { layer, sign } => out.betas_mut()[layer] += sign.value() * FRAC_PI_2,
    }
    Ok(out)
}

/// Transforms under which the cost landscape of an instance of class `kind`
/// is invariant, at depth `p`. `maxcut` says whether the instance has no
/// local fields (required for the mixer period).
pub fn transforms_for(kind: SymmetryKind, p: usize, maxcut: bool) -> Vec<SymmetryTransform> {
    let mut out = vec![SymmetryTransform::TimeReversal];
    if !kind.is_integer() {
        return out;
    }
    for layer in 0..p {
        for sign in [Sign::Plus, Sign::Minus] {
            out.push(SymmetryTransform::GammaPeriod { layer, sign });
            if maxcut {
                out.push(SymmetryTransform::BetaPeriod { layer, sign });
            }
            match kind {
                SymmetryKind::Ews => out.push(SymmetryTransform::EwsShift { layer, sign }),
                SymmetryKind::Ows => out.push(SymmetryTransform::OwsShift { layer, sign }),
                _ => {}
            }
        }
    }
    out
}

/// `lo + ((x - lo) mod period)`, always in `[lo, lo + period)`.
fn wrap_into(x: f64, lo: f64, period: f64) -> f64 {
    if (lo..lo + period).contains(&x) {
        return x;
    }
    let w = lo + (x - lo).rem_euclid(period);
    if w >= lo + period {
        lo
    } else {
        w
    }
}

fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Reduces every `gamma_i` into `[-pi, pi)` and every `beta_i` into `[-pi/4, pi/4)`.
pub fn wrap_angles(params: &ParameterSet) -> ParameterSet {
    let mut out = params.clone();
    out.gammas_mut().iter_mut().for_each(|g| *g = wrap_into(*g, -PI, TAU));
    out.betas_mut().iter_mut().for_each(|b| *b = wrap_into(*b, -FRAC_PI_4, FRAC_PI_2));
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wrapped {
    pub params: ParameterSet,
    /// Whether the wrap is guaranteed to leave the instance's cost unchanged.
    pub cost_preserving: bool,
}

/// Wraps into `A^p` and records whether that is a symmetry of `inst`.
///
/// The `gamma` period needs integer coefficients. The `beta` period also needs
/// zero local fields, since it conjugates the state by a global bit flip.
pub fn wrap_to_a(params: &ParameterSet, inst: &IsingInstance) -> Wrapped {
    let wrapped = wrap_angles(params);
    let betas_moved = wrapped
        .betas()
        .iter()
        .zip(params.betas())
        .any(|(a, b)| a != b);
    let cost_preserving = inst.is_integer() && (inst.is_maxcut() || !betas_moved);
    Wrapped {
        params: wrapped,
        cost_preserving,
    }
}

fn same_point(a: &ParameterSet, b: &ParameterSet) -> bool {
    a.gammas()
        .iter()
        .zip(b.gammas())
        .all(|(x, y)| circular_distance(*x, *y, TAU) < DEDUP_TOL)
        && a.betas()
            .iter()
            .zip(b.betas())
            .all(|(x, y)| circular_distance(*x, *y, FRAC_PI_2) < DEDUP_TOL)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub kind: SymmetryKind,
    /// Distinct members wrapped into `A^p`; the first is the wrapped input.
    pub members: Vec<ParameterSet>,
    /// `2^(p+1)`
    pub expected_size: usize,
    /// Fewer distinct members than `expected_size`.
    pub degenerate: bool,
    /// The input sits on a fixed locus of some generator (`beta_i = 0` or
    /// `gamma_i` a multiple of `pi/2`), where coincidences are possible.
    pub nongeneric: bool,
}

fn is_nongeneric(params: &ParameterSet) -> bool {
    params.betas().iter().any(|&b| circular_distance(b, 0.0, FRAC_PI_4) < DEDUP_TOL)
        || params
            .gammas()
            .iter()
            .any(|&g| circular_distance(g, 0.0, FRAC_PI_2) < DEDUP_TOL)
}

/// All images of `params` under layer shifts and time reversal, wrapped into `A^p`.
pub fn enumerate_orbit(params: &ParameterSet, kind: SymmetryKind) -> Result<Orbit> {
    if !kind.has_shift_symmetry() {
        return Err(Error::UnsupportedClass(format!(
            "{kind} instances have no layer-shift symmetry"
        )));
    }
    let p = params.p();
    if p >= usize::BITS as usize - 2 {
        return Err(Error::InvalidArgument(format!("depth {p} too large for orbit enumeration")));
    }
    let base = wrap_angles(params);
    let mut members: Vec<ParameterSet> = Vec::new();
    for reverse in [false, true] {
        for mask in 0..1usize << p {
            let mut x = base.clone();
            for layer in (0..p).filter(|l| mask >> l & 1 == 1) {
                let t = match kind {
                    SymmetryKind::Ews => SymmetryTransform::EwsShift { layer, sign: Sign::Plus },
                    _ => SymmetryTransform::OwsShift { layer, sign: Sign::Plus },
                };
                x = apply_transform(&x, t)?;
            }
            if reverse {
                x = apply_transform(&x, SymmetryTransform::TimeReversal)?;
            }
            let x = wrap_angles(&x);
            if !members.iter().any(|m| same_point(m, &x)) {
                members.push(x);
            }
        }
    }
    let expected_size = 1usize << (p + 1);
    Ok(Orbit {
        kind,
        degenerate: members.len() < expected_size,
        nongeneric: is_nongeneric(&base),
        members,
        expected_size,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Canonical {
    pub params: ParameterSet,
    pub domain: DomainTag,
}

fn lexicographic_min(candidates: impl Iterator<Item = ParameterSet>) -> Option<ParameterSet> {
    candidates.min_by(|a, b| {
        a.to_interleaved()
            .iter()
            .zip(b.to_interleaved().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// The orbit member in `U1^p` if any, otherwise the one in `U2^p`.
///
/// Ties inside a domain are broken by the smallest interleaved coordinate
/// tuple, so every member of an orbit maps to the same representative.
pub fn canonicalize_to_u(params: &ParameterSet, kind: SymmetryKind) -> Result<Canonical> {
    let orbit = enumerate_orbit(params, kind)?;
    for (domain, tag) in [(Domain::U1, DomainTag::U1), (Domain::U2, DomainTag::U2)] {
        let pick = lexicographic_min(orbit.members.iter().filter(|m| in_domain(m, &domain)).cloned());
        if let Some(params) = pick {
            return Ok(Canonical { params, domain: tag });
        }
    }
    Err(Error::NotRepresentable)
}

/// Orbit member outside `U1^p` and `U2^p`, if one exists; lexicographically smallest.
pub fn non_u_member(params: &ParameterSet, kind: SymmetryKind) -> Result<Option<ParameterSet>> {
    let orbit = enumerate_orbit(params, kind)?;
    Ok(lexicographic_min(
        orbit
            .members
            .into_iter()
            .filter(|m| domain_tag(m) == DomainTag::Neither),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub transform: SymmetryTransform,
    pub cost_before: f64,
    pub cost_after: f64,
    pub cost_gap: f64,
    /// Largest entrywise `|P(y) - P'(y)|`, when the transform preserves distributions.
    pub distribution_gap: Option<f64>,
    pub passed: bool,
}

/// Numerically checks that `t` leaves the cost (and, where applicable, the
/// whole outcome distribution) unchanged within `tol`.
pub fn verify_symmetry(
    inst: &IsingInstance,
    params: &ParameterSet,
    t: SymmetryTransform,
    tol: f64,
) -> Result<SymmetryCheck> {
    verify_symmetry_with(&QaoaSimulator::new(inst)?, params, t, tol)
}

pub fn verify_symmetry_with(
    sim: &QaoaSimulator<'_>,
    params: &ParameterSet,
    t: SymmetryTransform,
    tol: f64,
) -> Result<SymmetryCheck> {
    let moved = apply_transform(params, t)?;
    let s0 = sim.prepare_state(params);
    let s1 = sim.prepare_state(&moved);
    let exec = sim.execution();
    let cost_before = s0.expectation_diagonal(sim.cost_diagonal(), exec);
    let cost_after = s1.expectation_diagonal(sim.cost_diagonal(), exec);
    let cost_gap = (cost_before - cost_after).abs();
    let distribution_gap = t.preserves_distribution().then(|| {
        s0.amplitudes()
            .iter()
            .zip(s1.amplitudes())
            .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
            .fold(0.0, f64::max)
    });
    Ok(SymmetryCheck {
        transform: t,
        cost_before,
        cost_after,
        cost_gap,
        distribution_gap,
        passed: cost_gap <= tol && distribution_gap.is_none_or(|g| g <= tol),
    })
}
