//! Closed-form depth-one results for triangle-free regular graphs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{girth, IsingInstance};
use crate::maxcut::{approximation_ratio, brute_force_extremes, CutExtremes};
use crate::params::ParameterSet;

/// Optimal depth-one angles of the `d`-regular tree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeOptimum {
    pub d: usize,
    pub gamma_star: f64,
    pub beta_star: f64,
}

impl TreeOptimum {
    pub fn params(&self) -> ParameterSet {
        ParameterSet::single(self.gamma_star, self.beta_star)
    }
}

/// `(|E|/2) [1 + sin 4b sin g cos^(d-1) g]`, exact at `p = 1` on unweighted
/// triangle-free `d`-regular graphs.
pub fn triangle_free_cost(d: usize, num_edges: usize, gamma: f64, beta: f64) -> f64 {
    let e = num_edges as f64;
    let exponent = d as i32 - 1;
    0.5 * e * (1.0 + (4.0 * beta).sin() * gamma.sin() * gamma.cos().powi(exponent))
}

pub fn tree_optimum(d: usize) -> Result<TreeOptimum> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "tree optimum needs d >= 2, got {d}"
        )));
    }
    Ok(TreeOptimum {
        d,
        gamma_star: (1.0 / ((d - 1) as f64).sqrt()).atan(),
        beta_star: PI / 8.0,
    })
}

/// `((a-1)/a)^e` through `ln_1p` so large `a` neither underflows nor loses digits.
fn ratio_pow(a: usize, e: f64) -> f64 {
    if a == 1 {
        return if e == 0.0 { 1.0 } else { 0.0 };
    }
    (e * (-1.0 / a as f64).ln_1p()).exp()
}

/// `(1/sqrt d) ((d-1)/d)^((d-1)/2)`, the optimal gain over `|E|/2` in units of `|E|/2`.
pub fn optimal_gain(d: usize) -> f64 {
    let df = d as f64;
    ratio_pow(d, 0.5 * (df - 1.0)) / df.sqrt()
}

/// `(|E|/2) [1 + (1/sqrt d) ((d-1)/d)^((d-1)/2)]`
pub fn optimal_cost(d: usize, num_edges: usize) -> f64 {
    0.5 * num_edges as f64 * (1.0 + optimal_gain(d))
}

/// Transferability error of donor tree angles of degree `d_prime` on a
/// triangle-free `d`-regular receiver whose maximum cut holds a fraction `k`
/// of the edges.
pub fn transfer_error_closed_form(d: usize, d_prime: usize, k: f64) -> Result<f64> {
    if d < 2 || d_prime < 2 {
        return Err(Error::InvalidArgument(format!(
            "degrees must be >= 2, got d={d}, d'={d_prime}"
        )));
    }
    if !(k > 0.5 && k <= 1.0) {
        return Err(Error::InvalidArgument(format!("k must lie in (1/2, 1], got {k}")));
    }
    let (df, dpf) = (d as f64, d_prime as f64);
    let e = 0.5 * (df - 1.0);
    let own = ratio_pow(d, e);
    let donor = (df / dpf).sqrt() * ratio_pow(d_prime, e);
    Ok((own - donor) / (2.0 * k * df.sqrt()))
}

/// Gap between an optimal ratio `r_star` and the ratio of a uniformly random
/// assignment, `r* - (W/2 - C_min)/(C_max - C_min)`.
pub fn random_guess_reference(r_star: f64, ext: &CutExtremes) -> Result<f64> {
    Ok(r_star - approximation_ratio(ext.random_cost(), ext)?)
}

/// The same gap for a triangle-free `d`-regular graph with cut fraction `k`
/// at its depth-one optimum: `r* - 1/(2k)`.
pub fn random_guess_closed_form(d: usize, k: f64) -> f64 {
    optimal_gain(d) / (2.0 * k)
}

/// `C_max / |E|` by exhaustive search.
pub fn k_from_extremes(inst: &IsingInstance) -> Result<f64> {
    if inst.num_edges() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let ext = brute_force_extremes(inst)?;
    Ok(ext.c_max / inst.num_edges() as f64)
}

/// Whether the closed forms can be expected to describe an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormAdvisory {
    pub girth: Option<usize>,
    pub triangle_free: bool,
    /// Order `(d-1)^(2p)` beyond which a random regular graph looks locally tree-like.
    pub size_threshold: f64,
    pub large_enough: bool,
}

/// Advisory metadata only; nothing is gated on it.
pub fn closed_form_advisory(inst: &IsingInstance, d: usize, p: usize) -> ClosedFormAdvisory {
    let g = girth(inst);
    let size_threshold = (d.saturating_sub(1) as f64).powi(2 * p as i32);
    ClosedFormAdvisory {
        girth: g,
        triangle_free: g.is_none_or(|g| g > 3),
        size_threshold,
        large_enough: inst.n() as f64 >= size_threshold,
    }
}
