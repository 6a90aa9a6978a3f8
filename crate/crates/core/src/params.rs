use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth-`p` QAOA angles `(gammas, betas)` in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl ParameterSet {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::LengthMismatch {
                expected: gammas.len(),
                got: betas.len(),
            });
        }
        if gammas.is_empty() {
            return Err(Error::InvalidArgument("depth p must be at least 1".into()));
        }
        if gammas.iter().chain(&betas).any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(Self { gammas, betas })
    }

    /// Single-layer parameters.
    pub fn single(gamma: f64, beta: f64) -> Self {
        Self {
            gammas: vec![gamma],
            betas: vec![beta],
        }
    }

    /// Builds from per-layer order `(g1, b1, g2, b2, ...)`.
    pub fn from_interleaved(values: &[f64]) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "interleaved parameters need an even, non-zero count, got {}",
                values.len()
            )));
        }
        let gammas = values.iter().step_by(2).copied().collect();
        let betas = values.iter().skip(1).step_by(2).copied().collect();
        Self::new(gammas, betas)
    }

    /// Builds from angles given in units of pi, per-layer order.
    pub fn from_interleaved_pi(values: &[f64]) -> Result<Self> {
        let scaled: Vec<f64> = values.iter().map(|v| v * PI).collect();
        Self::from_interleaved(&scaled)
    }

    /// Builds from the optimizer layout `[gammas..., betas...]`.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "flat parameter vector needs an even, non-zero length, got {}",
                values.len()
            )));
        }
        let p = values.len() / 2;
        Self::new(values[..p].to_vec(), values[p..].to_vec())
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn gammas_mut(&mut self) -> &mut [f64] {
        &mut self.gammas
    }

    pub fn betas_mut(&mut self) -> &mut [f64] {
        &mut self.betas
    }

    /// `[gammas..., betas...]`
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    /// `(g1, b1, g2, b2, ...)`
    pub fn to_interleaved(&self) -> Vec<f64> {
        self.gammas
            .iter()
            .zip(&self.betas)
            .flat_map(|(&g, &b)| [g, b])
            .collect()
    }

    /// Largest per-coordinate absolute difference; `None` for differing depths.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        (self.p() == other.p()).then(|| {
            self.to_flat()
                .iter()
                .zip(other.to_flat())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }
}

impl fmt::Display for ParameterSet {
    /// Per-layer `(gamma, beta)` pairs in units of pi.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, b)) in self.gammas.iter().zip(&self.betas).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({:.4}pi, {:.4}pi)", g / PI, b / PI)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(matches!(
            ParameterSet::new(vec![0.1, 0.2], vec![0.3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(ParameterSet::new(vec![], vec![]).is_err());
        assert!(ParameterSet::new(vec![f64::NAN], vec![0.0]).is_err());
    }

    #[test]
    fn interleaved_layout() {
        let p = ParameterSet::from_interleaved(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(p.gammas(), &[1.0, 3.0]);
        assert_eq!(p.betas(), &[2.0, 4.0]);
        assert_eq!(p.to_interleaved(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p.to_flat(), vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(ParameterSet::from_flat(&p.to_flat()).unwrap(), p);
        assert!(ParameterSet::from_interleaved(&[1.0, 2.0, 3.0]).is_err());
    }
}
