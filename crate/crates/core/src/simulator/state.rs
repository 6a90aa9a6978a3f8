use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maxcut::spin;
use crate::par::{chunked_sum, Execution};

/// `2^n` complex amplitudes indexed by basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`
    pub fn uniform(n: usize) -> Self {
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            n,
            amps: vec![a; dim],
        }
    }

    /// Computational basis state `|y>`.
    pub fn basis(n: usize, y: usize) -> Result<Self> {
        let dim = 1usize << n;
        if y >= dim {
            return Err(Error::InvalidArgument(format!("basis index {y} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[y] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked_sum(Execution::Sequential, self.amps.len(), |r| {
            self.amps[r].iter().map(|a| a.norm_sqr()).sum()
        })
    }

    /// `sum_y |a_y|^2 diag[y]`
    pub fn expectation_diagonal(&self, diag: &[f64], exec: Execution) -> f64 {
        debug_assert_eq!(diag.len(), self.amps.len());
        chunked_sum(exec, self.amps.len(), |r| {
            self.amps[r.clone()]
                .iter()
                .zip(&diag[r])
                .map(|(a, d)| a.norm_sqr() * d)
                .sum()
        })
    }

    /// `<Z_k Z_l>`
    pub fn zz_correlation(&self, k: usize, l: usize) -> Result<f64> {
        for v in [k, l] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if k == l {
            return Err(Error::InvalidArgument("correlation needs two distinct qubits".into()));
        }
        Ok(chunked_sum(Execution::Sequential, self.amps.len(), |r| {
            r.map(|y| self.amps[y].norm_sqr() * spin(y, k) * spin(y, l)).sum()
        }))
    }

    /// `shots` basis indices drawn i.i.d. from `|a_y|^2`.
    pub fn sample(&self, shots: usize, seed: u64) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..shots)
            .map(|_| {
                let u = rng.random::<f64>() * acc;
                cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1)
            })
            .collect()
    }
}
