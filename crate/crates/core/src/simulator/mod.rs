//! Exact statevector simulation of QAOA circuits and Hamiltonian variational
//! ansatz layers.
//!
//! The cost Hamiltonian is diagonal; its `2^n` eigenvalues are computed once
//! per instance and each cost layer multiplies amplitude `y` by
//! `exp(-i gamma C(y))`. The mixer `exp(-i beta sum X_q)` is applied as `n`
//! in-place butterfly passes.

mod hva;
mod state;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::IsingInstance;
use crate::maxcut::cost_at_index;
use crate::par::{for_each_chunk_mut, map_chunks, zip_for_each_mut, Execution, CHUNK};
use crate::params::ParameterSet;

pub use hva::{
    heisenberg_energy, hva_expectation, hva_state, xxz_ring, HvaCouplings, HvaLayer, InitialState,
    PauliAxis,
};
pub use state::StateVector;

/// Default limit on the number of simulated qubits.
pub const DEFAULT_QUBIT_CAP: usize = 22;

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooManyQubits { n, cap });
    }
    Ok(())
}

/// Cost eigenvalue `C(y)` for every basis state.
pub fn cost_diagonal(inst: &IsingInstance, exec: Execution) -> Vec<f64> {
    let dim = 1usize << inst.n();
    map_chunks(exec, dim, CHUNK, |r| r.map(|y| cost_at_index(inst, y)).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

/// QAOA simulator bound to one instance with a cached cost diagonal.
#[derive(Clone, Debug)]
pub struct QaoaSimulator<'a> {
    inst: &'a IsingInstance,
    diag: Vec<f64>,
    levels: Option<Levels>,
    exec: Execution,
}

/// Distinct cost values and the level of every basis state, used when the
/// spectrum is small so each layer needs one `cis` per level.
#[derive(Clone, Debug)]
struct Levels {
    values: Vec<f64>,
    index: Vec<u32>,
}

const MAX_LEVELS: usize = 4096;

impl Levels {
    fn new(diag: &[f64]) -> Option<Self> {
        let mut values: Vec<f64> = Vec::new();
        let mut sorted = diag.to_vec();
        sorted.sort_by(f64::total_cmp);
        for v in sorted {
            if values.last().is_none_or(|&l| l != v) {
                if values.len() == MAX_LEVELS {
                    return None;
                }
                values.push(v);
            }
        }
        let index = diag
            .iter()
            .map(|v| values.binary_search_by(|x| x.total_cmp(v)).expect("value present") as u32)
            .collect();
        Some(Self { values, index })
    }
}

impl<'a> QaoaSimulator<'a> {
    pub fn new(inst: &'a IsingInstance) -> Result<Self> {
        Self::with_options(inst, DEFAULT_QUBIT_CAP, Execution::default())
    }

    pub fn with_options(inst: &'a IsingInstance, cap: usize, exec: Execution) -> Result<Self> {
        check_cap(inst.n(), cap)?;
        let diag = cost_diagonal(inst, exec);
        Ok(Self {
            inst,
            levels: Levels::new(&diag),
            diag,
            exec,
        })
    }

    pub fn instance(&self) -> &IsingInstance {
        self.inst
    }

    pub fn cost_diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn execution(&self) -> Execution {
        self.exec
    }

    /// `|gamma, beta>` starting from `|+>^n`.
    pub fn prepare_state(&self, params: &ParameterSet) -> StateVector {
        let mut state = StateVector::uniform(self.inst.n());
        for (&g, &b) in params.gammas().iter().zip(params.betas()) {
            match &self.levels {
                Some(levels) => apply_phase_levels(state.amplitudes_mut(), levels, g, self.exec),
                None => apply_phase_layer(state.amplitudes_mut(), &self.diag, g, self.exec),
            }
            apply_mixer(state.amplitudes_mut(), self.inst.n(), b, self.exec);
        }
        state
    }

    /// `<gamma, beta| H_C |gamma, beta>`
    pub fn expectation(&self, params: &ParameterSet) -> f64 {
        self.prepare_state(params)
            .expectation_diagonal(&self.diag, self.exec)
    }

    pub fn probabilities(&self, params: &ParameterSet) -> Vec<f64> {
        self.prepare_state(params).probabilities()
    }
}

pub fn prepare_state(inst: &IsingInstance, params: &ParameterSet) -> Result<StateVector> {
    Ok(QaoaSimulator::new(inst)?.prepare_state(params))
}

pub fn expectation_cost(inst: &IsingInstance, params: &ParameterSet) -> Result<f64> {
    Ok(QaoaSimulator::new(inst)?.expectation(params))
}

pub fn sample_bitstrings(state: &StateVector, shots: usize, seed: u64) -> Vec<usize> {
    state.sample(shots, seed)
}

pub fn zz_correlation(state: &StateVector, k: usize, l: usize) -> Result<f64> {
    state.zz_correlation(k, l)
}

/// Multiplies amplitude `y` by `exp(-i gamma diag[y])`.
pub(crate) fn apply_phase_layer(amps: &mut [Complex64], diag: &[f64], gamma: f64, exec: Execution) {
    for_each_chunk_mut(exec, amps, CHUNK, |off, chunk| {
        let len = chunk.len();
        for (a, &d) in chunk.iter_mut().zip(&diag[off..off + len]) {
            *a *= Complex64::cis(-gamma * d);
        }
    });
}

fn apply_phase_levels(amps: &mut [Complex64], levels: &Levels, gamma: f64, exec: Execution) {
    let phases: Vec<Complex64> = levels.values.iter().map(|&d| Complex64::cis(-gamma * d)).collect();
    for_each_chunk_mut(exec, amps, CHUNK, |off, chunk| {
        let len = chunk.len();
        for (a, &i) in chunk.iter_mut().zip(&levels.index[off..off + len]) {
            *a *= phases[i as usize];
        }
    });
}

/// `exp(-i beta sum_q X_q)`
pub(crate) fn apply_mixer(amps: &mut [Complex64], n: usize, beta: f64, exec: Execution) {
    let (s, c) = beta.sin_cos();
    let rotate = move |a: &mut Complex64, b: &mut Complex64| {
        let (x, y) = (*a, *b);
        *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
        *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
    };
    for q in 0..n {
        let half = 1usize << q;
        if 2 * half <= CHUNK {
            for_each_chunk_mut(exec, amps, CHUNK.max(2 * half), |_, chunk| {
                for block in chunk.chunks_exact_mut(2 * half) {
                    let (lo, hi) = block.split_at_mut(half);
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        rotate(a, b);
                    }
                }
            });
        } else {
            for block in amps.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                zip_for_each_mut(exec, lo, hi, rotate);
            }
        }
    }
}
