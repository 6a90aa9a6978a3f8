//! Hamiltonian variational ansatz on `H = 1/2 sum (w^x XX + w^y YY + w^z ZZ)`.
//!
//! Each layer applies `U_aa(theta_a) = prod exp(-i (w^a/2) theta_a s^a s^a)`
//! for `a = x, y, z` in that order, then an optional transverse mixer.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{apply_mixer, check_cap, StateVector, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};
use crate::graph::{cycle, IsingInstance};
use crate::maxcut::spin;
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

/// Per-edge coupling triples `(w^x, w^y, w^z)` over an instance's edge set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvaCouplings {
    pairs: Vec<(usize, usize)>,
    weights: Vec<[f64; 3]>,
}

impl HvaCouplings {
    pub fn new(inst: &IsingInstance, weights: Vec<[f64; 3]>) -> Result<Self> {
        if weights.len() != inst.num_edges() {
            return Err(Error::LengthMismatch {
                expected: inst.num_edges(),
                got: weights.len(),
            });
        }
        Ok(Self {
            pairs: inst.edges().iter().map(|e| (e.i, e.j)).collect(),
            weights,
        })
    }

    /// The same triple on every edge.
    pub fn uniform(inst: &IsingInstance, w: [f64; 3]) -> Self {
        Self {
            pairs: inst.edges().iter().map(|e| (e.i, e.j)).collect(),
            weights: vec![w; inst.num_edges()],
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[[f64; 3]] {
        &self.weights
    }
}

/// XXZ ring `sum J (XX + YY + Delta ZZ)` written as `w = 2J (1, 1, Delta)`.
pub fn xxz_ring(n: usize, j: f64, delta: f64) -> (IsingInstance, HvaCouplings) {
    let ring = cycle(n);
    let c = HvaCouplings::uniform(&ring, [2.0 * j, 2.0 * j, 2.0 * j * delta]);
    (ring, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvaLayer {
    /// `(theta_x, theta_y, theta_z)`
    pub theta: [f64; 3],
    /// Optional angle of `exp(-i beta sum X)` applied after the two-body terms.
    pub mixer: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialState {
    /// `|+>^n`
    #[default]
    Uniform,
    /// `|0...0>`
    Zero,
    /// Odd qubits set: `|...1010>`
    Neel,
}

impl InitialState {
    fn build(self, n: usize) -> StateVector {
        match self {
            InitialState::Uniform => StateVector::uniform(n),
            InitialState::Zero => StateVector::basis(n, 0).expect("index 0 exists"),
            InitialState::Neel => {
                let y = (0..n).filter(|q| q % 2 == 1).fold(0, |y, q| y | (1 << q));
                StateVector::basis(n, y).expect("index in range")
            }
        }
    }
}

/// `exp(-i phi s^a_i s^a_j)`
fn apply_pair(amps: &mut [Complex64], i: usize, j: usize, axis: PauliAxis, phi: f64) {
    let (s, c) = phi.sin_cos();
    let m = (1usize << i) | (1usize << j);
    match axis {
        PauliAxis::Z => {
            let same = Complex64::cis(-phi);
            let diff = Complex64::cis(phi);
            for (y, a) in amps.iter_mut().enumerate() {
                *a *= if spin(y, i) == spin(y, j) { same } else { diff };
            }
        }
        PauliAxis::X | PauliAxis::Y => {
            let mis = Complex64::new(0.0, -s);
            for y in 0..amps.len() {
                if y & (1 << i) != 0 {
                    continue;
                }
                let z = y ^ m;
                let (a, b) = (amps[y], amps[z]);
                // YY|b_i b_j> picks up -1 when the two bits agree
                let (sy, sz) = match axis {
                    PauliAxis::X => (1.0, 1.0),
                    _ => {
                        let equal = ((y >> i) ^ (y >> j)) & 1 == 0;
                        if equal {
                            (-1.0, -1.0)
                        } else {
                            (1.0, 1.0)
                        }
                    }
                };
                amps[y] = a * c + mis * sy * b;
                amps[z] = b * c + mis * sz * a;
            }
        }
    }
}

fn pair_expectation(amps: &[Complex64], i: usize, j: usize, axis: PauliAxis) -> f64 {
    let m = (1usize << i) | (1usize << j);
    amps.iter()
        .enumerate()
        .map(|(y, a)| match axis {
            PauliAxis::Z => a.norm_sqr() * spin(y, i) * spin(y, j),
            PauliAxis::X => (a.conj() * amps[y ^ m]).re,
            PauliAxis::Y => {
                let sign = if ((y >> i) ^ (y >> j)) & 1 == 0 { -1.0 } else { 1.0 };
                sign * (a.conj() * amps[y ^ m]).re
            }
        })
        .sum()
}

/// `<H>` of the coupling Hamiltonian in an arbitrary state.
pub fn heisenberg_energy(state: &StateVector, couplings: &HvaCouplings) -> f64 {
    let amps = state.amplitudes();
    couplings
        .pairs
        .iter()
        .zip(&couplings.weights)
        .map(|(&(i, j), w)| {
            0.5 * PauliAxis::ALL
                .iter()
                .zip(w)
                .filter(|(_, &wa)| wa != 0.0)
                .map(|(&axis, &wa)| wa * pair_expectation(amps, i, j, axis))
                .sum::<f64>()
        })
        .sum()
}

pub fn hva_state(
    inst: &IsingInstance,
    couplings: &HvaCouplings,
    layers: &[HvaLayer],
    init: InitialState,
) -> Result<StateVector> {
    let n = inst.n();
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    if let Some(&(i, j)) = couplings.pairs.iter().find(|&&(i, j)| i.max(j) >= n) {
        return Err(Error::VertexOutOfRange { vertex: i.max(j), n });
    }
    let mut state = init.build(n);
    let amps = state.amplitudes_mut();
    for layer in layers {
        for (a, axis) in PauliAxis::ALL.into_iter().enumerate() {
            let theta = layer.theta[a];
            for (&(i, j), w) in couplings.pairs.iter().zip(&couplings.weights) {
                if w[a] != 0.0 && theta != 0.0 {
                    apply_pair(amps, i, j, axis, 0.5 * w[a] * theta);
                }
            }
        }
        if let Some(beta) = layer.mixer {
            apply_mixer(amps, n, beta, Execution::Sequential);
        }
    }
    Ok(state)
}

pub fn hva_expectation(
    inst: &IsingInstance,
    couplings: &HvaCouplings,
    layers: &[HvaLayer],
    init: InitialState,
) -> Result<f64> {
    let state = hva_state(inst, couplings, layers, init)?;
    Ok(heisenberg_energy(&state, couplings))
}
