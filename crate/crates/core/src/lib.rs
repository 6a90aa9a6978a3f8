//! Exact statevector QAOA for MaxCut and Ising problems, with the parameter
//! landscape symmetries (even/odd vertex weight sums) used to translate and
//! transfer optimal variational parameters between problem instances.
//!
//! Conventions used throughout the crate:
//!
//! * Qubit `q` is bit `q` of the basis index (qubit 0 is the least
//!   significant bit). Bit value `0` is the spin `x = +1`, bit value `1` is
//!   `x = -1`.
//! * The cost to be maximised is
//!   `C(x) = 1/2 sum w_ij (1 - x_i x_j) - 1/2 sum h_i x_i`, which is the
//!   MaxCut objective when all fields vanish and equals
//!   `W/2 - E(x)` for the Ising energy `E(x) = 1/2 sum w_ij x_i x_j + 1/2 sum h_i x_i`.
//! * Layer indices are zero based.

pub mod analytic;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod maxcut;
pub mod par;
pub mod params;
pub mod rqaoa;
pub mod simulator;
pub mod symmetry;
pub mod transfer;

pub use error::{Error, Result};
pub use graph::{classify_symmetry, IsingInstance, SymmetryClass, SymmetryKind};
pub use par::Execution;
pub use params::ParameterSet;
