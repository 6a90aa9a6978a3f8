//! Named parameter fixtures.

use crate::params::ParameterSet;

/// The eight optimal depth-two sets of the 3-regular tree, in units of pi,
/// per row `(gamma_1, beta_1, gamma_2, beta_2)`. Set 1 lies in `U1^2`, set 8 in `U2^2`.
pub const TREE3_P2_PI: [[f64; 4]; 8] = [
    [0.156, 0.177, 0.286, 0.0933],
    [0.156, 0.177, -0.714, -0.0933],
    [0.844, 0.177, 0.714, -0.0933],
    [0.844, 0.177, -0.286, 0.0933],
    [-0.844, -0.177, 0.286, -0.0933],
    [-0.844, -0.177, -0.714, 0.0933],
    [-0.156, -0.177, 0.714, 0.0933],
    [-0.156, -0.177, -0.286, -0.0933],
];

pub fn tree3_p2() -> Vec<ParameterSet> {
    TREE3_P2_PI
        .iter()
        .map(|row| ParameterSet::from_interleaved_pi(row).expect("fixture rows are well formed"))
        .collect()
}

pub const NAMES: &[&str] = &["tree3-p2"];

pub fn by_name(name: &str) -> Option<Vec<ParameterSet>> {
    match name {
        "tree3-p2" => Some(tree3_p2()),
        _ => None,
    }
}
