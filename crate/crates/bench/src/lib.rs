//! Fixtures shared by the benchmarks.

use quasifree::linalg::doubled_diagonal;
use quasifree::symplectic::random_symplectic;
use quasifree::{PhaseSpaceDim, QuasifreeState, RealMatrix, DEFAULT_TOL};

/// Centered mixed state `SᵀDS` on `n` modes with `d_k = 1 + k/2`.
pub fn mixed_state(n: usize, seed: u64) -> QuasifreeState {
    let s = random_symplectic(seed, PhaseSpaceDim::new(n).expect("n > 0"));
    let d: Vec<f64> = (0..n).map(|k| 1.0 + 0.5 * k as f64).collect();
    let a = s.transpose() * doubled_diagonal(&d) * &s;
    QuasifreeState::centered((&a + a.transpose()) * 0.5, DEFAULT_TOL).expect("valid fixture")
}

/// Centered pure state `SᵀS` on `n` modes.
pub fn pure_state(n: usize, seed: u64) -> QuasifreeState {
    let s = random_symplectic(seed, PhaseSpaceDim::new(n).expect("n > 0"));
    QuasifreeState::centered(s.transpose() * &s, DEFAULT_TOL).expect("valid fixture")
}

pub fn symplectic(n: usize, seed: u64) -> RealMatrix {
    random_symplectic(seed, PhaseSpaceDim::new(n).expect("n > 0"))
}
