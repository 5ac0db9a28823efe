//! Compiles a one- or two-mode quasifree state into a gate sequence on a
//! thermal product.
//!
//! With `A = Sᵀ diag(D, D) S` and `S = O · diag(M, M⁻¹) · O′`, the density is
//! `ρ = D(v) U ρ_th U† D(v)†` where `U†RU = SᵀR`, i.e. `U = U(O′ᵀ) U(Λ) U(Oᵀ)`.
//! An orthogonal symplectic Heisenberg map `[[X, Y], [−Y, X]]` acts on the
//! annihilation operators as `a ↦ (X − iY) a`; two-mode unitaries are split
//! into phases, one mode mixer, and phases.

use num_complex::Complex64;

use super::{
    conjugate, displacement_unitary, mode_mixer_unitary, phase_unitary, squeeze_unitary, tensor,
    thermal_density, ComplexMatrix, TruncatedOperator,
};
use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::state::QuasifreeState;
use crate::symplectic::{bdi_decompose, williamson, DEFAULT_TOL};

/// Residual allowed when recomposing a two-mode passive unitary.
const PASSIVE_TOL: f64 = 1e-9;

/// `W = diag(e^{iα}) · [[cos θ, sin θ], [−sin θ, cos θ]] · diag(e^{iβ})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassiveAngles {
    pub alpha: [f64; 2],
    pub theta: f64,
    pub beta: [f64; 2],
}

impl PassiveAngles {
    pub fn matrix(&self) -> ComplexMatrix {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let e = |x: f64| Complex64::from_polar(1.0, x);
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                e(self.alpha[0] + self.beta[0]) * c,
                e(self.alpha[0] + self.beta[1]) * s,
                -e(self.alpha[1] + self.beta[0]) * s,
                e(self.alpha[1] + self.beta[1]) * c,
            ],
        )
    }
}

/// Splits a 2×2 unitary into phases, one mixer angle, and phases.
pub fn passive_unitary_angles(w: &ComplexMatrix) -> Result<PassiveAngles> {
    if w.shape() != (2, 2) {
        return Err(Error::UnsupportedCircuit(format!(
            "expected a 2x2 unitary, got {}x{}",
            w.nrows(),
            w.ncols()
        )));
    }
    let c = w[(0, 0)].norm();
    let s = w[(0, 1)].norm();
    let theta = s.atan2(c);
    let eps = 1e-12;
    let alpha0 = if c > eps {
        w[(0, 0)].arg()
    } else {
        w[(0, 1)].arg()
    };
    let (alpha1, beta1) = if s > eps {
        ((-w[(1, 0)]).arg(), w[(0, 1)].arg() - alpha0)
    } else {
        (w[(1, 1)].arg(), 0.0)
    };
    let angles = PassiveAngles {
        alpha: [alpha0, alpha1],
        theta,
        beta: [0.0, beta1],
    };
    let residual = (angles.matrix() - w)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if residual > PASSIVE_TOL {
        return Err(Error::UnsupportedCircuit(format!(
            "passive unitary does not split into phases and one mixer (residual {residual:.3e})"
        )));
    }
    Ok(angles)
}

/// `a ↦ W a` for the Heisenberg map `[[X, Y], [−Y, X]]`.
fn annihilation_map(m: &RealMatrix) -> Result<ComplexMatrix> {
    let n = m.nrows() / 2;
    let x = m.view((0, 0), (n, n));
    let y = m.view((0, n), (n, n));
    let block_gap = (m.view((n, n), (n, n)) - x)
        .amax()
        .max((m.view((n, 0), (n, n)) + y).amax());
    if block_gap > 1e-8 {
        return Err(Error::UnsupportedCircuit(format!(
            "rotation factor is not of the form [[X, Y], [−Y, X]] (gap {block_gap:.3e})"
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(x[(i, j)], -y[(i, j)])
    }))
}

fn apply_passive(
    rho: TruncatedOperator,
    heisenberg: &RealMatrix,
    cutoff: usize,
) -> Result<TruncatedOperator> {
    let w = annihilation_map(heisenberg)?;
    if w.nrows() == 1 {
        return conjugate(&rho, &phase_unitary(w[(0, 0)].arg(), cutoff)?, 0);
    }
    let angles = passive_unitary_angles(&w)?;
    let mut rho = rho;
    for (mode, &beta) in angles.beta.iter().enumerate() {
        rho = conjugate(&rho, &phase_unitary(beta, cutoff)?, mode)?;
    }
    rho = conjugate(&rho, &mode_mixer_unitary(angles.theta, cutoff)?, 0)?;
    for (mode, &alpha) in angles.alpha.iter().enumerate() {
        rho = conjugate(&rho, &phase_unitary(alpha, cutoff)?, mode)?;
    }
    Ok(rho)
}

/// Truncated density of a one- or two-mode state at cutoff `N`.
pub fn density_from_state(state: &QuasifreeState, cutoff: usize) -> Result<TruncatedOperator> {
    let n = state.modes();
    if n > 2 {
        return Err(Error::TooManyModes { max: 2, got: n });
    }
    let w = williamson(state.covariance(), DEFAULT_TOL)?;
    let bdi = bdi_decompose(&w.s, DEFAULT_TOL)?;

    // The state was validated with d ≥ 1 − tol; pure modes come back as 1 − ε.
    let d: Vec<f64> = w.d.iter().map(|&x| x.max(1.0)).collect();
    let mut rho = thermal_density(d[0], cutoff)?;
    if n == 2 {
        rho = tensor(&rho, &thermal_density(d[1], cutoff)?)?;
    }
    rho = apply_passive(rho, &bdi.o.transpose(), cutoff)?;
    for (mode, &m) in bdi.m.iter().enumerate() {
        let r = m.ln();
        if r.abs() > 1e-15 {
            rho = conjugate(&rho, &squeeze_unitary(r, cutoff)?, mode)?;
        }
    }
    rho = apply_passive(rho, &bdi.oprime.transpose(), cutoff)?;
    let v = state.mean();
    for mode in 0..n {
        let alpha = Complex64::new(v[mode], v[n + mode]) / 2.0_f64.sqrt();
        if alpha.norm() > 0.0 {
            rho = conjugate(&rho, &displacement_unitary(alpha, cutoff)?, mode)?;
        }
    }
    Ok(rho)
}
