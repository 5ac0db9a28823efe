//! One-mode pure squeezed states as points of the Poincaré upper half plane.
//!
//! A pure one-mode covariance `A = γᵀγ` (`γ ∈ SL(2, ℝ)`) is mapped to
//! `z = γ⁻¹·i`, taking `γ = A^{1/2}`. Any other factor `Rγ` with `R` a
//! rotation gives the same point, since rotations fix `i`. With this
//! orientation, `A = diag(e^{2r}, e^{−2r})` maps to `i·e^{−2r}`.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;
use crate::state::QuasifreeState;
use crate::symplectic::sqrt_spd;

/// Purity tolerance used when mapping states to points.
pub const POINT_PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "({x}, {y}) is not in the upper half plane"
            )));
        }
        Ok(Self { x, y })
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub fn to_complex(self) -> Complex<f64> {
        Complex::new(self.x, self.y)
    }
}

/// `[[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64, tol: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!("determinant {det} ≠ 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn from_matrix(m: &RealMatrix, tol: f64) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::InvalidParameter("expected a 2x2 matrix".into()));
        }
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], tol)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// `a² + b² + c² + d²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }
}

/// `z ↦ (az + b)/(cz + d)`.
pub fn mobius_apply(g: &MobiusElement, z: HalfPlanePoint) -> HalfPlanePoint {
    let z = z.to_complex();
    let w = (z * g.a + g.b) / (z * g.c + g.d);
    // y′ = y / |cz + d|² keeps the imaginary part positive exactly.
    let denom = (z * g.c + g.d).norm_sqr();
    HalfPlanePoint {
        x: w.re,
        y: z.im * (g.a * g.d - g.b * g.c) / denom,
    }
}

/// `u(z, z′) = |z − z′|² / (4 y y′)`.
pub fn u_function(z: HalfPlanePoint, zp: HalfPlanePoint) -> f64 {
    let dx = z.x - zp.x;
    let dy = z.y - zp.y;
    (dx * dx + dy * dy) / (4.0 * z.y * zp.y)
}

/// Hyperbolic distance `s` with `cosh²(s/2) = 1 + u`, evaluated as
/// `2·asinh(√u)`.
pub fn geodesic_distance(z: HalfPlanePoint, zp: HalfPlanePoint) -> f64 {
    2.0 * u_function(z, zp).sqrt().asinh()
}

/// Point `γ⁻¹·i` for a pure one-mode state with `A = γᵀγ`; the mean is ignored.
pub fn pure_state_to_point(state: &QuasifreeState) -> Result<HalfPlanePoint> {
    if state.modes() != 1 {
        return Err(Error::InvalidParameter(format!(
            "half-plane correspondence is one-mode only, got {} modes",
            state.modes()
        )));
    }
    let residual = state.purity_residual();
    if residual > POINT_PURITY_TOL * state.covariance().amax().max(1.0).powi(2) {
        return Err(Error::NotPure(residual));
    }
    let gamma = sqrt_spd(state.covariance())?;
    let det = gamma.determinant();
    let g = MobiusElement {
        a: gamma[(0, 0)] / det.sqrt(),
        b: gamma[(0, 1)] / det.sqrt(),
        c: gamma[(1, 0)] / det.sqrt(),
        d: gamma[(1, 1)] / det.sqrt(),
    };
    point_from_factor(&g)
}

/// `γ⁻¹·i` for a factor `γ` of `A = γᵀγ`.
pub fn point_from_factor(gamma: &MobiusElement) -> Result<HalfPlanePoint> {
    Ok(mobius_apply(&gamma.inverse(), HalfPlanePoint::i()))
}

/// `1 / cosh(s/2)`.
pub fn fidelity_from_distance(s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::InvalidParameter(format!("negative distance {s}")));
    }
    Ok(1.0 / (s / 2.0).cosh())
}
