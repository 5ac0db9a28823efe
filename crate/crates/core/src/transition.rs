//! Transition probabilities between quasifree states.
//!
//! For `ω(A, v)` and `ω(B, w)` with at least one of them pure:
//!
//! ```text
//! P = det((A + B)/2)^{-1/2} · exp(−(w − v)ᵀ (A + B)⁻¹ (w − v))
//! ```
//!
//! The same expression evaluated for two mixed states is only the Gaussian
//! overlap integral, not the transition probability, so
//! [`transition_probability`] refuses that case while [`overlap_quadrature`]
//! reports it as an overlap.

use std::f64::consts::PI;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{max_abs, max_abs_diff, symmetrize, RealMatrix, RealVector};
use crate::state::QuasifreeState;
use crate::symplectic::{BdiFactors, PhaseSpaceDim};

/// Default purity tolerance: `max |dᵢ − 1|`.
pub const PURITY_TOL: f64 = 1e-6;

/// `max |dᵢ − 1|` over the symplectic spectrum.
pub fn purity_defect(state: &QuasifreeState) -> f64 {
    state
        .symplectic_eigenvalues()
        .iter()
        .fold(0.0_f64, |acc, d| acc.max((d - 1.0).abs()))
}

/// Closed-form Gaussian overlap `det((A+B)/2)^{-1/2} exp(−Δᵀ(A+B)⁻¹Δ)`.
pub fn gaussian_overlap(
    a: &RealMatrix,
    v: &RealVector,
    b: &RealMatrix,
    w: &RealVector,
) -> Result<f64> {
    if a.shape() != b.shape() || v.len() != w.len() || v.len() != a.nrows() {
        return Err(dim_mismatch(
            format!("{0}x{0} matrices and length-{0} means", a.nrows()),
            format!("{}x{} and {}", b.nrows(), b.ncols(), w.len()),
        ));
    }
    let half_sum = symmetrize(&((a + b) * 0.5));
    let chol = nalgebra::Cholesky::new(half_sum).ok_or(Error::NotPositiveDefinite)?;
    let det: f64 = chol.l_dirty().diagonal().iter().map(|x| x * x).product();
    let delta = w - v;
    // (A+B)⁻¹ = ((A+B)/2)⁻¹ / 2
    let quad = delta.dot(&chol.solve(&delta)) / 2.0;
    Ok(det.powf(-0.5) * (-quad).exp())
}

/// Transition probability when at least one state is pure within `tol`
/// (measured as `max |dᵢ − 1|`). Symmetric in its arguments.
pub fn transition_probability(s1: &QuasifreeState, s2: &QuasifreeState, tol: f64) -> Result<f64> {
    if s1.modes() != s2.modes() {
        return Err(dim_mismatch(
            format!("{} modes", s1.modes()),
            format!("{} modes", s2.modes()),
        ));
    }
    if purity_defect(s1) > tol && purity_defect(s2) > tol {
        return Err(Error::RequiresPureState);
    }
    gaussian_overlap(s1.covariance(), s1.mean(), s2.covariance(), s2.mean())
}

/// Transition probability to the vacuum, `det((I+A)/2)^{-1/2} exp(−vᵀ(I+A)⁻¹v)`.
pub fn fidelity_to_vacuum(state: &QuasifreeState) -> f64 {
    let vac = QuasifreeState::vacuum(state.dim());
    gaussian_overlap(
        state.covariance(),
        state.mean(),
        vac.covariance(),
        vac.mean(),
    )
    .expect("A + I is positive definite")
}

/// Tensor-grid settings for [`overlap_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Grid spacing of the first level in whitened coordinates.
    pub initial_step: f64,
    /// Number of step halvings after the first level.
    pub max_refinements: u32,
    /// Accept once successive levels differ by at most this much.
    pub tol: f64,
    /// The integrand envelope is truncated where it falls below this value.
    pub tail: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            max_refinements: 2,
            tol: 1e-9,
            tail: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// `|T(h) − T(2h)|` between the last two levels.
    pub error_estimate: f64,
    /// Grid points used at the final level.
    pub points: usize,
}

/// Direct numerical evaluation of `(2π)^{-n} ∫ ω₁(δ₋ᵤ) ω₂(δᵤ) dm(u)`.
///
/// The integrand is `exp(−uᵀ(A+B)u/4) · cos(uᵀ(w−v))` (the odd imaginary part
/// integrates to zero). Coordinates are whitened with the Cholesky factor of
/// `(A+B)/4` so that the grid radius follows from its smallest eigenvalue,
/// then the trapezoidal rule is applied on a tensor grid, halving the step
/// until two levels agree. The result is the overlap integral; it equals the
/// transition probability only when one state is pure.
pub fn overlap_quadrature(
    s1: &QuasifreeState,
    s2: &QuasifreeState,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let n = s1.modes();
    if n != s2.modes() {
        return Err(dim_mismatch(
            format!("{n} modes"),
            format!("{} modes", s2.modes()),
        ));
    }
    if n > 2 {
        return Err(Error::TooManyModes { max: 2, got: n });
    }
    if !(spec.initial_step > 0.0 && spec.tail > 0.0 && spec.tail < 1.0) {
        return Err(Error::InvalidParameter("invalid quadrature spec".into()));
    }
    let quarter = symmetrize(&((s1.covariance() + s2.covariance()) * 0.25));
    let chol = nalgebra::Cholesky::new(quarter).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let det_l: f64 = l.diagonal().iter().product();
    let delta = s2.mean() - s1.mean();
    let phase = l
        .clone()
        .solve_lower_triangular(&delta)
        .ok_or(Error::Singular)?;

    let radius = (-spec.tail.ln()).sqrt();
    let dim = 2 * n;
    let jacobian = (2.0 * PI).powi(-(n as i32)) / det_l;

    let mut step = spec.initial_step;
    let (mut previous, mut points) = trapezoid(dim, radius, step, &phase);
    let mut estimate = f64::INFINITY;
    let mut value = previous;
    for _ in 0..spec.max_refinements {
        step /= 2.0;
        let (next, count) = trapezoid(dim, radius, step, &phase);
        estimate = (next - previous).abs() * jacobian;
        value = next;
        points = count;
        previous = next;
        if estimate <= spec.tol {
            break;
        }
    }
    if estimate > spec.tol {
        return Err(Error::QuadratureNotConverged {
            estimate,
            tol: spec.tol,
        });
    }
    Ok(QuadratureResult {
        value: value * jacobian,
        error_estimate: estimate,
        points,
    })
}

/// Trapezoidal sum of `exp(−|t|²) cos(tᵀb)` over the grid `hℤ^dim ∩ [−R, R]^dim`.
fn trapezoid(dim: usize, radius: f64, step: f64, phase: &RealVector) -> (f64, usize) {
    let half = (radius / step).floor() as i64;
    let nodes: Vec<f64> = (-half..=half).map(|k| k as f64 * step).collect();
    let per_axis = nodes.len();
    let total = per_axis.pow(dim as u32);
    let mut index = vec![0usize; dim];
    let mut sum = 0.0;
    for _ in 0..total {
        let mut norm2 = 0.0;
        let mut dot = 0.0;
        for (axis, &k) in index.iter().enumerate() {
            let t = nodes[k];
            norm2 += t * t;
            dot += t * phase[axis];
        }
        sum += (-norm2).exp() * dot.cos();
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < per_axis {
                break;
            }
            *slot = 0;
        }
    }
    (sum * step.powi(dim as i32), total)
}

/// `∏ᵢ 2 / √((mᵢ² + dᵢ)(mᵢ⁻² + dᵢ))`.
///
/// Valid for the vacuum fidelity of `A = O′ᵀ diag(M, M⁻¹) Oᵀ diag(D, D) O
/// diag(M, M⁻¹) O′` when the thermal factor commutes with `O` (in particular
/// `D = I` or `O = I`); see [`per_mode_applicable`].
pub fn per_mode_fidelity(bdi: &BdiFactors, d: &[f64]) -> Result<f64> {
    if bdi.m.len() != d.len() {
        return Err(dim_mismatch(
            format!("{} thermal parameters", bdi.m.len()),
            d.len(),
        ));
    }
    Ok(bdi
        .m
        .iter()
        .zip(d)
        .map(|(&m, &d)| 2.0 / ((m * m + d) * (1.0 / (m * m) + d)).sqrt())
        .product())
}

/// Whether `diag(D, D)` commutes with the outer rotation `O` within `tol`.
pub fn per_mode_applicable(bdi: &BdiFactors, d: &[f64], tol: f64) -> bool {
    if bdi.m.len() != d.len() {
        return false;
    }
    let thermal = crate::linalg::doubled_diagonal(d);
    let rotated = bdi.o.transpose() * &thermal * &bdi.o;
    max_abs_diff(&rotated, &thermal) <= tol * max_abs(&thermal).max(1.0)
}

/// `(2 / √((m² + d)(m⁻² + d)))ⁿ` for equal squeezing `m` and thermal
/// parameter `d` on every mode.
pub fn thermal_squeezed_fidelity(m: f64, d: f64, n: PhaseSpaceDim) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "thermal parameter {d} < 1"
        )));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("squeezing factor {m} ≤ 0")));
    }
    let single = 2.0 / ((m * m + d) * (1.0 / (m * m) + d)).sqrt();
    Ok(single.powi(n.modes() as i32))
}
