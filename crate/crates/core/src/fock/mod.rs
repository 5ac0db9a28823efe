//! Truncated Fock-space oracle for one- and two-mode states.
//!
//! Conventions: `a = (ξ̂ + iη̂)/√2`, so the vacuum has quadrature variance 1/2
//! and covariance `A = 2·cov = I`; a thermal mode with mean occupation `n̄`
//! has `d = 2n̄ + 1`. Two-mode basis vectors `|i⟩⊗|j⟩` sit at index
//! `i·(N+1) + j`.
//!
//! Nothing here calls into the phase-space algorithms except
//! [`density_from_state`], which reads a circuit off the state's
//! decompositions. All numbers are produced by matrix arithmetic on the
//! truncated space.

mod agreement;
mod circuit;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{RealMatrix, RealVector};

pub use agreement::{agreement_suite, AgreementRow};
pub use circuit::{density_from_state, passive_unitary_angles, PassiveAngles};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Largest `|r|` accepted by [`squeeze_unitary`].
pub const MAX_SQUEEZE: f64 = 2.0;
/// Largest `|α|` accepted by [`displacement_unitary`].
pub const MAX_DISPLACEMENT: f64 = 3.0;
/// Largest two-mode dimension `(N+1)²`.
pub const MAX_TWO_MODE_DIM: usize = 4096;
/// Cutoff increment used by [`converged`].
pub const CUTOFF_STEP: usize = 10;
/// Largest change between cutoffs `N` and `N + 10` that counts as converged.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Mixture columns with weight below this are dropped.
const WEIGHT_FLOOR: f64 = 1e-20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Storage of a truncated operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Full matrix.
    Dense(ComplexMatrix),
    /// Density `ρ = W W†`; each column is `√p·ψ`.
    Mixture(ComplexMatrix),
    /// Two-mode operator that conserves total photon number, stored as one
    /// block per sector `i + j = t`, `t = 0..=2N`.
    NumberSectors(Vec<ComplexMatrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    modes: usize,
    cutoff: usize,
    repr: Representation,
}

impl TruncatedOperator {
    fn new(modes: usize, cutoff: usize, repr: Representation) -> Self {
        Self {
            modes,
            cutoff,
            repr,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `(N+1)^modes`.
    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// Materializes the full `dim × dim` matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        match &self.repr {
            Representation::Dense(m) => m.clone(),
            Representation::Mixture(w) => w * w.adjoint(),
            Representation::NumberSectors(blocks) => {
                let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
                for (t, block) in blocks.iter().enumerate() {
                    let idx = sector_indices(self.cutoff, t);
                    for (r, &i) in idx.iter().enumerate() {
                        for (c, &j) in idx.iter().enumerate() {
                            m[(i, j)] = block[(r, c)];
                        }
                    }
                }
                m
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        match &self.repr {
            Representation::Mixture(w) => Complex64::new(w.norm_squared(), 0.0),
            Representation::Dense(m) => m.trace(),
            Representation::NumberSectors(blocks) => blocks.iter().map(|b| b.trace()).sum(),
        }
    }

    /// `max_j |‖U e_j‖ − 1|` over the columns.
    pub fn column_norm_defect(&self) -> f64 {
        self.to_dense()
            .column_iter()
            .map(|c| (c.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Applies the operator to every column of `cols`, acting on `mode` when
    /// the operator is one-mode and `cols` live on the two-mode space.
    fn apply_to_columns(
        &self,
        cols: &ComplexMatrix,
        space_modes: usize,
        mode: usize,
    ) -> ComplexMatrix {
        let k = self.cutoff + 1;
        match (&self.repr, self.modes, space_modes) {
            (Representation::NumberSectors(blocks), 2, 2) => {
                let mut out = ComplexMatrix::zeros(cols.nrows(), cols.ncols());
                for (t, block) in blocks.iter().enumerate() {
                    let idx = sector_indices(self.cutoff, t);
                    let sub = cols.select_rows(idx.iter());
                    let moved = block * sub;
                    for (r, &i) in idx.iter().enumerate() {
                        out.row_mut(i).copy_from(&moved.row(r));
                    }
                }
                out
            }
            (_, 1, 2) => {
                let g = self.to_dense();
                if mode == 1 {
                    // Minor index: the column-major buffer is (N+1) × (N+1)·cols.
                    let flat =
                        ComplexMatrix::from_column_slice(k, k * cols.ncols(), cols.as_slice());
                    ComplexMatrix::from_column_slice(
                        cols.nrows(),
                        cols.ncols(),
                        (g * flat).as_slice(),
                    )
                } else {
                    let gt = g.transpose();
                    let mut out = ComplexMatrix::zeros(cols.nrows(), cols.ncols());
                    for (c, col) in cols.column_iter().enumerate() {
                        // Reshaped column is Ψᵀ with Ψ[i, j] = ψ[i·(N+1) + j].
                        let psi_t = ComplexMatrix::from_column_slice(k, k, col.as_slice());
                        out.column_mut(c).copy_from_slice((psi_t * &gt).as_slice());
                    }
                    out
                }
            }
            _ => self.to_dense() * cols,
        }
    }
}

fn sector_indices(cutoff: usize, t: usize) -> Vec<usize> {
    let lo = t.saturating_sub(cutoff);
    let hi = t.min(cutoff);
    (lo..=hi).map(|i| i * (cutoff + 1) + (t - i)).collect()
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.nrows();
    let norm = a
        .column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5_f64.powi(squarings), 0.0);
    let mut sum = ComplexMatrix::identity(n, n);
    let mut term = ComplexMatrix::identity(n, n);
    for k in 1..40 {
        term = (&term * &scaled) / Complex64::new(k as f64, 0.0);
        sum += &term;
        if term.iter().all(|z| z.norm() < 1e-18) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Truncated annihilation operator, `a|k⟩ = √k |k−1⟩`.
pub fn annihilation(cutoff: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(cutoff + 1, cutoff + 1, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn require_cutoff(cutoff: usize) -> Result<()> {
    if cutoff == 0 {
        return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
    }
    Ok(())
}

/// Diagonal thermal density with `p_k ∝ (n̄/(n̄+1))^k`, `n̄ = (d−1)/2`,
/// normalized on the truncated space.
pub fn thermal_density(d: f64, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    if !(d >= 1.0) || !d.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "thermal parameter {d} < 1"
        )));
    }
    let nbar = (d - 1.0) / 2.0;
    let ratio = nbar / (nbar + 1.0);
    let weights: Vec<f64> = (0..=cutoff).map(|k| ratio.powi(k as i32)).collect();
    let total: f64 = weights.iter().sum();
    let kept: Vec<usize> = (0..=cutoff)
        .filter(|&k| weights[k] / total >= WEIGHT_FLOOR)
        .collect();
    let mut w = ComplexMatrix::zeros(cutoff + 1, kept.len());
    for (c, &k) in kept.iter().enumerate() {
        w[(k, c)] = Complex64::new((weights[k] / total).sqrt(), 0.0);
    }
    Ok(TruncatedOperator::new(
        1,
        cutoff,
        Representation::Mixture(w),
    ))
}

/// Pure state `|k⟩⟨k|` on one mode.
pub fn fock_projector(k: usize, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    if k > cutoff {
        return Err(Error::InvalidParameter(format!(
            "level {k} above cutoff {cutoff}"
        )));
    }
    let mut w = ComplexMatrix::zeros(cutoff + 1, 1);
    w[(k, 0)] = ONE;
    Ok(TruncatedOperator::new(
        1,
        cutoff,
        Representation::Mixture(w),
    ))
}

/// `exp((r/2)(a†² − a²))`, so that `U†ξ̂U = eʳξ̂` and `ρ ↦ UρU†` maps the
/// covariance `A` to `SᵀAS` with `S = diag(eʳ, e⁻ʳ)`.
pub fn squeeze_unitary(r: f64, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    if !(r.abs() <= MAX_SQUEEZE) {
        return Err(Error::GuardViolation(format!(
            "|r| = {} exceeds {MAX_SQUEEZE}",
            r.abs()
        )));
    }
    let a = annihilation(cutoff);
    let a2 = &a * &a;
    let gen = (a2.adjoint() - a2) * Complex64::new(r / 2.0, 0.0);
    Ok(TruncatedOperator::new(
        1,
        cutoff,
        Representation::Dense(expm(&gen)),
    ))
}

/// `exp(α a† − α* a)`; a state with phase-space mean `v` uses
/// `α = (v_ξ + i v_η)/√2`.
pub fn displacement_unitary(alpha: Complex64, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    if !(alpha.norm() <= MAX_DISPLACEMENT) {
        return Err(Error::GuardViolation(format!(
            "|α| = {} exceeds {MAX_DISPLACEMENT}",
            alpha.norm()
        )));
    }
    let a = annihilation(cutoff);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    Ok(TruncatedOperator::new(
        1,
        cutoff,
        Representation::Dense(expm(&gen)),
    ))
}

/// `exp(iφ a†a)`, so that `U†aU = e^{iφ} a`.
pub fn phase_unitary(phi: f64, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    let diag = DVector::from_fn(cutoff + 1, |k, _| {
        Complex64::from_polar(1.0, phi * k as f64)
    });
    Ok(TruncatedOperator::new(
        1,
        cutoff,
        Representation::Dense(ComplexMatrix::from_diagonal(&diag)),
    ))
}

/// `exp(θ(a†b − ab†))` on two modes, so that `U†aU = a cos θ + b sin θ` and
/// `U†bU = b cos θ − a sin θ`.
pub fn mode_mixer_unitary(theta: f64, cutoff: usize) -> Result<TruncatedOperator> {
    require_cutoff(cutoff)?;
    require_two_mode_dim(cutoff)?;
    let blocks = (0..=2 * cutoff)
        .map(|t| {
            let lo = t.saturating_sub(cutoff);
            let hi = t.min(cutoff);
            let size = hi - lo + 1;
            // Sector basis |i, t−i⟩ for i = lo..=hi.
            let mut gen = ComplexMatrix::zeros(size, size);
            for r in 0..size {
                let i = lo + r;
                let j = t - i;
                if r + 1 < size {
                    // a†b |i, j⟩ = √((i+1) j) |i+1, j−1⟩
                    let amp = ((i + 1) as f64 * j as f64).sqrt() * theta;
                    gen[(r + 1, r)] += Complex64::new(amp, 0.0);
                    gen[(r, r + 1)] -= Complex64::new(amp, 0.0);
                }
            }
            expm(&gen)
        })
        .collect();
    Ok(TruncatedOperator::new(
        2,
        cutoff,
        Representation::NumberSectors(blocks),
    ))
}

fn require_two_mode_dim(cutoff: usize) -> Result<()> {
    let dim = (cutoff + 1) * (cutoff + 1);
    if dim > MAX_TWO_MODE_DIM {
        return Err(Error::GuardViolation(format!(
            "two-mode dimension {dim} exceeds {MAX_TWO_MODE_DIM}"
        )));
    }
    Ok(())
}

/// Two-mode product state `ρ₁ ⊗ ρ₂`.
pub fn tensor(rho1: &TruncatedOperator, rho2: &TruncatedOperator) -> Result<TruncatedOperator> {
    if rho1.modes != 1 || rho2.modes != 1 || rho1.cutoff != rho2.cutoff {
        return Err(dim_mismatch(
            "two one-mode operators with equal cutoff",
            format!(
                "{}/{} modes, cutoffs {}/{}",
                rho1.modes, rho2.modes, rho1.cutoff, rho2.cutoff
            ),
        ));
    }
    require_two_mode_dim(rho1.cutoff)?;
    let repr = match (&rho1.repr, &rho2.repr) {
        (Representation::Mixture(w1), Representation::Mixture(w2)) => {
            let mut cols = Vec::new();
            for c1 in w1.column_iter() {
                for c2 in w2.column_iter() {
                    if c1.norm_squared() * c2.norm_squared() >= WEIGHT_FLOOR {
                        cols.push(c1.kronecker(&c2));
                    }
                }
            }
            if cols.is_empty() {
                cols.push(DVector::zeros(rho1.dim() * rho2.dim()));
            }
            Representation::Mixture(ComplexMatrix::from_columns(&cols))
        }
        _ => Representation::Dense(rho1.to_dense().kronecker(&rho2.to_dense())),
    };
    Ok(TruncatedOperator::new(2, rho1.cutoff, repr))
}

/// `ρ ↦ UρU†`. A one-mode `gate` on a two-mode `rho` acts on `mode` (0 or 1).
pub fn conjugate(
    rho: &TruncatedOperator,
    gate: &TruncatedOperator,
    mode: usize,
) -> Result<TruncatedOperator> {
    if gate.cutoff != rho.cutoff || gate.modes > rho.modes || mode >= rho.modes {
        return Err(dim_mismatch(
            format!(
                "gate on mode {mode} of a {}-mode space, cutoff {}",
                rho.modes, rho.cutoff
            ),
            format!("{}-mode gate, cutoff {}", gate.modes, gate.cutoff),
        ));
    }
    let repr = match &rho.repr {
        Representation::Mixture(w) => {
            Representation::Mixture(gate.apply_to_columns(w, rho.modes, mode))
        }
        _ => {
            let left = gate.apply_to_columns(&rho.to_dense(), rho.modes, mode);
            let both = gate.apply_to_columns(&left.adjoint(), rho.modes, mode);
            Representation::Dense(both.adjoint())
        }
    };
    Ok(TruncatedOperator::new(rho.modes, rho.cutoff, repr))
}

/// `tr(ρ₁ρ₂)`; equals the transition probability when either is pure.
pub fn overlap(rho1: &TruncatedOperator, rho2: &TruncatedOperator) -> Result<f64> {
    if rho1.modes != rho2.modes || rho1.cutoff != rho2.cutoff {
        return Err(dim_mismatch(
            format!("{} modes at cutoff {}", rho1.modes, rho1.cutoff),
            format!("{} modes at cutoff {}", rho2.modes, rho2.cutoff),
        ));
    }
    let value = match (&rho1.repr, &rho2.repr) {
        (Representation::Mixture(w1), Representation::Mixture(w2)) => {
            (w1.adjoint() * w2).norm_squared()
        }
        (Representation::Mixture(w), _) | (_, Representation::Mixture(w)) => {
            let other = if matches!(rho1.repr, Representation::Mixture(_)) {
                rho2
            } else {
                rho1
            };
            (w.adjoint() * other.to_dense() * w).trace().re
        }
        _ => {
            let (m1, m2) = (rho1.to_dense(), rho2.to_dense());
            m1.component_mul(&m2.transpose()).sum().re
        }
    };
    Ok(value)
}

/// Reduced density on mode `keep` (1 or 2) of a two-mode operator.
pub fn partial_trace(rho: &TruncatedOperator, keep: usize) -> Result<TruncatedOperator> {
    if rho.modes != 2 {
        return Err(Error::InvalidParameter(format!(
            "partial trace needs a two-mode operator, got {} modes",
            rho.modes
        )));
    }
    if keep != 1 && keep != 2 {
        return Err(Error::InvalidParameter(format!(
            "keep must be 1 or 2, got {keep}"
        )));
    }
    let k = rho.cutoff + 1;
    let mut out = ComplexMatrix::zeros(k, k);
    match &rho.repr {
        Representation::Mixture(w) => {
            for col in w.column_iter() {
                // Ψᵀ with Ψ[i, j] = ψ[i·(N+1) + j].
                let psi_t = ComplexMatrix::from_column_slice(k, k, col.as_slice());
                out += if keep == 1 {
                    psi_t.transpose() * psi_t.map(|z| z.conj())
                } else {
                    &psi_t * psi_t.adjoint()
                };
            }
        }
        _ => {
            let m = rho.to_dense();
            for a in 0..k {
                for b in 0..k {
                    let mut acc = ZERO;
                    for t in 0..k {
                        acc += if keep == 1 {
                            m[(a * k + t, b * k + t)]
                        } else {
                            m[(t * k + a, t * k + b)]
                        };
                    }
                    out[(a, b)] = acc;
                }
            }
        }
    }
    Ok(TruncatedOperator::new(
        1,
        rho.cutoff,
        Representation::Dense(out),
    ))
}

/// `tr(ρ · O₁ O₂ ⋯)` for one-mode factors `(mode, Oᵢ)`.
fn expectation(rho: &TruncatedOperator, factors: &[(usize, &TruncatedOperator)]) -> Complex64 {
    let apply_all = |cols: &ComplexMatrix| {
        factors.iter().rev().fold(cols.clone(), |acc, (mode, op)| {
            op.apply_to_columns(&acc, rho.modes, *mode)
        })
    };
    match &rho.repr {
        Representation::Mixture(w) => w
            .adjoint()
            .row_iter()
            .zip(apply_all(w).column_iter())
            .map(|(bra, ket)| (bra * ket)[(0, 0)])
            .sum(),
        _ => apply_all(&rho.to_dense()).trace(),
    }
}

/// First and second moments in phase-space units: mean `v` and `A = 2·cov`,
/// both ordered `(ξ₁, …, ξₙ, η₁, …, ηₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub mean: RealVector,
    pub covariance: RealMatrix,
}

pub fn moments(rho: &TruncatedOperator) -> Moments {
    let n = rho.modes;
    let a = TruncatedOperator::new(
        1,
        rho.cutoff,
        Representation::Dense(annihilation(rho.cutoff)),
    );
    let ad = TruncatedOperator::new(1, rho.cutoff, Representation::Dense(a.to_dense().adjoint()));
    let first: Vec<Complex64> = (0..n).map(|j| expectation(rho, &[(j, &a)])).collect();
    let mut mean = RealVector::zeros(2 * n);
    for j in 0..n {
        mean[j] = 2.0_f64.sqrt() * first[j].re;
        mean[n + j] = 2.0_f64.sqrt() * first[j].im;
    }
    let mut cov = RealMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let m = expectation(rho, &[(j, &a), (k, &a)]);
            let nn = expectation(rho, &[(j, &ad), (k, &a)]);
            let delta = if j == k { 0.5 } else { 0.0 };
            let xx = m.re + nn.re + delta - mean[j] * mean[k];
            let yy = -m.re + nn.re + delta - mean[n + j] * mean[n + k];
            let xy = m.im + nn.im - mean[j] * mean[n + k];
            cov[(j, k)] = xx;
            cov[(n + j, n + k)] = yy;
            cov[(j, n + k)] = xy;
            cov[(n + k, j)] = xy;
        }
    }
    Moments {
        mean,
        covariance: cov * 2.0,
    }
}

/// Evaluates `f` at cutoffs `N` and `N + 10` and returns the values at `N`
/// when every component moved by at most [`CONVERGENCE_TOL`].
pub fn converged<F>(cutoff: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<Vec<f64>>,
{
    let coarse = f(cutoff)?;
    let fine = f(cutoff + CUTOFF_STEP)?;
    if coarse.len() != fine.len() {
        return Err(dim_mismatch(coarse.len(), fine.len()));
    }
    let delta = coarse
        .iter()
        .zip(&fine)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if !(delta <= CONVERGENCE_TOL) {
        return Err(Error::NotConverged(delta));
    }
    Ok(coarse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vacuum(cutoff: usize) -> TruncatedOperator {
        fock_projector(0, cutoff).unwrap()
    }

    fn max_dev(m: &ComplexMatrix, target: &ComplexMatrix) -> f64 {
        (m - target).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn expm_small_cases() {
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(expm(&z), ComplexMatrix::identity(3, 3));
        let gen = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                ZERO,
                Complex64::new(-2.0, 0.0),
                Complex64::new(2.0, 0.0),
                ZERO,
            ],
        );
        let r = expm(&gen);
        assert_abs_diff_eq!(r[(0, 0)].re, 2.0_f64.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(r[(1, 0)].re, 2.0_f64.sin(), epsilon = 1e-14);
        let d = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(3.0, 1.0)]));
        assert_abs_diff_eq!(
            (expm(&d)[(0, 0)] - Complex64::new(3.0, 1.0).exp()).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn thermal_weights() {
        let vac = thermal_density(1.0, 20).unwrap();
        assert!(max_dev(&vac.to_dense(), &vacuum(20).to_dense()) < 1e-15);
        let th = thermal_density(3.0, 60).unwrap();
        assert_abs_diff_eq!(th.to_dense()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(th.to_dense()[(1, 1)].re, 0.25, epsilon = 1e-15);
        for d in [1.0, 2.0, 3.5, 5.0] {
            assert_abs_diff_eq!(
                thermal_density(d, 60).unwrap().trace().re,
                1.0,
                epsilon = 1e-8
            );
        }
        assert!(thermal_density(0.9, 10).is_err());
        assert!(thermal_density(2.0, 0).is_err());
    }

    #[test]
    fn squeeze_overlaps() {
        let id = squeeze_unitary(0.0, 15).unwrap().to_dense();
        assert!(max_dev(&id, &ComplexMatrix::identity(16, 16)) < 1e-15);
        let s = squeeze_unitary(1.0, 60).unwrap();
        assert_abs_diff_eq!(
            s.to_dense()[(0, 0)].norm_sqr(),
            1.0 / 1.0_f64.cosh(),
            epsilon = 1e-6
        );
        assert!(s.column_norm_defect() < 1e-6);
        assert!(matches!(
            squeeze_unitary(2.5, 10),
            Err(Error::GuardViolation(_))
        ));
    }

    #[test]
    fn displacement_overlaps() {
        let id = displacement_unitary(ZERO, 10).unwrap().to_dense();
        assert!(max_dev(&id, &ComplexMatrix::identity(11, 11)) < 1e-15);
        let alpha = Complex64::new(0.5_f64.sqrt(), 0.0);
        let d = displacement_unitary(alpha, 60).unwrap().to_dense();
        assert_abs_diff_eq!(d[(0, 0)].norm_sqr(), (-0.5_f64).exp(), epsilon = 1e-10);
        let beta = Complex64::new(0.7, -1.1);
        let plus = displacement_unitary(beta, 60).unwrap().to_dense();
        let minus = displacement_unitary(-beta, 60).unwrap().to_dense();
        let prod = &plus * &minus;
        // Group law holds on the low-lying block; the top rows feel the cutoff.
        let low = prod.view((0, 0), (30, 30)).into_owned();
        assert!(max_dev(&low, &ComplexMatrix::identity(30, 30)) < 1e-6);
        assert!(displacement_unitary(Complex64::new(3.0, 1.0), 10).is_err());
    }

    #[test]
    fn mixer_conserves_number() {
        let cutoff = 10;
        let u = mode_mixer_unitary(0.0, cutoff).unwrap().to_dense();
        assert!(max_dev(&u, &ComplexMatrix::identity(121, 121)) < 1e-15);
        let u = mode_mixer_unitary(0.8, cutoff).unwrap().to_dense();
        let k = cutoff + 1;
        let ntot = ComplexMatrix::from_diagonal(&DVector::from_fn(k * k, |i, _| {
            Complex64::new((i / k + i % k) as f64, 0.0)
        }));
        let comm = &u * &ntot - &ntot * &u;
        assert!(comm.iter().all(|z| z.norm() <= 1e-8));
        assert!(max_dev(&(u.adjoint() * &u), &ComplexMatrix::identity(k * k, k * k)) < 1e-12);
        assert!(matches!(
            mode_mixer_unitary(0.1, 64),
            Err(Error::GuardViolation(_))
        ));
    }

    #[test]
    fn overlap_examples() {
        let vac = vacuum(60);
        assert_abs_diff_eq!(overlap(&vac, &vac).unwrap(), 1.0, epsilon = 1e-15);
        let th = thermal_density(3.0, 60).unwrap();
        assert_abs_diff_eq!(overlap(&th, &vac).unwrap(), 0.5, epsilon = 1e-6);
        let sq = conjugate(&vac, &squeeze_unitary(1.0, 60).unwrap(), 0).unwrap();
        assert_abs_diff_eq!(
            overlap(&sq, &vac).unwrap(),
            1.0 / 1.0_f64.cosh(),
            epsilon = 1e-6
        );
        let dense = TruncatedOperator::new(1, 60, Representation::Dense(th.to_dense()));
        assert_abs_diff_eq!(
            overlap(&dense, &sq).unwrap(),
            overlap(&th, &sq).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            overlap(&dense, &dense).unwrap(),
            overlap(&th, &th).unwrap(),
            epsilon = 1e-12
        );
        assert!(overlap(&vac, &vacuum(10)).is_err());
    }

    #[test]
    fn moments_of_simple_states() {
        let vac = moments(&vacuum(20));
        assert!((vac.covariance - RealMatrix::identity(2, 2)).amax() < 1e-14);
        let th = moments(&thermal_density(3.0, 80).unwrap());
        assert!((th.covariance - RealMatrix::identity(2, 2) * 3.0).amax() < 1e-8);
        let r = 0.5;
        let sq = conjugate(&vacuum(60), &squeeze_unitary(r, 60).unwrap(), 0).unwrap();
        let m = moments(&sq);
        assert_abs_diff_eq!(m.covariance[(0, 0)], (2.0 * r).exp(), epsilon = 1e-8);
        assert_abs_diff_eq!(m.covariance[(1, 1)], (-2.0 * r).exp(), epsilon = 1e-8);
        let alpha = Complex64::new(0.3, -0.8);
        let coh = conjugate(&vacuum(60), &displacement_unitary(alpha, 60).unwrap(), 0).unwrap();
        let m = moments(&coh);
        assert_abs_diff_eq!(m.mean[0], 2.0_f64.sqrt() * 0.3, epsilon = 1e-10);
        assert_abs_diff_eq!(m.mean[1], -2.0_f64.sqrt() * 0.8, epsilon = 1e-10);
        assert!((m.covariance - RealMatrix::identity(2, 2)).amax() < 1e-8);
    }

    #[test]
    fn phase_rotates_quadratures() {
        let phi = 0.6_f64;
        let sq = conjugate(&vacuum(60), &squeeze_unitary(0.4, 60).unwrap(), 0).unwrap();
        let rotated = conjugate(&sq, &phase_unitary(phi, 60).unwrap(), 0).unwrap();
        let a0 = moments(&sq).covariance;
        // U†aU = e^{iφ}a means U†ξU = cos φ ξ − sin φ η, U†ηU = sin φ ξ + cos φ η.
        let m = RealMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()]);
        let expected = &m * a0 * m.transpose();
        assert!((moments(&rotated).covariance - expected).amax() < 1e-8);
    }

    #[test]
    fn two_mode_layout_and_partial_trace() {
        let cutoff = 12;
        let th = thermal_density(2.0, cutoff).unwrap();
        let one = fock_projector(1, cutoff).unwrap();
        let prod = tensor(&one, &th).unwrap();
        // |1⟩⊗|0⟩ carries p₀ of the truncated geometric distribution with ratio 1/3.
        let p0 = (2.0 / 3.0) / (1.0 - (1.0_f64 / 3.0).powi(cutoff as i32 + 1));
        assert_abs_diff_eq!(
            prod.to_dense()[(cutoff + 1, cutoff + 1)].re,
            p0,
            epsilon = 1e-12
        );
        for (keep, factor) in [(1, &one), (2, &th)] {
            let red = partial_trace(&prod, keep).unwrap();
            assert!(max_dev(&red.to_dense(), &factor.to_dense()) < 1e-12);
            let dense = TruncatedOperator::new(2, cutoff, Representation::Dense(prod.to_dense()));
            let red2 = partial_trace(&dense, keep).unwrap();
            assert!(max_dev(&red2.to_dense(), &factor.to_dense()) < 1e-12);
            assert_abs_diff_eq!(red.trace().re, prod.trace().re, epsilon = 1e-10);
        }
        assert!(partial_trace(&th, 1).is_err());
        assert!(partial_trace(&prod, 3).is_err());
    }

    #[test]
    fn local_gates_match_kronecker() {
        let cutoff = 6;
        let th = thermal_density(2.5, cutoff).unwrap();
        let coh = conjugate(
            &vacuum(cutoff),
            &displacement_unitary(Complex64::new(0.4, 0.2), cutoff).unwrap(),
            0,
        )
        .unwrap();
        let prod = tensor(&th, &coh).unwrap();
        let g = squeeze_unitary(0.3, cutoff).unwrap().to_dense();
        let id = ComplexMatrix::identity(cutoff + 1, cutoff + 1);
        for (mode, full) in [(0, g.kronecker(&id)), (1, id.kronecker(&g))] {
            let gate = TruncatedOperator::new(1, cutoff, Representation::Dense(g.clone()));
            let out = conjugate(&prod, &gate, mode).unwrap().to_dense();
            let expected = &full * prod.to_dense() * full.adjoint();
            assert!(max_dev(&out, &expected) < 1e-13);
            let dense = TruncatedOperator::new(2, cutoff, Representation::Dense(prod.to_dense()));
            assert!(
                max_dev(
                    &conjugate(&dense, &gate, mode).unwrap().to_dense(),
                    &expected
                ) < 1e-13
            );
        }
    }

    #[test]
    fn mixer_moves_quadratures_between_modes() {
        let cutoff = 30;
        let theta = 0.7_f64;
        let sq = conjugate(&vacuum(cutoff), &squeeze_unitary(0.3, cutoff).unwrap(), 0).unwrap();
        let prod = tensor(&sq, &thermal_density(1.6, cutoff).unwrap()).unwrap();
        let mixed = conjugate(&prod, &mode_mixer_unitary(theta, cutoff).unwrap(), 0).unwrap();
        let a0 = moments(&prod).covariance;
        let (c, s) = (theta.cos(), theta.sin());
        // Heisenberg map R ↦ diag(W, W) R with W = [[c, s], [−s, c]].
        let w = RealMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        let mut m = RealMatrix::zeros(4, 4);
        m.view_mut((0, 0), (2, 2)).copy_from(&w);
        m.view_mut((2, 2), (2, 2)).copy_from(&w);
        let expected = &m * a0 * m.transpose();
        assert!((moments(&mixed).covariance - expected).amax() < 1e-6);
    }

    #[test]
    fn convergence_reporting() {
        let ok = converged(60, |n| {
            Ok(vec![overlap(&thermal_density(3.0, n)?, &vacuum(n))?])
        })
        .unwrap();
        assert_abs_diff_eq!(ok[0], 0.5, epsilon = 1e-12);
        let bad = converged(10, |n| {
            let sq = conjugate(&vacuum(n), &squeeze_unitary(2.0, n)?, 0)?;
            Ok(vec![overlap(&sq, &vacuum(n))?])
        });
        assert!(matches!(bad, Err(Error::NotConverged(_))));
    }
}
