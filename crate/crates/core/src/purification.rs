//! Purification of centered mixed states on the doubled phase space
//! `E ⊕ E` with form `J̃ = diag(J, −J)`.
//!
//! Doubled coordinates are `(ξ, η, ξ̃, η̃)`: the original factor first, the
//! fictitious copy second, each in its own `(ξ-block, η-block)` order.

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    asymmetry, doubled_diagonal, from_blocks, max_abs, max_abs_diff, require_finite,
    require_square, spd_inverse_det, symmetrize, RealMatrix, RealVector,
};
use crate::state::{schur_complement, QuasifreeState};
use crate::symplectic::{j_matrix, williamson, PhaseSpaceDim, DEFAULT_TOL};
use crate::transition::{gaussian_overlap, transition_probability, PURITY_TOL};

/// Default tolerance for `‖(J̃Ã)² + I‖_max`, relative to `max(1, ‖Ã‖²)`.
pub const DOUBLED_PURITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// `J̃ = diag(J, −J)` for `n` original modes.
pub fn doubled_form(n: usize) -> RealMatrix {
    let j = j_matrix(n);
    let zero = RealMatrix::zeros(2 * n, 2 * n);
    from_blocks(&j, &zero, &zero, &(-&j))
}

/// A pure state on the doubled phase space.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledState {
    n: PhaseSpaceDim,
    atilde: RealMatrix,
    jtilde: RealMatrix,
}

impl DoubledState {
    /// Validates a `4n × 4n` covariance: symmetric, positive definite and pure
    /// with respect to `J̃`.
    pub fn new(atilde: RealMatrix, tol: f64) -> Result<Self> {
        let dim = require_square(&atilde)?;
        if dim == 0 || dim % 4 != 0 {
            return Err(dim_mismatch("dimension 4n", dim));
        }
        require_finite(&atilde)?;
        let scale = max_abs(&atilde).max(1.0);
        let skew = asymmetry(&atilde);
        if skew > tol * scale {
            return Err(Error::NotSymmetric(skew));
        }
        let atilde = symmetrize(&atilde);
        if nalgebra::Cholesky::new(atilde.clone()).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = dim / 4;
        let state = Self {
            n: PhaseSpaceDim::new(n)?,
            jtilde: doubled_form(n),
            atilde,
        };
        let residual = state.purity_residual();
        if residual > tol * scale * scale {
            return Err(Error::NotPure(residual));
        }
        Ok(state)
    }

    /// Mode count of the original system.
    pub fn modes(&self) -> usize {
        self.n.modes()
    }

    pub fn covariance(&self) -> &RealMatrix {
        &self.atilde
    }

    pub fn form(&self) -> &RealMatrix {
        &self.jtilde
    }

    /// `‖(J̃Ã)² + I‖_max`.
    pub fn purity_residual(&self) -> f64 {
        let ja = &self.jtilde * &self.atilde;
        let dim = ja.nrows();
        max_abs_diff(&(&ja * &ja), &(-RealMatrix::identity(dim, dim)))
    }

    /// Diagonal block `U` and off-diagonal block `V` of `Ã = [[U, V], [Vᵀ, U′]]`.
    pub fn blocks(&self) -> (RealMatrix, RealMatrix, RealMatrix) {
        let k = 2 * self.modes();
        (
            self.atilde.view((0, 0), (k, k)).into_owned(),
            self.atilde.view((0, k), (k, k)).into_owned(),
            self.atilde.view((k, k), (k, k)).into_owned(),
        )
    }

    /// The same state as a `2n`-mode state for the standard form `J`.
    pub fn to_standard(&self) -> Result<QuasifreeState> {
        QuasifreeState::centered(doubled_to_standard(&self.atilde), DEFAULT_TOL)
    }
}

/// Conjugates a doubled-space matrix into the standard `2n`-mode layout: the
/// fictitious η̃ block changes sign (turning `−J` into `J`) and coordinates are
/// reordered to `(ξ, ξ̃, η, η̃)`.
pub fn doubled_to_standard(atilde: &RealMatrix) -> RealMatrix {
    let n = atilde.nrows() / 4;
    let source: Vec<(usize, f64)> = (0..n)
        .map(|k| (k, 1.0))
        .chain((0..n).map(|k| (2 * n + k, 1.0)))
        .chain((0..n).map(|k| (n + k, 1.0)))
        .chain((0..n).map(|k| (3 * n + k, -1.0)))
        .collect();
    RealMatrix::from_fn(4 * n, 4 * n, |i, j| {
        let (si, fi) = source[i];
        let (sj, fj) = source[j];
        fi * fj * atilde[(si, sj)]
    })
}

/// `Ã = [[A, V], [V, A]]` with `V = A·√(I + (JA)⁻²) = Sᵀ diag(√(D²−I), √(D²−I)) S`
/// from the Williamson form `A = Sᵀ diag(D, D) S`.
pub fn purify(state: &QuasifreeState) -> Result<DoubledState> {
    if !state.is_centered() {
        return Err(Error::NonzeroMean);
    }
    let a = state.covariance();
    spd_inverse_det(a).map_err(|_| Error::Singular)?;
    let w = williamson(a, DEFAULT_TOL)?;
    let roots: Vec<f64> = w.d.iter().map(|d| (d * d - 1.0).max(0.0).sqrt()).collect();
    let v = symmetrize(&(w.s.transpose() * doubled_diagonal(&roots) * &w.s));
    let atilde = from_blocks(a, &v, &v, a);
    DoubledState::new(atilde, DOUBLED_PURITY_TOL)
}

/// Marginal on one factor: Schur complement of the Wigner matrix
/// `G̃ = −J̃Ã⁻¹J̃`, mapped back with `A = −J G₁⁻¹ J`.
pub fn reduce_purification(dstate: &DoubledState, which: Factor) -> Result<QuasifreeState> {
    let n = dstate.modes();
    let k = 2 * n;
    let (a_inv, _) = spd_inverse_det(&dstate.atilde).map_err(|_| Error::Singular)?;
    let g = symmetrize(&(-(&dstate.jtilde * a_inv * &dstate.jtilde)));
    let g = match which {
        Factor::First => g,
        Factor::Second => {
            let perm: Vec<usize> = (k..2 * k).chain(0..k).collect();
            crate::linalg::permute_sym(&g, &perm)
        }
    };
    let g1 = schur_complement(&g, k)?;
    let (g1_inv, _) = spd_inverse_det(&g1).map_err(|_| Error::Singular)?;
    // −J and J give the same map G ↦ −J G⁻¹ J.
    let j = j_matrix(n);
    let a1 = symmetrize(&(-(&j * g1_inv * &j)));
    QuasifreeState::new(a1, RealVector::zeros(k), DEFAULT_TOL)
}

/// `det((3/4)D² + (1/4)I)⁻¹` over the symplectic spectrum `D`.
pub fn entanglement_measure(state: &QuasifreeState) -> Result<f64> {
    if !state.is_centered() {
        return Err(Error::NonzeroMean);
    }
    Ok(spectrum_product(&state.symplectic_eigenvalues()))
}

/// The same product evaluated on given thermal parameters.
pub fn entanglement_from_spectrum(d: &[f64]) -> Result<f64> {
    if let Some(bad) = d.iter().find(|&&x| !(x >= 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "thermal parameter {bad} < 1"
        )));
    }
    Ok(spectrum_product(d))
}

fn spectrum_product(d: &[f64]) -> f64 {
    d.iter().map(|d| 1.0 / (0.75 * d * d + 0.25)).product()
}

/// Transition probability between `A ⊕ A` and the purification, computed
/// with the general one-pure-state formula on the standard `2n`-mode layout.
pub fn entanglement_via_transition(state: &QuasifreeState) -> Result<f64> {
    let purified = purify(state)?;
    let a = state.covariance();
    let zero = RealMatrix::zeros(a.nrows(), a.ncols());
    let product = doubled_to_standard(&from_blocks(a, &zero, &zero, a));
    let product = QuasifreeState::centered(product, DEFAULT_TOL)?;
    transition_probability(&product, &purified.to_standard()?, PURITY_TOL)
}

/// Explicit Bogoliubov transformation producing the purified thermal state
/// from the doubled vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct PurificationBogoliubov {
    pub d: Vec<f64>,
    pub sbold: RealMatrix,
    pub dbold: RealMatrix,
}

impl PurificationBogoliubov {
    /// `max(‖SᵀJ̃S − J̃‖, ‖SᵀS − D‖)`.
    pub fn residual(&self) -> f64 {
        let jt = doubled_form(self.d.len());
        let sym = max_abs_diff(&(self.sbold.transpose() * &jt * &self.sbold), &jt);
        let gram = max_abs_diff(&(self.sbold.transpose() * &self.sbold), &self.dbold);
        sym.max(gram)
    }

    /// `det((I + S 𝒟 Sᵀ)/2)^{-1/2}` with `𝒟 = diag(D, D, D, D)`.
    pub fn product_transition(&self) -> f64 {
        let dim = self.sbold.nrows();
        let thermal = doubled_diagonal(&[self.d.clone(), self.d.clone()].concat());
        let inner = &self.sbold * thermal * self.sbold.transpose();
        ((RealMatrix::identity(dim, dim) + inner) * 0.5)
            .determinant()
            .powf(-0.5)
    }
}

/// Block matrix with diagonal blocks `√((D+I)/2)` and off-diagonal blocks
/// `√((D−I)/2)` (each repeated on ξ and η), together with
/// `D = [[D̂, √(D²−I)^], [√(D²−I)^, D̂]]`.
pub fn purification_bogoliubov(d: &[f64]) -> Result<PurificationBogoliubov> {
    if d.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    if let Some(bad) = d.iter().find(|&&x| !(x >= 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "thermal parameter {bad} < 1"
        )));
    }
    let cosh: Vec<f64> = d.iter().map(|x| ((x + 1.0) / 2.0).sqrt()).collect();
    let sinh: Vec<f64> = d.iter().map(|x| ((x - 1.0) / 2.0).sqrt()).collect();
    let roots: Vec<f64> = d.iter().map(|x| (x * x - 1.0).sqrt()).collect();
    let c = doubled_diagonal(&cosh);
    let s = doubled_diagonal(&sinh);
    let dd = doubled_diagonal(d);
    let r = doubled_diagonal(&roots);
    Ok(PurificationBogoliubov {
        d: d.to_vec(),
        sbold: from_blocks(&c, &s, &s, &c),
        dbold: from_blocks(&dd, &r, &r, &dd),
    })
}

/// Gaussian overlap of `A ⊕ A` with the purification, directly on the `4n × 4n`
/// matrices.
pub fn product_overlap(state: &QuasifreeState) -> Result<f64> {
    let purified = purify(state)?;
    let a = state.covariance();
    let zero = RealMatrix::zeros(a.nrows(), a.ncols());
    let product = from_blocks(a, &zero, &zero, a);
    let mean = RealVector::zeros(product.nrows());
    gaussian_overlap(&product, &mean, purified.covariance(), &mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;
    use approx::assert_abs_diff_eq;

    #[test]
    fn purify_vacuum_and_thermal() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(2).unwrap());
        let p = purify(&vac).unwrap();
        assert!(max_abs_diff(p.covariance(), &RealMatrix::identity(8, 8)) < 1e-12);

        let th = QuasifreeState::thermal(&[3.0]).unwrap();
        let p = purify(&th).unwrap();
        let (u, v, u2) = p.blocks();
        let r = 2.0 * 2.0_f64.sqrt();
        assert!(max_abs_diff(&u, &(RealMatrix::identity(2, 2) * 3.0)) < 1e-12);
        assert!(max_abs_diff(&u2, &u) < 1e-12);
        assert!(max_abs_diff(&v, &(RealMatrix::identity(2, 2) * r)) < 1e-12);
        assert!(p.purity_residual() < 1e-12);
    }

    #[test]
    fn off_diagonal_identities() {
        let n = PhaseSpaceDim::new(2).unwrap();
        let s = random_symplectic(21, n);
        let a = s.transpose() * doubled_diagonal(&[2.5, 1.3]) * &s;
        let state = QuasifreeState::centered(a, DEFAULT_TOL).unwrap();
        let p = purify(&state).unwrap();
        let (u, v, _) = p.blocks();
        let j = j_matrix(2);
        let ju = &j * &u;
        let jv = &j * &v;
        let id = RealMatrix::identity(4, 4);
        let scale = max_abs(&u).powi(2);
        assert!(max_abs_diff(&(&ju * &ju - &jv * &jv), &(-id)) < 1e-10 * scale);
        assert!(max_abs_diff(&(&ju * &jv), &(&jv * &ju)) < 1e-10 * scale);
    }

    #[test]
    fn purify_rejects() {
        let coh = QuasifreeState::coherent(RealVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(purify(&coh), Err(Error::NonzeroMean));
        assert!(DoubledState::new(RealMatrix::identity(6, 6), 1e-8).is_err());
        let th = doubled_diagonal(&[2.0, 2.0]);
        assert!(matches!(
            DoubledState::new(th, 1e-8),
            Err(Error::NotPure(_))
        ));
    }

    #[test]
    fn reductions_recover_original() {
        let th = QuasifreeState::thermal(&[3.0]).unwrap();
        let p = purify(&th).unwrap();
        for which in [Factor::First, Factor::Second] {
            let r = reduce_purification(&p, which).unwrap();
            assert!(max_abs_diff(r.covariance(), th.covariance()) < 1e-12);
        }
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(1).unwrap());
        let r = reduce_purification(&purify(&vac).unwrap(), Factor::First).unwrap();
        assert!(max_abs_diff(r.covariance(), vac.covariance()) < 1e-12);
    }

    #[test]
    fn standard_layout_is_pure() {
        let n = PhaseSpaceDim::new(2).unwrap();
        let s = random_symplectic(5, n);
        let a = s.transpose() * doubled_diagonal(&[1.8, 1.2]) * &s;
        let p = purify(&QuasifreeState::centered(a.clone(), DEFAULT_TOL).unwrap()).unwrap();
        let std = p.to_standard().unwrap();
        assert!(std.purity_residual() < 1e-9 * max_abs(&a).powi(2));
        // First factor still reduces to A in the standard layout.
        let r = std.reduce(&[0, 1]).unwrap();
        assert!(max_abs_diff(r.covariance(), &a) < 1e-8 * max_abs(&a));
    }

    #[test]
    fn entanglement_values() {
        let pure = QuasifreeState::vacuum(PhaseSpaceDim::new(2).unwrap());
        assert_abs_diff_eq!(entanglement_measure(&pure).unwrap(), 1.0, epsilon = 1e-15);
        let th = QuasifreeState::thermal(&[3.0]).unwrap();
        assert_abs_diff_eq!(
            entanglement_measure(&th).unwrap(),
            1.0 / 7.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            entanglement_via_transition(&th).unwrap(),
            1.0 / 7.0,
            epsilon = 1e-12
        );
        let th2 = QuasifreeState::thermal(&[2.0, 3.0]).unwrap();
        let expected = (1.0 / 3.25) * (1.0 / 7.0);
        assert_abs_diff_eq!(
            entanglement_measure(&th2).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(product_overlap(&th2).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn bogoliubov_blocks() {
        let b = purification_bogoliubov(&[1.0, 1.0]).unwrap();
        assert!(max_abs_diff(&b.sbold, &RealMatrix::identity(8, 8)) < 1e-15);
        let b = purification_bogoliubov(&[3.0]).unwrap();
        assert_abs_diff_eq!(b.sbold[(0, 0)], 2.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.sbold[(0, 2)], 1.0, epsilon = 1e-15);
        assert!(b.residual() < 1e-14);
        let gram = b.sbold.transpose() * &b.sbold;
        assert_abs_diff_eq!(gram[(0, 2)], 2.0 * 2.0_f64.sqrt(), epsilon = 1e-14);
        // Doubled vacuum transformed by S is the purified thermal state.
        let p = purify(&QuasifreeState::thermal(&[3.0]).unwrap()).unwrap();
        assert!(max_abs_diff(&gram, p.covariance()) < 1e-12);
        assert_abs_diff_eq!(b.product_transition(), 1.0 / 7.0, epsilon = 1e-14);
        assert!(purification_bogoliubov(&[0.5]).is_err());
        assert!(purification_bogoliubov(&[]).is_err());
    }
}
