//! Quasifree states `ω(A, v)`: the characteristic function is
//! `u ↦ exp(−uᵀAu/4 + i·uᵀv)`, so the vacuum has `A = I` and a one-mode
//! thermal state with mean occupation `n̄` has `A = (2n̄ + 1)·I`.

use nalgebra::Complex;
use std::f64::consts::PI;

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    asymmetry, doubled_diagonal, max_abs, max_abs_diff, permute_sym, require_finite,
    require_phase_space, spd_inverse_det, symmetrize, RealMatrix, RealVector,
};
use crate::symplectic::{
    j_matrix, symplectic_eigenvalues, symplectic_residual, williamson, PhaseSpaceDim, DEFAULT_TOL,
};

/// Threshold on `det C` below which the discarded block is treated as singular.
pub const DISCARDED_BLOCK_DET_MIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasifreeState {
    n: PhaseSpaceDim,
    a: RealMatrix,
    v: RealVector,
}

impl QuasifreeState {
    /// Validates `(A, v)`: `A` symmetric positive definite with every
    /// symplectic eigenvalue `≥ 1 − tol`.
    pub fn new(a: RealMatrix, v: RealVector, tol: f64) -> Result<Self> {
        let n = require_phase_space(&a)?;
        if v.len() != 2 * n {
            return Err(dim_mismatch(format!("mean of length {}", 2 * n), v.len()));
        }
        require_finite(&a)?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite mean entry".into()));
        }
        let skew = asymmetry(&a);
        if skew > tol * max_abs(&a).max(1.0) {
            return Err(Error::NotSymmetric(skew));
        }
        let a = symmetrize(&a);
        let d = symplectic_eigenvalues(&a)?;
        let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
        if d_min < 1.0 - tol {
            return Err(Error::HeisenbergViolation(d_min));
        }
        Ok(Self {
            n: PhaseSpaceDim::new(n)?,
            a,
            v,
        })
    }

    pub fn centered(a: RealMatrix, tol: f64) -> Result<Self> {
        let dim = a.nrows();
        Self::new(a, RealVector::zeros(dim), tol)
    }

    /// Fock vacuum, `A = I`, `v = 0`.
    pub fn vacuum(n: PhaseSpaceDim) -> Self {
        Self {
            n,
            a: RealMatrix::identity(n.dim(), n.dim()),
            v: RealVector::zeros(n.dim()),
        }
    }

    /// Product of one-mode thermal states `A = diag(d, d)`.
    pub fn thermal(d: &[f64]) -> Result<Self> {
        Self::centered(doubled_diagonal(d), DEFAULT_TOL)
    }

    pub fn coherent(v: RealVector) -> Result<Self> {
        let dim = v.len();
        Self::new(RealMatrix::identity(dim, dim), v, DEFAULT_TOL)
    }

    pub fn modes(&self) -> usize {
        self.n.modes()
    }

    pub fn dim(&self) -> PhaseSpaceDim {
        self.n
    }

    pub fn covariance(&self) -> &RealMatrix {
        &self.a
    }

    pub fn mean(&self) -> &RealVector {
        &self.v
    }

    pub fn is_centered(&self) -> bool {
        self.v.iter().all(|x| x.abs() <= 1e-12)
    }

    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.a).expect("validated state has SPD covariance")
    }

    /// `‖(JA)² + I‖_max`.
    pub fn purity_residual(&self) -> f64 {
        let ja = j_matrix(self.modes()) * &self.a;
        let id = RealMatrix::identity(self.n.dim(), self.n.dim());
        max_abs_diff(&(&ja * &ja), &(-id))
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity_residual() <= tol
    }

    pub fn characteristic_fn(&self, u: &RealVector) -> Result<Complex<f64>> {
        self.check_vector(u)?;
        let quad = u.dot(&(&self.a * u));
        Ok(Complex::from_polar((-quad / 4.0).exp(), u.dot(&self.v)))
    }

    pub fn wigner(&self) -> Result<WignerGaussian> {
        let j = j_matrix(self.modes());
        let (a_inv, _) = spd_inverse_det(&self.a).map_err(|_| Error::Singular)?;
        let g = symmetrize(&(-(&j * a_inv * &j)));
        let (_, det_g) = spd_inverse_det(&g).map_err(|_| Error::Singular)?;
        Ok(WignerGaussian {
            prefactor: PI.powi(-(self.modes() as i32)) * det_g.sqrt(),
            g,
            mean: self.v.clone(),
        })
    }

    pub fn wigner_eval(&self, u: &RealVector) -> Result<f64> {
        self.check_vector(u)?;
        Ok(self.wigner()?.eval(u))
    }

    /// `ω(A, v) ∘ α_S = ω(SᵀAS, Sᵀv)`.
    pub fn apply_bogoliubov(&self, s: &RealMatrix) -> Result<Self> {
        if s.shape() != self.a.shape() {
            return Err(dim_mismatch(
                format!("{0}x{0}", self.n.dim()),
                format!("{}x{}", s.nrows(), s.ncols()),
            ));
        }
        let residual = symplectic_residual(s)?;
        if residual > DEFAULT_TOL * max_abs(s).powi(2).max(1.0) {
            return Err(Error::NotSymplectic(residual));
        }
        Ok(Self {
            n: self.n,
            a: symmetrize(&(s.transpose() * &self.a * s)),
            v: s.transpose() * &self.v,
        })
    }

    pub fn displace(&self, w: &RealVector) -> Result<Self> {
        self.check_vector(w)?;
        Ok(Self {
            n: self.n,
            a: self.a.clone(),
            v: &self.v + w,
        })
    }

    /// State on the direct-sum phase space, reindexed to the global
    /// `(ξ-block, η-block)` ordering.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n1, n2) = (self.modes(), other.modes());
        let n = n1 + n2;
        let place1 = |i: usize| if i < n1 { i } else { n + (i - n1) };
        let place2 = |i: usize| if i < n2 { n1 + i } else { n + n1 + (i - n2) };
        let mut a = RealMatrix::zeros(2 * n, 2 * n);
        let mut v = RealVector::zeros(2 * n);
        for i in 0..2 * n1 {
            v[place1(i)] = self.v[i];
            for j in 0..2 * n1 {
                a[(place1(i), place1(j))] = self.a[(i, j)];
            }
        }
        for i in 0..2 * n2 {
            v[place2(i)] = other.v[i];
            for j in 0..2 * n2 {
                a[(place2(i), place2(j))] = other.a[(i, j)];
            }
        }
        Self {
            n: PhaseSpaceDim::new(n).expect("n1 + n2 ≥ 2"),
            a,
            v,
        }
    }

    /// Marginal on the modes listed in `keep`, in that order.
    ///
    /// Works on the Wigner matrix: with `G` partitioned into kept and
    /// discarded blocks `[[A, B], [Bᵀ, C]]`, the marginal Wigner matrix is the
    /// Schur complement `A − B C⁻¹ Bᵀ`.
    pub fn reduce(&self, keep: &[usize]) -> Result<Self> {
        let n = self.modes();
        if keep.is_empty() {
            return Err(Error::InvalidParameter("no modes kept".into()));
        }
        let mut seen = vec![false; n];
        for &k in keep {
            if k >= n || seen[k] {
                return Err(Error::InvalidParameter(format!(
                    "mode index {k} out of range or repeated"
                )));
            }
            seen[k] = true;
        }
        let discard: Vec<usize> = (0..n).filter(|&k| !seen[k]).collect();
        let m = keep.len();
        let perm: Vec<usize> = keep
            .iter()
            .copied()
            .chain(keep.iter().map(|&k| n + k))
            .chain(discard.iter().copied())
            .chain(discard.iter().map(|&k| n + k))
            .collect();
        let v = RealVector::from_iterator(2 * m, perm[..2 * m].iter().map(|&i| self.v[i]));
        if discard.is_empty() {
            let a = permute_sym(&self.a, &perm);
            return Ok(Self {
                n: PhaseSpaceDim::new(m)?,
                a,
                v,
            });
        }

        let g = permute_sym(&self.wigner()?.g, &perm);
        let g1 = schur_complement(&g, 2 * m)?;
        let (g1_inv, _) = spd_inverse_det(&g1).map_err(|_| Error::Singular)?;
        let j1 = j_matrix(m);
        let a1 = symmetrize(&(-(&j1 * g1_inv * &j1)));
        Self::new(a1, v, DEFAULT_TOL)
    }

    /// Thermal factors and frame with `A = Sᵀ diag(d, d) S` for a centered state.
    pub fn mode_decompose(&self) -> Result<ModeDecomposition> {
        if !self.is_centered() {
            return Err(Error::NonzeroMean);
        }
        let f = williamson(&self.a, DEFAULT_TOL)?;
        Ok(ModeDecomposition { d: f.d, s: f.s })
    }

    fn check_vector(&self, u: &RealVector) -> Result<()> {
        if u.len() != self.n.dim() {
            return Err(dim_mismatch(
                format!("vector of length {}", self.n.dim()),
                u.len(),
            ));
        }
        Ok(())
    }
}

/// Free-function form of [`QuasifreeState::new`].
pub fn make_state(a: RealMatrix, v: RealVector, tol: f64) -> Result<QuasifreeState> {
    QuasifreeState::new(a, v, tol)
}

/// Schur complement of the trailing block: for `M = [[P, Q], [Qᵀ, C]]` with
/// `P` of size `k`, returns `P − Q C⁻¹ Qᵀ`.
pub fn schur_complement(m: &RealMatrix, k: usize) -> Result<RealMatrix> {
    let total = m.nrows();
    let p = m.view((0, 0), (k, k));
    let q = m.view((0, k), (k, total - k));
    let c = m.view((k, k), (total - k, total - k)).into_owned();
    let det_c = c.determinant();
    if det_c.abs() < DISCARDED_BLOCK_DET_MIN {
        return Err(Error::SingularBlock(det_c));
    }
    let c_inv = c.try_inverse().ok_or(Error::SingularBlock(det_c))?;
    Ok(symmetrize(&(p - q * c_inv * q.transpose())))
}

/// Gaussian Wigner function `W(u) = prefactor · exp(−(u−v)ᵀ G (u−v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGaussian {
    pub g: RealMatrix,
    pub mean: RealVector,
    pub prefactor: f64,
}

impl WignerGaussian {
    pub fn eval(&self, u: &RealVector) -> f64 {
        let du = u - &self.mean;
        self.prefactor * (-du.dot(&(&self.g * &du))).exp()
    }

    /// Inverse map `A = −J G⁻¹ J`.
    pub fn covariance(&self) -> Result<RealMatrix> {
        let j = j_matrix(self.g.nrows() / 2);
        let (g_inv, _) = spd_inverse_det(&self.g).map_err(|_| Error::Singular)?;
        Ok(symmetrize(&(-(&j * g_inv * &j))))
    }

    /// Largest eigenvalue of `−(JG)²`; at most 1 for a physical state.
    pub fn uncertainty_bound(&self) -> f64 {
        let j = j_matrix(self.g.nrows() / 2);
        let jg = &j * &self.g;
        let m = -(&jg * &jg);
        m.complex_eigenvalues()
            .iter()
            .fold(f64::NEG_INFINITY, |acc, z| acc.max(z.re))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    pub d: Vec<f64>,
    pub s: RealMatrix,
}

impl ModeDecomposition {
    pub fn recompose(&self) -> RealMatrix {
        self.s.transpose() * doubled_diagonal(&self.d) * &self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_symplectic, single_mode_squeezer};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn diag(values: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&RealVector::from_row_slice(values))
    }

    fn vec(values: &[f64]) -> RealVector {
        RealVector::from_row_slice(values)
    }

    #[test]
    fn validation() {
        let vac = make_state(RealMatrix::identity(2, 2), vec(&[0.0, 0.0]), DEFAULT_TOL).unwrap();
        assert!(vac.is_pure(1e-12));
        assert!(matches!(
            make_state(diag(&[0.5, 0.5]), vec(&[0.0, 0.0]), DEFAULT_TOL),
            Err(Error::HeisenbergViolation(_))
        ));
        let sq = make_state(
            diag(&[E * E, 1.0 / (E * E)]),
            vec(&[1.0, -1.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(sq.symplectic_eigenvalues()[0], 1.0, epsilon = 1e-12);
        assert!(matches!(
            make_state(
                RealMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.0, 2.0]),
                vec(&[0.0, 0.0]),
                DEFAULT_TOL
            ),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            make_state(RealMatrix::identity(2, 2), vec(&[0.0]), DEFAULT_TOL),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(make_state(RealMatrix::identity(3, 3), vec(&[0.0; 3]), DEFAULT_TOL).is_err());
    }

    #[test]
    fn purity() {
        assert!(QuasifreeState::thermal(&[1.0, 1.0]).unwrap().is_pure(1e-12));
        assert!(!QuasifreeState::thermal(&[3.0]).unwrap().is_pure(1e-6));
        let s = random_symplectic(5, PhaseSpaceDim::new(2).unwrap());
        let pure = QuasifreeState::centered(s.transpose() * &s, DEFAULT_TOL).unwrap();
        assert!(pure.is_pure(1e-9));
    }

    #[test]
    fn characteristic_values() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(1).unwrap());
        let one = vac.characteristic_fn(&vec(&[0.0, 0.0])).unwrap();
        assert_eq!(one, Complex::new(1.0, 0.0));
        let z = vac.characteristic_fn(&vec(&[2.0, 0.0])).unwrap();
        assert_abs_diff_eq!(z.re, (-1.0_f64).exp(), epsilon = 1e-15);
        let th = QuasifreeState::new(diag(&[3.0, 3.0]), vec(&[1.0, 0.0]), DEFAULT_TOL).unwrap();
        let z = th.characteristic_fn(&vec(&[0.0, 2.0])).unwrap();
        assert_abs_diff_eq!(z.re, (-3.0_f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        assert!(vac.characteristic_fn(&vec(&[1.0])).is_err());
    }

    #[test]
    fn wigner_matrices() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(2).unwrap());
        let w = vac.wigner().unwrap();
        assert_eq!(w.g, RealMatrix::identity(4, 4));
        assert_abs_diff_eq!(w.prefactor, 1.0 / (PI * PI), epsilon = 1e-15);

        let sq = QuasifreeState::centered(diag(&[E * E, 1.0 / (E * E)]), DEFAULT_TOL).unwrap();
        assert!(max_abs_diff(&sq.wigner().unwrap().g, sq.covariance()) < 1e-12);

        let th = QuasifreeState::thermal(&[3.0]).unwrap();
        let w = th.wigner().unwrap();
        assert!(max_abs_diff(&w.g, &(RealMatrix::identity(2, 2) / 3.0)) < 1e-15);
        assert_abs_diff_eq!(w.g.determinant(), 1.0 / 9.0, epsilon = 1e-15);
        assert!(w.uncertainty_bound() <= 1.0 + 1e-12);
        assert!(max_abs_diff(&w.covariance().unwrap(), th.covariance()) < 1e-14);
    }

    #[test]
    fn wigner_point_values() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(1).unwrap());
        assert_abs_diff_eq!(
            vac.wigner_eval(&vec(&[0.0, 0.0])).unwrap(),
            1.0 / PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            vac.wigner_eval(&vec(&[1.0, 0.0])).unwrap(),
            (-1.0_f64).exp() / PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn bogoliubov_and_displacement() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(1).unwrap());
        assert_eq!(
            vac.apply_bogoliubov(&RealMatrix::identity(2, 2)).unwrap(),
            vac
        );
        let sq = vac.apply_bogoliubov(&single_mode_squeezer(1.0)).unwrap();
        assert!(max_abs_diff(sq.covariance(), &diag(&[E * E, 1.0 / (E * E)])) < 1e-14);
        assert!(matches!(
            vac.apply_bogoliubov(&diag(&[2.0, 2.0])),
            Err(Error::NotSymplectic(_))
        ));

        let w = vec(&[1.0, 2.0]);
        let coh = vac.displace(&w).unwrap();
        assert_eq!(coh.mean(), &w);
        assert_eq!(coh.displace(&(-&w)).unwrap(), vac);
        assert_eq!(vac.displace(&vec(&[0.0, 0.0])).unwrap(), vac);
    }

    #[test]
    fn tensor_layout() {
        let one = PhaseSpaceDim::new(1).unwrap();
        let vv = QuasifreeState::vacuum(one).tensor(&QuasifreeState::vacuum(one));
        assert_eq!(vv, QuasifreeState::vacuum(PhaseSpaceDim::new(2).unwrap()));

        let s1 = QuasifreeState::new(
            RealMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.5]),
            vec(&[1.0, 2.0]),
            DEFAULT_TOL,
        )
        .unwrap();
        let s2 = QuasifreeState::new(diag(&[3.0, 4.0]), vec(&[5.0, 6.0]), DEFAULT_TOL).unwrap();
        let t = s1.tensor(&s2);
        assert_eq!(t.mean(), &vec(&[1.0, 5.0, 2.0, 6.0]));
        assert_eq!(t.covariance()[(0, 2)], 0.3);
        assert_eq!(t.covariance()[(3, 3)], 4.0);
        assert_eq!(t.covariance()[(1, 3)], 0.0);
        assert_eq!(t.covariance()[(0, 1)], 0.0);
        let r = t.reduce(&[0]).unwrap();
        assert!(max_abs_diff(r.covariance(), s1.covariance()) < 1e-12);
        assert_eq!(r.mean(), s1.mean());
        let r = t.reduce(&[1]).unwrap();
        assert!(max_abs_diff(r.covariance(), s2.covariance()) < 1e-12);
    }

    #[test]
    fn reduce_errors_and_identity() {
        let s = QuasifreeState::thermal(&[2.0, 3.0]).unwrap();
        assert!(s.reduce(&[]).is_err());
        assert!(s.reduce(&[2]).is_err());
        assert!(s.reduce(&[0, 0]).is_err());
        // Keeping every mode in swapped order permutes the state.
        let swapped = s.reduce(&[1, 0]).unwrap();
        let d = swapped.symplectic_eigenvalues();
        assert_abs_diff_eq!(d[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1], 2.0, epsilon = 1e-12);
        assert_eq!(swapped.covariance()[(0, 0)], 3.0);
    }

    #[test]
    fn schur_rejects_singular_block() {
        let m = diag(&[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            schur_complement(&m, 2),
            Err(Error::SingularBlock(_))
        ));
    }

    #[test]
    fn mode_decomposition() {
        let vac = QuasifreeState::vacuum(PhaseSpaceDim::new(2).unwrap());
        let md = vac.mode_decompose().unwrap();
        assert!(md.d.iter().all(|d| (d - 1.0).abs() < 1e-12));
        let th = QuasifreeState::thermal(&[3.0]).unwrap();
        assert_abs_diff_eq!(th.mode_decompose().unwrap().d[0], 3.0, epsilon = 1e-12);
        let coh = QuasifreeState::coherent(vec(&[1.0, 0.0])).unwrap();
        assert_eq!(coh.mode_decompose(), Err(Error::NonzeroMean));
    }
}
