//! Real linear algebra on the symplectic phase space.
//!
//! Coordinates are ordered with all position-like components first and all
//! momentum-like components second, `u = (ξ₁, …, ξₙ, η₁, …, ηₙ)`, so the
//! symplectic form is `J = [[0, I], [−I, 0]]` and `σ(u, v) = uᵀJv`.
//!
//! Decompositions are unique only up to an orthogonal-symplectic gauge. The
//! gauge fixed here sorts symplectic eigenvalues and squeezing factors in
//! descending order with every squeezing factor `≥ 1`.

use nalgebra::{SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::{
    doubled_diagonal, from_blocks, max_abs, max_abs_diff, require_finite, require_phase_space,
    require_square, symmetrize, RealMatrix, RealVector,
};

/// Default tolerance for symplectic membership checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Eigenvalues below this (and above zero) are clamped by [`sqrt_spd`].
pub const PSD_CLAMP: f64 = 1e-12;

/// Number of modes `n`; the real phase-space dimension is `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseSpaceDim(usize);

impl PhaseSpaceDim {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self(modes))
    }

    pub fn modes(self) -> usize {
        self.0
    }

    pub fn dim(self) -> usize {
        2 * self.0
    }
}

/// The complex structure `J` for a given mode count.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    pub n: PhaseSpaceDim,
    pub j: RealMatrix,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &RealMatrix {
        &self.j
    }
}

pub fn standard_form(n: PhaseSpaceDim) -> SymplecticForm {
    SymplecticForm {
        n,
        j: j_matrix(n.modes()),
    }
}

/// `J = [[0, I], [−I, 0]]` on `n` modes.
pub fn j_matrix(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// `‖SᵀJS − J‖_max`.
pub fn symplectic_residual(s: &RealMatrix) -> Result<f64> {
    let n = require_phase_space(s)?;
    let j = j_matrix(n);
    Ok(max_abs_diff(&(s.transpose() * &j * s), &j))
}

pub fn is_symplectic(s: &RealMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(s)? <= tol)
}

pub fn orthogonality_residual(o: &RealMatrix) -> f64 {
    let id = RealMatrix::identity(o.nrows(), o.ncols());
    max_abs_diff(&(o.transpose() * o), &id)
}

/// Symplectic eigenvalues `d` with `A = Sᵀ diag(d, d) S`, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct WilliamsonFactors {
    pub s: RealMatrix,
    pub d: Vec<f64>,
}

impl WilliamsonFactors {
    pub fn recompose(&self) -> RealMatrix {
        self.s.transpose() * doubled_diagonal(&self.d) * &self.s
    }
}

/// `S = O · diag(M, M⁻¹) · O′` with `O`, `O′` orthogonal and symplectic.
#[derive(Debug, Clone, PartialEq)]
pub struct BdiFactors {
    pub o: RealMatrix,
    pub oprime: RealMatrix,
    pub m: Vec<f64>,
}

impl BdiFactors {
    /// `diag(M, M⁻¹)`.
    pub fn squeeze_matrix(&self) -> RealMatrix {
        squeeze_diagonal(&self.m)
    }

    pub fn recompose(&self) -> RealMatrix {
        &self.o * self.squeeze_matrix() * &self.oprime
    }
}

pub(crate) fn squeeze_diagonal(m: &[f64]) -> RealMatrix {
    let n = m.len();
    RealMatrix::from_fn(2 * n, 2 * n, |i, j| match (i == j, i < n) {
        (false, _) => 0.0,
        (true, true) => m[i],
        (true, false) => 1.0 / m[i - n],
    })
}

/// Blocks of an orthogonal symplectic matrix `[[X, Y], [−Y, X]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSymplecticXY {
    pub x: RealMatrix,
    pub y: RealMatrix,
}

impl OrthoSymplecticXY {
    /// Largest violation of `XᵀX + YᵀY = I` and `XᵀY = YᵀX`.
    pub fn constraint_residual(&self) -> f64 {
        let n = self.x.nrows();
        let gram = self.x.transpose() * &self.x + self.y.transpose() * &self.y;
        let unit = max_abs_diff(&gram, &RealMatrix::identity(n, n));
        let xty = self.x.transpose() * &self.y;
        unit.max(max_abs_diff(&xty, &xty.transpose()))
    }
}

pub fn ortho_symplectic_from_xy(xy: &OrthoSymplecticXY, tol: f64) -> Result<RealMatrix> {
    let n = require_square(&xy.x)?;
    if xy.y.shape() != (n, n) {
        return Err(dim_mismatch(
            format!("{n}x{n}"),
            format!("{}x{}", xy.y.nrows(), xy.y.ncols()),
        ));
    }
    let residual = xy.constraint_residual();
    if residual > tol {
        return Err(Error::ConstraintViolation(format!(
            "residual {residual:.3e} exceeds {tol:.3e}"
        )));
    }
    Ok(from_blocks(&xy.x, &xy.y, &(-&xy.y), &xy.x))
}

/// One-mode squeezer `diag(eʳ, e⁻ʳ)`.
pub fn single_mode_squeezer(r: f64) -> RealMatrix {
    RealMatrix::from_diagonal(&RealVector::from_vec(vec![r.exp(), (-r).exp()]))
}

/// Principal symmetric square root of a positive semidefinite matrix.
pub fn sqrt_spd(p: &RealMatrix) -> Result<RealMatrix> {
    require_square(p)?;
    require_finite(p)?;
    let eig = SymmetricEigen::new(symmetrize(p));
    let mut roots = eig.eigenvalues.clone();
    for value in roots.iter_mut() {
        if *value < -PSD_CLAMP {
            return Err(Error::NegativeEigenvalue(*value));
        }
        *value = value.max(0.0).sqrt();
    }
    let q = &eig.eigenvectors;
    Ok(symmetrize(
        &(q * RealMatrix::from_diagonal(&roots) * q.transpose()),
    ))
}

/// Deterministic pseudo-random symplectic matrix `exp(J·H)`, with `H`
/// symmetric and entries uniform in `[−1, 1]`.
pub fn random_symplectic(seed: u64, n: PhaseSpaceDim) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_symmetric(&mut rng, n.dim());
    symplectic_exp(&h)
}

/// `exp(J·H)` for symmetric `H`.
pub fn symplectic_exp(h: &RealMatrix) -> RealMatrix {
    let n = h.nrows() / 2;
    (j_matrix(n) * h).exp()
}

/// Deterministic pseudo-random orthogonal symplectic matrix.
pub fn random_orthosymplectic(seed: u64, n: PhaseSpaceDim) -> RealMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = n.modes();
    let p = random_symmetric(&mut rng, k);
    let mut q = RealMatrix::zeros(k, k);
    for i in 0..k {
        for j in (i + 1)..k {
            let x: f64 = rng.random_range(-1.0..=1.0);
            q[(i, j)] = x;
            q[(j, i)] = -x;
        }
    }
    // Symmetric H commuting with J generates an orthogonal one-parameter group.
    let mut h = from_blocks(&p, &q, &(-&q), &p);
    h *= std::f64::consts::PI;
    symplectic_exp(&h)
}

fn random_symmetric(rng: &mut impl Rng, dim: usize) -> RealMatrix {
    let mut h = RealMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.random_range(-1.0..=1.0);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    h
}

/// Orthonormal eigenbasis candidates sorted by eigenvalue, descending.
struct Spectrum {
    values: Vec<f64>,
    vectors: Vec<RealVector>,
}

impl Spectrum {
    fn new(values: &RealVector, vectors: &RealMatrix) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        Self {
            values: order.iter().map(|&i| values[i]).collect(),
            vectors: order
                .iter()
                .map(|&i| vectors.column(i).into_owned())
                .collect(),
        }
    }

    /// Greedily picks `n` vectors, one per conjugate pair, so that the picks
    /// together with their `partner` images form an orthonormal basis.
    ///
    /// `partner` must map an eigenvector into an eigenvector (of the same or
    /// the paired eigenvalue) orthogonal to its input. Picks come from the
    /// highest-eigenvalue cluster that still has uncovered directions.
    fn adapted_pairs(
        &self,
        n: usize,
        partner: impl Fn(&RealVector) -> RealVector,
    ) -> Vec<(RealVector, RealVector)> {
        let scale = self.values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        let cluster_tol = 1e-9 * scale;
        let coverage_floor = 0.5 / n as f64;

        let mut basis: Vec<RealVector> = Vec::with_capacity(2 * n);
        let mut pairs = Vec::with_capacity(n);
        let mut used = vec![false; self.values.len()];

        for _ in 0..n {
            let residuals: Vec<Option<RealVector>> = self
                .vectors
                .iter()
                .zip(&used)
                .map(|(v, &u)| (!u).then(|| project_out(v, &basis)))
                .collect();

            let mut top: Option<f64> = None;
            for (k, r) in residuals.iter().enumerate() {
                if let Some(r) = r {
                    if r.norm_squared() > coverage_floor {
                        top = Some(top.map_or(self.values[k], |t| t.max(self.values[k])));
                    }
                }
            }
            let top = top.expect("eigenbasis exhausted before n pairs were formed");

            let (best, _) = residuals
                .iter()
                .enumerate()
                .filter_map(|(k, r)| r.as_ref().map(|r| (k, r.norm_squared())))
                .filter(|&(k, _)| self.values[k] >= top - cluster_tol)
                .fold(
                    (usize::MAX, -1.0),
                    |acc, (k, w)| if w > acc.1 { (k, w) } else { acc },
                );

            used[best] = true;
            let x = residuals[best].as_ref().unwrap().normalize();
            let y = partner(&x);
            let y = project_out(&y, &basis);
            let y = project_out(&y, std::slice::from_ref(&x)).normalize();
            basis.push(x.clone());
            basis.push(y.clone());
            pairs.push((x, y));
        }
        pairs
    }
}

fn project_out(v: &RealVector, basis: &[RealVector]) -> RealVector {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&r);
            r.axpy(-c, b, 1.0);
        }
    }
    r
}

/// Square root `K = A^{1/2}` and the antisymmetric matrix `K J K` for an SPD `A`.
fn williamson_frame(a: &RealMatrix) -> Result<(usize, RealMatrix, RealMatrix)> {
    let n = require_phase_space(a)?;
    require_finite(a)?;
    let a = symmetrize(a);
    if nalgebra::Cholesky::new(a.clone()).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let k = sqrt_spd(&a)?;
    let kjk = &k * j_matrix(n) * &k;
    Ok((n, k, kjk))
}

pub fn symplectic_eigenvalues(a: &RealMatrix) -> Result<Vec<f64>> {
    let (n, _, kjk) = williamson_frame(a)?;
    let gram = symmetrize(&(kjk.transpose() * &kjk));
    let eig = SymmetricEigen::new(gram);
    let mut values: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0).sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    // Each value is doubly degenerate; average the pairs.
    Ok((0..n)
        .map(|i| 0.5 * (values[2 * i] + values[2 * i + 1]))
        .collect())
}

/// Williamson normal form `A = Sᵀ diag(d, d) S`.
///
/// With `K = A^{1/2}`, the antisymmetric `K J K` is brought to the real
/// canonical form `Oᵀ (K J K) O = [[0, D], [−D, 0]]` by an orthonormal basis
/// of conjugate pairs; then `S = diag(d, d)^{-1/2} Oᵀ K`.
pub fn williamson(a: &RealMatrix, tol: f64) -> Result<WilliamsonFactors> {
    let (n, k, kjk) = williamson_frame(a)?;
    let gram = symmetrize(&(kjk.transpose() * &kjk));
    let eig = SymmetricEigen::new(gram);
    let spectrum = Spectrum::new(&eig.eigenvalues, &eig.eigenvectors);
    let pairs = spectrum.adapted_pairs(n, |x| &kjk * x);

    let mut o = RealMatrix::zeros(2 * n, 2 * n);
    let mut d = Vec::with_capacity(n);
    for (i, (x, y)) in pairs.iter().enumerate() {
        o.set_column(i, y);
        o.set_column(n + i, x);
        d.push(y.dot(&(&kjk * x)));
    }
    let inv_sqrt: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let s = doubled_diagonal(&inv_sqrt) * o.transpose() * k;
    let factors = WilliamsonFactors { s, d };

    let scale = max_abs(a).max(1.0);
    let residual =
        (max_abs_diff(&factors.recompose(), a) / scale).max(symplectic_residual(&factors.s)?);
    if residual > tol {
        return Err(Error::IllConditioned { residual, tol });
    }
    Ok(factors)
}

/// Euler (Bloch–Messiah) decomposition of a symplectic matrix.
///
/// The polar form `S = P·R` is read off the SVD; `P` is then diagonalised
/// in an orthogonal-symplectic basis whose columns pair each eigenvector `x`
/// (eigenvalue `m ≥ 1`) with `−Jx` (eigenvalue `1/m`).
pub fn bdi_decompose(s: &RealMatrix, tol: f64) -> Result<BdiFactors> {
    let n = require_phase_space(s)?;
    require_finite(s)?;
    let residual = symplectic_residual(s)?;
    if residual > tol * max_abs(s).powi(2).max(1.0) {
        return Err(Error::NotSymplectic(residual));
    }

    let svd = SVD::new(s.clone(), true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested Vᵀ");
    let p = u * RealMatrix::from_diagonal(&svd.singular_values) * u.transpose();
    let r = u * v_t;

    let j = j_matrix(n);
    let spectrum = Spectrum::new(&svd.singular_values, u);
    let pairs = spectrum.adapted_pairs(n, |x| -(&j * x));

    let mut o = RealMatrix::zeros(2 * n, 2 * n);
    let mut m = Vec::with_capacity(n);
    for (i, (x, y)) in pairs.iter().enumerate() {
        o.set_column(i, x);
        o.set_column(n + i, y);
        m.push(x.dot(&(&p * x)).max(1.0));
    }
    let oprime = o.transpose() * r;
    let factors = BdiFactors { o, oprime, m };

    let scale = max_abs(s).max(1.0);
    let residual = max_abs_diff(&factors.recompose(), s) / scale;
    if residual > tol {
        return Err(Error::IllConditioned { residual, tol });
    }
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E;

    fn dim(n: usize) -> PhaseSpaceDim {
        PhaseSpaceDim::new(n).unwrap()
    }

    fn diag(values: &[f64]) -> RealMatrix {
        RealMatrix::from_diagonal(&RealVector::from_row_slice(values))
    }

    #[test]
    fn standard_form_blocks() {
        let j1 = standard_form(dim(1));
        assert_eq!(
            j1.j,
            RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        let j2 = j_matrix(2);
        assert_eq!(j2[(0, 2)], 1.0);
        assert_eq!(j2[(1, 3)], 1.0);
        assert_eq!(j2[(2, 0)], -1.0);
        assert_eq!(j2[(0, 1)], 0.0);
        for n in 1..5 {
            let j = j_matrix(n);
            assert_eq!(&j * &j, -RealMatrix::identity(2 * n, 2 * n));
        }
        assert!(PhaseSpaceDim::new(0).is_err());
    }

    #[test]
    fn membership() {
        assert!(is_symplectic(&j_matrix(3), DEFAULT_TOL).unwrap());
        assert!(is_symplectic(&diag(&[2.0, 0.5]), DEFAULT_TOL).unwrap());
        assert!(!is_symplectic(&diag(&[2.0, 2.0]), DEFAULT_TOL).unwrap());
        assert!(is_symplectic(&RealMatrix::identity(3, 3), DEFAULT_TOL).is_err());
        assert!(is_symplectic(&RealMatrix::zeros(2, 4), DEFAULT_TOL).is_err());
    }

    #[test]
    fn simple_spectra() {
        assert_eq!(
            symplectic_eigenvalues(&RealMatrix::identity(6, 6))
                .unwrap()
                .len(),
            3
        );
        for d in symplectic_eigenvalues(&RealMatrix::identity(6, 6)).unwrap() {
            assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
        }
        let squeezed = diag(&[E * E, 1.0 / (E * E)]);
        assert_abs_diff_eq!(
            symplectic_eigenvalues(&squeezed).unwrap()[0],
            1.0,
            epsilon = 1e-12
        );
        let thermal = RealMatrix::identity(2, 2) * 3.0;
        assert_abs_diff_eq!(
            symplectic_eigenvalues(&thermal).unwrap()[0],
            3.0,
            epsilon = 1e-12
        );
        assert_eq!(
            symplectic_eigenvalues(&diag(&[1.0, -1.0])),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn williamson_identity_and_squeezed_thermal() {
        let f = williamson(&RealMatrix::identity(4, 4), DEFAULT_TOL).unwrap();
        for d in &f.d {
            assert_abs_diff_eq!(*d, 1.0, epsilon = 1e-12);
        }
        // S is an orthogonal-symplectic gauge of the identity.
        assert!(orthogonality_residual(&f.s) < 1e-12);

        let a = diag(&[3.0 * E * E, 3.0 / (E * E)]);
        let f = williamson(&a, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(f.d[0], 3.0, epsilon = 1e-12);
        assert!(max_abs_diff(&f.recompose(), &a) < 1e-12);
        // Up to a rotation gauge, S is diag(e, 1/e): SᵀS has the same entries.
        let sts = f.s.transpose() * &f.s;
        assert!(max_abs_diff(&sts, &diag(&[E * E, 1.0 / (E * E)])) < 1e-12);
    }

    #[test]
    fn williamson_degenerate_spectrum() {
        // Equal symplectic eigenvalues hidden behind a random frame.
        let s = random_symplectic(11, dim(3));
        let a = s.transpose() * doubled_diagonal(&[2.0, 2.0, 1.0]) * &s;
        let f = williamson(&a, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(f.d[0], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.d[1], 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.d[2], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn bdi_simple_cases() {
        let f = bdi_decompose(&diag(&[3.0, 1.0 / 3.0]), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(f.m[0], 3.0, epsilon = 1e-12);
        assert!(orthogonality_residual(&f.o) < 1e-12);

        let (c, s) = (0.3_f64.cos(), 0.3_f64.sin());
        let rot = RealMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        let f = bdi_decompose(&rot, DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(f.m[0], 1.0, epsilon = 1e-12);
        assert!(max_abs_diff(&f.recompose(), &rot) < 1e-14);

        // Squeezing along η: M is still reported ≥ 1.
        let f = bdi_decompose(&single_mode_squeezer(-0.7), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(f.m[0], 0.7_f64.exp(), epsilon = 1e-12);
        assert!(bdi_decompose(&diag(&[2.0, 2.0]), DEFAULT_TOL).is_err());
    }

    #[test]
    fn bdi_factors_are_orthosymplectic() {
        for seed in 0..10 {
            let s = random_symplectic(seed, dim(2));
            let f = bdi_decompose(&s, DEFAULT_TOL).unwrap();
            for q in [&f.o, &f.oprime] {
                assert!(orthogonality_residual(q) < 1e-10);
                assert!(symplectic_residual(q).unwrap() < 1e-10);
            }
            assert!(f.m.windows(2).all(|w| w[0] >= w[1]));
            assert!(f.m.iter().all(|&m| m >= 1.0));
        }
    }

    #[test]
    fn ortho_from_xy() {
        let id = ortho_symplectic_from_xy(
            &OrthoSymplecticXY {
                x: RealMatrix::identity(2, 2),
                y: RealMatrix::zeros(2, 2),
            },
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(id, RealMatrix::identity(4, 4));

        let theta = 0.4_f64;
        let rot = ortho_symplectic_from_xy(
            &OrthoSymplecticXY {
                x: diag(&[theta.cos()]),
                y: diag(&[theta.sin()]),
            },
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(orthogonality_residual(&rot) < 1e-15);
        assert!(is_symplectic(&rot, 1e-15).unwrap());

        let bad = OrthoSymplecticXY {
            x: RealMatrix::identity(2, 2) * 2.0,
            y: RealMatrix::zeros(2, 2),
        };
        assert!(matches!(
            ortho_symplectic_from_xy(&bad, DEFAULT_TOL),
            Err(Error::ConstraintViolation(_))
        ));
    }

    #[test]
    fn squeezer() {
        assert_eq!(single_mode_squeezer(0.0), RealMatrix::identity(2, 2));
        let s = single_mode_squeezer(1.0);
        assert_abs_diff_eq!(s[(0, 0)], E, epsilon = 1e-15);
        assert!(is_symplectic(&s, 1e-15).unwrap());
        for r in [-1.5, -0.2, 0.9] {
            let f = bdi_decompose(&single_mode_squeezer(r), DEFAULT_TOL).unwrap();
            assert_abs_diff_eq!(f.m[0], f64::exp(f64::abs(r)), epsilon = 1e-12);
        }
    }

    #[test]
    fn square_roots() {
        assert_eq!(
            sqrt_spd(&RealMatrix::identity(3, 3)).unwrap(),
            RealMatrix::identity(3, 3)
        );
        let r = sqrt_spd(&diag(&[4.0, 9.0])).unwrap();
        assert!(max_abs_diff(&r, &diag(&[2.0, 3.0])) < 1e-15);
        // Numerically semidefinite input is clamped.
        let r = sqrt_spd(&diag(&[-1e-13, 1.0])).unwrap();
        assert_eq!(r[(0, 0)], 0.0);
        assert_eq!(
            sqrt_spd(&diag(&[-1e-6, 1.0])),
            Err(Error::NegativeEigenvalue(-1e-6))
        );
    }

    #[test]
    fn random_symplectic_is_deterministic() {
        let a = random_symplectic(7, dim(2));
        let b = random_symplectic(7, dim(2));
        assert_eq!(a, b);
        assert_ne!(a, random_symplectic(8, dim(2)));
        assert!(is_symplectic(&a, 1e-10).unwrap());
        assert_eq!(
            symplectic_exp(&RealMatrix::zeros(4, 4)),
            RealMatrix::identity(4, 4)
        );
        let o = random_orthosymplectic(3, dim(3));
        assert!(orthogonality_residual(&o) < 1e-12);
        assert!(is_symplectic(&o, 1e-12).unwrap());
    }
}
