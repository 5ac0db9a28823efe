//! Small dense helpers shared by the phase-space modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{dim_mismatch, Error, Result};

/// Dense real matrix in phase-space units.
pub type RealMatrix = DMatrix<f64>;
/// Dense real vector in phase-space units.
pub type RealVector = DVector<f64>;

/// Largest absolute entry.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

pub fn max_abs_diff(a: &RealMatrix, b: &RealMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn asymmetry(m: &RealMatrix) -> f64 {
    max_abs_diff(m, &m.transpose())
}

pub(crate) fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()) * 0.5
}

pub(crate) fn require_square(m: &RealMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(dim_mismatch(
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m.nrows())
}

/// Checks the matrix is square with even dimension and returns the mode count.
pub(crate) fn require_phase_space(m: &RealMatrix) -> Result<usize> {
    let dim = require_square(m)?;
    if dim == 0 || dim % 2 != 0 {
        return Err(dim_mismatch("even nonzero dimension 2n", dim));
    }
    Ok(dim / 2)
}

pub(crate) fn require_finite(m: &RealMatrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter("non-finite matrix entry".into()))
    }
}

/// Cholesky-backed inverse and determinant of a symmetric positive definite matrix.
pub(crate) fn spd_inverse_det(m: &RealMatrix) -> Result<(RealMatrix, f64)> {
    let chol = nalgebra::Cholesky::new(symmetrize(m)).ok_or(Error::NotPositiveDefinite)?;
    let det = chol.l_dirty().diagonal().iter().map(|x| x * x).product();
    Ok((chol.inverse(), det))
}

/// Block-diagonal `diag(values, values)`.
pub fn doubled_diagonal(values: &[f64]) -> RealMatrix {
    let n = values.len();
    RealMatrix::from_fn(
        2 * n,
        2 * n,
        |i, j| if i == j { values[i % n] } else { 0.0 },
    )
}

/// `[[a, b], [c, d]]` from four equally sized blocks.
pub(crate) fn from_blocks(
    a: &RealMatrix,
    b: &RealMatrix,
    c: &RealMatrix,
    d: &RealMatrix,
) -> RealMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = RealMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

/// Permutation-conjugation helper: `out[i][j] = m[perm[i]][perm[j]]`.
pub(crate) fn permute_sym(m: &RealMatrix, perm: &[usize]) -> RealMatrix {
    RealMatrix::from_fn(perm.len(), perm.len(), |i, j| m[(perm[i], perm[j])])
}
