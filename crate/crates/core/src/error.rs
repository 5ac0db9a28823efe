use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("negative eigenvalue {0:.3e} in positive semidefinite square root")]
    NegativeEigenvalue(f64),

    #[error("uncertainty relation violated: smallest symplectic eigenvalue {0} < 1")]
    HeisenbergViolation(f64),

    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),

    #[error("decomposition residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    IllConditioned { residual: f64, tol: f64 },

    #[error("orthogonal-symplectic constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("operation is defined for centered states only (nonzero mean)")]
    NonzeroMean,

    #[error("matrix is singular")]
    Singular,

    #[error("discarded block is singular (det {0:.3e})")]
    SingularBlock(f64),

    #[error("formula requires a pure state: both states are mixed")]
    RequiresPureState,

    #[error("state is not pure (residual {0:.3e})")]
    NotPure(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature supports at most {max} modes, got {got}")]
    TooManyModes { max: usize, got: usize },

    #[error("quadrature error estimate {estimate:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureNotConverged { estimate: f64, tol: f64 },

    #[error("oracle guard violated: {0}")]
    GuardViolation(String),

    #[error("unsupported circuit shape: {0}")]
    UnsupportedCircuit(String),

    #[error("oracle not converged: |value(N) - value(N+10)| = {0:.3e}")]
    NotConverged(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
