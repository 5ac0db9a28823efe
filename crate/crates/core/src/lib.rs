//! Quasifree (Gaussian) bosonic states on a finite-dimensional phase space.
//!
//! States are described by a covariance `A` and mean `v` through the
//! characteristic function `exp(−uᵀAu/4 + i uᵀv)`, with coordinates ordered
//! `(ξ₁, …, ξₙ, η₁, …, ηₙ)` and symplectic form `J = [[0, I], [−I, 0]]`.
//! The vacuum is `A = I`.

pub mod error;
pub mod fock;
pub mod halfplane;
pub mod linalg;
pub mod purification;
pub mod state;
pub mod symplectic;
pub mod transition;

pub use error::{Error, Result};
pub use fock::{AgreementRow, TruncatedOperator};
pub use halfplane::{HalfPlanePoint, MobiusElement};
pub use linalg::{RealMatrix, RealVector};
pub use purification::{DoubledState, Factor, PurificationBogoliubov};
pub use state::{make_state, ModeDecomposition, QuasifreeState, WignerGaussian};
pub use symplectic::{
    BdiFactors, OrthoSymplecticXY, PhaseSpaceDim, SymplecticForm, WilliamsonFactors, DEFAULT_TOL,
};
pub use transition::{QuadratureResult, QuadratureSpec};
