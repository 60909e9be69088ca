//! The bracket family `{x_i, x_j} = π_ij Π_{m≠i,j} x_m` and the structures
//! around it: Jacobi verification, rank, Casimirs, the Jacobian determinant
//! bracket and compatibility of pairs.

mod bracket;
mod compat;
mod function;
mod nambu;
mod source;

use thiserror::Error;

use crate::plucker::PluckerError;

pub use bracket::{PluckerBracket, TensorDecomposition};
pub use compat::{compatibility, compatibility_residuals, CompatibilityReport};
pub use function::{
    central_difference_gradient, fd_step, Coordinate, FnScalar, Monomial, Polynomial, QuadraticForm,
    ScalarFunction,
};
pub use nambu::{
    jacobian_bracket, plucker_from_diagonal_quadrics, plucker_to_jacobian, JacobianRepresentation, Psi,
};
pub use source::{
    bracket_of, jacobiator, max_jacobiator, rank_at, BracketSource, CanonicalSymplectic, ConstantSkew,
    LiePoissonE3,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PoissonError {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("jacobiator needs three distinct indices")]
    RepeatedIndex,
    #[error("indices {0:?} are not an increasing triple in range")]
    InvalidTriple([usize; 3]),
    #[error("point has dimension {found}, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error(transparent)]
    Plucker(#[from] PluckerError),
    #[error("not a Poisson bracket: relative Plücker residual {residual:e} exceeds {tol:e}")]
    NotPoisson { residual: f64, tol: f64 },
    #[error("expected {expected} Casimirs, found {found}")]
    WrongCasimirCount { expected: usize, found: usize },
    #[error("quadratic form is not diagonal")]
    NotDiagonal,
    #[error("coefficient vectors of the quadrics are linearly dependent")]
    DependentForms,
    #[error("Jacobian scale factor inconsistent across entries (relative deviation {deviation:e})")]
    InconsistentScale { deviation: f64 },
    #[error("bracket vanishes identically")]
    ZeroBracket,
}
