//! Hamiltonian vector fields, adaptive integration with invariant
//! monitoring, Jacobi elliptic functions and symplectic realizations.

mod elliptic;
mod integrator;
mod realization;
mod systems;
mod trajectory;

use thiserror::Error;

use crate::plucker::PluckerError;
use crate::poisson::PoissonError;

pub use elliptic::{
    elliptic_controls, elliptic_f, elliptic_oracle, jacobi_elliptic, jacobi_elliptic_many, quarter_period, SnCnDn,
};
pub use integrator::{hermite, integrate_field, Controls, IntegrationError, Method, RawSolution, StepStats};
pub use realization::{
    clebsch_map, clebsch_map_jacobian, poisson_map_residual, realization_r4_hamiltonian, realization_r4_jacobian,
    realization_r4_map, realization_r4_reduced_hamiltonian,
};
pub use systems::{
    bihamiltonian_residual, clebsch_system, e3_casimirs, fairlie_bracket, fairlie_system, jacobi_system, pi1, pi2,
    poisson3, ClebschParameters, HamiltonianSystem,
};
pub use trajectory::{Drift, Trajectory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("point has dimension {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameters must be nonzero")]
    ZeroParameter,
    #[error("extra integral undefined: the λ_i must be pairwise distinct")]
    DegenerateClebsch,
    #[error("modulus {0} outside [0, 1)")]
    InvalidModulus(f64),
    #[error("time {0} is not finite")]
    NonFiniteTime(f64),
    #[error("t = {t} outside the primary branch |t| < K = {quarter_period}")]
    OutsidePrimaryBranch { t: f64, quarter_period: f64 },
}

impl From<PluckerError> for DynamicsError {
    fn from(e: PluckerError) -> Self {
        DynamicsError::Poisson(e.into())
    }
}
