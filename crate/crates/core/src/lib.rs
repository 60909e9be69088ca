//! Rank-2 Poisson brackets parametrized by Plücker coordinates of lines in
//! projective space.
//!
//! The bracket family is
//!
//! ```text
//! {x_i, x_j} = π_ij · x_1 ⋯ x̂_i ⋯ x̂_j ⋯ x_n
//! ```
//!
//! and it is Poisson exactly when `π` satisfies the Plücker relations. The
//! crate is split into four layers:
//!
//! * [`plucker`]: Plücker vectors, relation residuals, decomposability, plane
//!   recovery and line intersection.
//! * [`poisson`]: bracket sources, Jacobi verification, rank, Casimirs and the
//!   Jacobian (Nambu) determinant bracket.
//! * [`dynamics`]: Hamiltonian vector fields, adaptive integration with
//!   invariant monitoring, Jacobi elliptic functions and symplectic
//!   realizations.
//! * [`scenarios`]: the JSON scenario format, the built-in catalog and the
//!   verification reports used by the `plucker-poisson` binary.
//!
//! Indices are 0-based in the Rust API and 1-based in every file format.

pub mod dynamics;
pub mod exec;
pub mod linalg;
pub mod plucker;
pub mod sampling;
pub mod poisson;
pub mod scenarios;

pub use exec::Execution;
pub use plucker::{PlaneBasis, PluckerError, PluckerVector};
pub use poisson::{BracketSource, PluckerBracket, QuadraticForm, ScalarFunction};
