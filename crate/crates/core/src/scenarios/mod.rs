//! Scenario files, the built-in catalog and the reports behind the
//! `plucker-poisson` binary.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "name": "ex3",
//!   "dimension": 4,
//!   "bracket": "plucker",
//!   "pi": [{"i": 1, "j": 2, "value": -1}, {"i": 1, "j": 3, "value": 2}],
//!   "unchecked": false,
//!   "hamiltonian": {"diagonal": [1, 1, 1, 0]},
//!   "initial": [0, 1, 1, 1],
//!   "t_end": 10,
//!   "controls": {"rtol": 1e-9, "atol": 1e-12, "method": "dopri5"},
//!   "monitor": "auto",
//!   "drift_bound": 1e-6
//! }
//! ```
//!
//! `bracket` is `plucker` (default), `e3` or `canonical`. Indices are 1-based
//! and omitted pairs are zero. Functions are `{"diagonal": [...]}` or
//! `{"matrix": [[...]]}` (both `½ xᵀAx`), `{"coordinate": k}` or
//! `{"polynomial": [{"coefficient": c, "exponents": [...]}]}`. `monitor` is
//! `"auto"` (the Hamiltonian and the Casimirs) or a list of functions.

mod catalog;
mod report;
mod spec;

use thiserror::Error;

pub use catalog::{
    builtin, builtin_catalog, double_elliptic_initial, double_elliptic_pi, double_elliptic_quadrics, ex3_pi,
    extra_checks, n5_pi, n6_casimirs, n6_pi, sklyanin_casimirs, sklyanin_pi, verify_builtin, CLEBSCH, FAIRLIE_C, G,
    K, K_TILDE, NAMES, SKLYANIN_J,
};
pub use report::{
    casimir_residual, commutator_residual, compat_specs, generic_jacobi_residual, integrate_spec, verify_built,
    verify_spec, Check, CompatReport, IntegrationSummary, Status, VerificationReport, VerifyOptions,
};
pub use spec::{BracketKind, BuiltScenario, FunctionSpec, MonitorSpec, NamedFunction, PiEntry, ScenarioSpec};

use crate::dynamics::DynamicsError;
use crate::poisson::PoissonError;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unknown scenario `{0}` (not a file and not a built-in)")]
    UnknownScenario(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Where a scenario came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Resolved {
    File(ScenarioSpec),
    Builtin(ScenarioSpec),
}

impl Resolved {
    pub fn spec(&self) -> &ScenarioSpec {
        match self {
            Resolved::File(s) | Resolved::Builtin(s) => s,
        }
    }
}

/// An existing file path is read as a scenario; otherwise `arg` names a
/// built-in.
pub fn resolve(arg: &str) -> Result<Resolved, ScenarioError> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: arg.into(), source })?;
        return Ok(Resolved::File(ScenarioSpec::from_json(&text)?));
    }
    builtin(arg).map(Resolved::Builtin).ok_or_else(|| ScenarioError::UnknownScenario(arg.into()))
}

/// Verification report, with the built-in extras for catalog entries.
pub fn verify_resolved(r: &Resolved, opts: &VerifyOptions) -> Result<VerificationReport, ScenarioError> {
    match r {
        Resolved::File(spec) => verify_spec(spec, opts),
        Resolved::Builtin(spec) => verify_builtin(&spec.name, opts),
    }
}
