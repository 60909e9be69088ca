use serde::Serialize;

use super::spec::{BracketKind, BuiltScenario, ScenarioSpec};
use super::ScenarioError;
use crate::dynamics::{Drift, DynamicsError};
use crate::exec::Execution;
use crate::linalg;
use crate::plucker::DEFAULT_TOL;
use crate::poisson::{
    self, bracket_of, max_jacobiator, plucker_from_diagonal_quadrics, plucker_to_jacobian, BracketSource, Coordinate,
    PluckerBracket, ScalarFunction,
};
use crate::sampling;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    /// `null` in JSON when the residual is not finite.
    pub residual: f64,
    pub tolerance: f64,
    /// A computed quantity the check reports besides its residual.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl Check {
    pub fn new(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self { check: check.into(), status, residual, tolerance, value: None }
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub verdict: Status,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().all(Check::passed) { Status::Pass } else { Status::Fail };
        Self { name: name.into(), checks, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sampling and tolerance settings shared by every report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Overrides every relative tolerance when set.
    pub tol: Option<f64>,
    pub points: usize,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: 0, tol: None, points: 100, exec: Execution::Parallel }
    }
}

impl VerifyOptions {
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn sample_points(&self, n: usize) -> Vec<Vec<f64>> {
        sampling::generic_points(n, self.points, self.seed)
    }
}

pub(crate) const JACOBI_TOL: f64 = 1e-10;
pub(crate) const CASIMIR_TOL: f64 = 1e-10;
pub(crate) const JACOBIAN_TOL: f64 = 1e-9;
pub(crate) const DECOMPOSITION_TOL: f64 = 1e-10;

fn l1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// `max_l |{f, x_l}|` relative to `‖∇f‖₁ · max|P|`.
pub fn casimir_residual(src: &dyn BracketSource, f: &dyn ScalarFunction, x: &[f64]) -> f64 {
    let n = x.len();
    let p = src.structure_matrix(x);
    let scale = l1(&f.gradient(x)) * p.amax();
    if scale == 0.0 {
        return 0.0;
    }
    (0..n)
        .map(|l| bracket_of(src, f, &Coordinate { index: l, dim: n }, x).abs())
        .fold(0.0, f64::max)
        / scale
}

/// `|{f, g}|` relative to `‖∇f‖₁ · max|P| · ‖∇g‖₁`.
pub fn commutator_residual(src: &dyn BracketSource, f: &dyn ScalarFunction, g: &dyn ScalarFunction, x: &[f64]) -> f64 {
    let scale = l1(&f.gradient(x)) * src.structure_matrix(x).amax() * l1(&g.gradient(x));
    if scale == 0.0 {
        return 0.0;
    }
    bracket_of(src, f, g, x).abs() / scale
}

/// Largest jacobiator over all triples relative to
/// `n · max|P| · max_l max|∂_l P|`.
pub fn generic_jacobi_residual(src: &dyn BracketSource, x: &[f64]) -> f64 {
    let n = src.dim();
    let dmax = (0..n).map(|l| src.structure_derivative(x, l).amax()).fold(0.0, f64::max);
    let scale = n as f64 * src.structure_matrix(x).amax() * dmax;
    let j = max_jacobiator(src, x);
    if j == 0.0 {
        0.0
    } else {
        j / scale
    }
}

fn plucker_checks(b: &PluckerBracket, opts: &VerifyOptions, points: &[Vec<f64>]) -> Vec<Check> {
    let n = b.pi().dim();
    let exec = opts.exec;
    let mut checks = Vec::new();
    let decomposable = b.pi().is_decomposable(opts.tol_or(DEFAULT_TOL));
    checks.push(Check::new("plucker_relations", b.pi().relative_residual(), opts.tol_or(DEFAULT_TOL)));
    let rank = b.pi().representation_rank();
    checks.push(Check::new("representation_rank", (rank as f64 - (n - 2) as f64).abs(), 0.0).with_value(rank as f64));

    let ones = vec![1.0; n];
    let j1 = max_jacobiator(b, &ones);
    checks.push(Check::new("jacobiator_at_ones", j1, opts.tol_or(JACOBI_TOL) * b.jacobi_scale(&ones)));
    let jac = exec.max_of(points, |x| max_jacobiator(b, x) / b.jacobi_scale(x));
    checks.push(Check::new("jacobi_identity", jac, opts.tol_or(JACOBI_TOL)));
    let bad_rank = exec.map(points, |x| poisson::rank_at(b, x) != 2).into_iter().filter(|&bad| bad).count();
    checks.push(Check::new("rank_two", bad_rank as f64, 0.0));

    if !decomposable {
        return checks;
    }
    let decomposition = b.decompose_tensor();
    let deco = match &decomposition {
        Ok(d) => exec.max_of(points, |x| {
            let p = b.structure_matrix(x);
            (d.reconstruct(x) - &p).amax() / p.amax()
        }),
        Err(_) => f64::INFINITY,
    };
    checks.push(Check::new("tensor_decomposition", deco, opts.tol_or(DECOMPOSITION_TOL)));

    let fijk: Vec<_> = crate::plucker::triples(n)
        .into_iter()
        .map(|[i, j, k]| b.casimir_fijk(i, j, k).expect("valid triple"))
        .filter(|f| !f.is_zero())
        .collect();
    let r = exec.max_of(points, |x| fijk.iter().map(|f| casimir_residual(b, f, x)).fold(0.0, f64::max));
    checks.push(Check::new("casimirs_fijk", r, opts.tol_or(CASIMIR_TOL)));
    let kernel = b.kernel_casimirs();
    let r = exec.max_of(points, |x| kernel.iter().map(|f| casimir_residual(b, f, x)).fold(0.0, f64::max));
    checks.push(Check::new("kernel_casimirs", r, opts.tol_or(CASIMIR_TOL)).with_value(kernel.len() as f64));

    let nambu = plucker_to_jacobian(b).and_then(|rep| {
        let back = plucker_from_diagonal_quadrics(&rep.casimirs)?;
        let scaled: Vec<f64> = back.components().iter().map(|v| v * rep.scale).collect();
        let dev = scaled
            .iter()
            .zip(b.pi().components())
            .map(|(a, c)| (a - c).abs())
            .fold(0.0, f64::max)
            / b.pi().max_abs();
        Ok(dev)
    });
    checks.push(Check::new("jacobian_equivalence", nambu.unwrap_or(f64::INFINITY), opts.tol_or(JACOBIAN_TOL)));
    checks
}

fn general_checks(src: &dyn BracketSource, kind: BracketKind, opts: &VerifyOptions, points: &[Vec<f64>]) -> Vec<Check> {
    let exec = opts.exec;
    let skew = exec.max_of(points, |x| {
        let p = src.structure_matrix(x);
        (&p + p.transpose()).amax() / p.amax().max(f64::MIN_POSITIVE)
    });
    let mut checks = vec![Check::new("skew_symmetry", skew, 0.0)];
    let jac = exec.max_of(points, |x| generic_jacobi_residual(src, x));
    checks.push(Check::new("jacobi_identity", jac, opts.tol_or(JACOBI_TOL)));
    let expected_rank = if kind == BracketKind::E3 { 4 } else { src.dim() };
    let bad_rank = exec
        .map(points, |x| poisson::rank_at(src, x) != expected_rank)
        .into_iter()
        .filter(|&bad| bad)
        .count();
    checks.push(Check::new("rank", bad_rank as f64, 0.0).with_value(expected_rank as f64));
    if kind == BracketKind::E3 {
        let cas = crate::dynamics::e3_casimirs();
        let r = exec.max_of(points, |x| cas.iter().map(|f| casimir_residual(src, f, x)).fold(0.0, f64::max));
        checks.push(Check::new("casimirs_e3", r, opts.tol_or(CASIMIR_TOL)));
    }
    checks
}

/// Structural checks of the bracket and, when a Hamiltonian is given, the
/// commutation of every monitored function with it.
pub fn verify_built(built: &BuiltScenario, opts: &VerifyOptions) -> Result<Vec<Check>, ScenarioError> {
    let n = built.spec.dimension;
    let points = opts.sample_points(n);
    let mut checks = match &built.bracket {
        Some(b) => plucker_checks(b, opts, &points),
        None => general_checks(built.source.as_ref(), built.spec.bracket, opts, &points),
    };
    let poisson_ok = built.bracket.as_ref().is_none_or(|b| b.pi().is_decomposable(opts.tol_or(DEFAULT_TOL)));
    if let (Some(h), true) = (&built.hamiltonian, poisson_ok) {
        let monitors = built.monitors()?;
        let src = built.source.as_ref();
        let r = opts.exec.max_of(&points, |x| {
            monitors.iter().map(|(_, m)| commutator_residual(src, m.as_ref(), h.as_ref(), x)).fold(0.0, f64::max)
        });
        checks.push(Check::new("monitors_commute_with_h", r, opts.tol_or(CASIMIR_TOL)));
    }
    Ok(checks)
}

pub fn verify_spec(spec: &ScenarioSpec, opts: &VerifyOptions) -> Result<VerificationReport, ScenarioError> {
    let built = spec.build()?;
    Ok(VerificationReport::new(spec.name.clone(), verify_built(&built, opts)?))
}

/// Compatibility of two Plücker scenarios. The verdict is `compatible` or
/// `incompatible`, following the intersection test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompatReport {
    pub name: String,
    pub checks: Vec<Check>,
    pub verdict: String,
}

impl CompatReport {
    pub fn compatible(&self) -> bool {
        self.verdict == "compatible"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn compat_specs(a: &ScenarioSpec, b: &ScenarioSpec, opts: &VerifyOptions) -> Result<CompatReport, ScenarioError> {
    let plucker = |s: &ScenarioSpec| -> Result<PluckerBracket, ScenarioError> {
        s.build()?.bracket.ok_or_else(|| ScenarioError::Field {
            field: format!("{}.bracket", s.name),
            message: "compatibility needs two Plücker brackets".into(),
        })
    };
    let (pa, pb) = (plucker(a)?, plucker(b)?);
    if pa.pi().dim() != pb.pi().dim() {
        return Err(ScenarioError::Field {
            field: "dimension".into(),
            message: format!("{} vs {}", pa.pi().dim(), pb.pi().dim()),
        });
    }
    let tol = opts.tol_or(DEFAULT_TOL);
    let r = poisson::compatibility(&pa, &pb, &opts.sample_points(pa.pi().dim()), tol, opts.exec)?;
    let checks = vec![
        Check::new("line_intersection", r.intersection_residual, tol),
        Check::new("sum_bracket_jacobi", r.sum_jacobiator, tol),
        Check::new("routes_agree", if r.consistent() { 0.0 } else { 1.0 }, 0.0),
    ];
    let verdict = if r.compatible() { "compatible" } else { "incompatible" };
    Ok(CompatReport { name: format!("{} vs {}", a.name, b.name), checks, verdict: verdict.into() })
}

/// Outcome of `integrate`: drift per monitored invariant against the bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrationSummary {
    pub name: String,
    pub t_end: f64,
    pub final_time: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub drift_bound: f64,
    pub drift: Vec<Drift>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub verdict: Status,
}

impl IntegrationSummary {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Integrates the scenario. A failed run (blow-up, non-finite state) yields a
/// failing summary with the error message and no trajectory.
pub fn integrate_spec(
    spec: &ScenarioSpec,
    drift_bound: Option<f64>,
) -> Result<(IntegrationSummary, Option<crate::dynamics::Trajectory>), ScenarioError> {
    let built = spec.build()?;
    let sys = built.system()?;
    let x0 = spec.initial.clone().ok_or_else(|| ScenarioError::Field {
        field: "initial".into(),
        message: "required to integrate".into(),
    })?;
    let t_end = spec.t_end.ok_or_else(|| ScenarioError::Field {
        field: "t_end".into(),
        message: "required to integrate".into(),
    })?;
    let bound = drift_bound.unwrap_or(spec.drift_bound);
    match sys.integrate(&x0, t_end, &spec.controls) {
        Ok(tr) => {
            let drift = tr.invariant_drift();
            let ok = drift.iter().all(|d| d.relative <= bound);
            let summary = IntegrationSummary {
                name: spec.name.clone(),
                t_end,
                final_time: tr.final_time(),
                accepted_steps: tr.stats.accepted,
                rejected_steps: tr.stats.rejected,
                drift_bound: bound,
                drift,
                error: None,
                verdict: if ok { Status::Pass } else { Status::Fail },
            };
            Ok((summary, Some(tr)))
        }
        Err(DynamicsError::Integration(e)) => Ok((
            IntegrationSummary {
                name: spec.name.clone(),
                t_end,
                final_time: e.time().unwrap_or(0.0),
                accepted_steps: 0,
                rejected_steps: 0,
                drift_bound: bound,
                drift: Vec::new(),
                error: Some(e.to_string()),
                verdict: Status::Fail,
            },
            None,
        )),
        Err(e) => Err(e.into()),
    }
}

/// Relative distance of `v` from the span of `basis` after orthonormalizing.
pub fn span_distance(v: &[f64], basis: &[nalgebra::DVector<f64>]) -> f64 {
    linalg::span_distance(&nalgebra::DVector::from_column_slice(v), &linalg::orthonormalize(basis))
}
