//! Built-in scenarios and the extra checks specific to each.

use crate::dynamics::{
    bihamiltonian_residual, clebsch_map, clebsch_map_jacobian, clebsch_system, fairlie_bracket, jacobi_system,
    pi1, pi2, poisson3, poisson_map_residual, realization_r4_hamiltonian, realization_r4_jacobian,
    realization_r4_map, realization_r4_reduced_hamiltonian, ClebschParameters, Controls, HamiltonianSystem,
};
use crate::plucker::{pairs, wedge, PluckerVector};
use crate::poisson::{
    jacobian_bracket, plucker_from_diagonal_quadrics, BracketSource, CanonicalSymplectic, Coordinate,
    LiePoissonE3, PluckerBracket, Psi, QuadraticForm, ScalarFunction,
};

use super::report::{casimir_residual, span_distance, verify_built, Check, VerificationReport, VerifyOptions};
use super::spec::{BracketKind, FunctionSpec, MonitorSpec, PiEntry, ScenarioSpec};
use super::ScenarioError;

pub const K: f64 = 0.5;
pub const SKLYANIN_J: [f64; 3] = [1.0, 2.0, 3.0];
pub const G: f64 = 1.0;
pub const K_TILDE: f64 = 0.8;
pub const CLEBSCH: ClebschParameters = ClebschParameters { lambda: [1.0, 2.0, 3.0], kappa: [1.0, 1.0, 1.0] };
pub const FAIRLIE_C: [f64; 4] = [1.0, 1.0, 1.0, 0.25];

pub const NAMES: [&str; 9] =
    ["jacobi3d", "ex3", "sklyanin", "n5", "n6", "fairlie", "double-elliptic", "clebsch", "realization-r4"];

/// Long-run controls for the desk-scale conservation runs.
fn controls() -> Controls {
    Controls::default()
}

fn sparse(pi: &PluckerVector) -> Vec<PiEntry> {
    pi.entries()
        .filter(|(_, v)| *v != 0.0)
        .map(|((i, j), value)| PiEntry { i: i + 1, j: j + 1, value })
        .collect()
}

fn plucker_spec(name: &str, pi: &PluckerVector, h: FunctionSpec, x0: Vec<f64>, t_end: f64) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        dimension: pi.dim(),
        bracket: BracketKind::Plucker,
        pi: sparse(pi),
        unchecked: false,
        hamiltonian: Some(h),
        initial: Some(x0),
        t_end: Some(t_end),
        controls: controls(),
        monitor: MonitorSpec::Auto,
        drift_bound: 1e-6,
    }
}

pub fn ex3_pi(k: f64) -> PluckerVector {
    PluckerVector::new(4, vec![-1.0, 2.0, 0.0, -2.0, -k * k, 2.0 * k * k]).expect("nonzero")
}

/// Signs fixed by the two Casimirs `x₁² + j₁x₂² + j₂x₃² + j₃x₄²` and
/// `x₂² + x₃² + x₄²`.
pub fn sklyanin_pi(j: [f64; 3]) -> PluckerVector {
    let [j1, j2, j3] = j;
    PluckerVector::new(4, vec![j2 - j3, j3 - j1, j1 - j2, 1.0, -1.0, 1.0]).expect("nonzero")
}

pub fn sklyanin_casimirs(j: [f64; 3]) -> [QuadraticForm; 2] {
    [QuadraticForm::diagonal(&[2.0, 2.0 * j[0], 2.0 * j[1], 2.0 * j[2]]), QuadraticForm::diagonal(&[0.0, 2.0, 2.0, 2.0])]
}

/// Both generators sum to zero, so `Σ x_i²` is a Casimir.
pub fn n5_pi() -> PluckerVector {
    wedge(&[1.0, 2.0, -1.0, 0.0, -2.0], &[0.0, 1.0, 1.0, -3.0, 1.0]).expect("independent")
}

pub fn n6_pi() -> PluckerVector {
    let ones = [(0, 1), (0, 2), (0, 3), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 4), (3, 4)];
    PluckerVector::from_entries(6, ones.iter().map(|&(i, j)| (i, j, 1.0)).chain([(4, 5, -1.0)])).expect("nonzero")
}

pub fn n6_casimirs() -> [QuadraticForm; 4] {
    [
        QuadraticForm::diagonal(&[1.0, -1.0, 1.0, 0.0, 0.0, 0.0]),
        QuadraticForm::diagonal(&[0.0, 0.0, -1.0, 1.0, 0.0, 0.0]),
        QuadraticForm::diagonal(&[0.0, 0.0, 0.0, -1.0, 0.0, 1.0]),
        QuadraticForm::diagonal(&[0.0, -1.0, 0.0, 0.0, -1.0, 1.0]),
    ]
}

/// `x₁² − x₂²`, `x₁² − x₃²`, `−g²x₁² + x₄² − x₅²`, `−g²x₁² + x₄² + k̃⁻²x₆²`.
pub fn double_elliptic_quadrics(g: f64, k_tilde: f64) -> [QuadraticForm; 4] {
    let g2 = g * g;
    let d = |c: [f64; 6]| QuadraticForm::diagonal(&c.map(|v| 2.0 * v));
    [
        d([1.0, -1.0, 0.0, 0.0, 0.0, 0.0]),
        d([1.0, 0.0, -1.0, 0.0, 0.0, 0.0]),
        d([-g2, 0.0, 0.0, 1.0, -1.0, 0.0]),
        d([-g2, 0.0, 0.0, 1.0, 0.0, 1.0 / (k_tilde * k_tilde)]),
    ]
}

pub fn double_elliptic_pi(g: f64, k_tilde: f64) -> PluckerVector {
    plucker_from_diagonal_quadrics(&double_elliptic_quadrics(g, k_tilde)).expect("independent quadrics")
}

/// A point on the level set `(1, k², 1, k̃⁻²)` of the four quadrics.
pub fn double_elliptic_initial(k: f64, g: f64, k_tilde: f64) -> Vec<f64> {
    let x1: f64 = 1.5;
    let x5: f64 = 0.5;
    let x4 = (1.0 + g * g * x1 * x1 + x5 * x5).sqrt();
    let kt2 = k_tilde * k_tilde;
    let x6 = (kt2 * (1.0 / kt2 + g * g * x1 * x1 - x4 * x4)).sqrt();
    vec![x1, (x1 * x1 - 1.0).sqrt(), (x1 * x1 - k * k).sqrt(), x4, x5, x6]
}

/// The built-in scenario of that name.
pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    let spec = match name {
        "jacobi3d" => ScenarioSpec {
            monitor: MonitorSpec::List(vec![
                FunctionSpec::Diagonal(vec![2.0, 2.0, 0.0]),
                FunctionSpec::Diagonal(vec![2.0 * K * K, 0.0, 2.0]),
            ]),
            ..plucker_spec(name, pi1().pi(), FunctionSpec::Diagonal(vec![K * K, 0.0, 1.0]), vec![0.0, 1.0, 1.0], 50.0)
        },
        "ex3" => plucker_spec(name, &ex3_pi(K), FunctionSpec::Diagonal(vec![1.0, 1.0, 1.0, 0.0]), vec![0.0, 1.0, 1.0, 1.0], 10.0),
        "sklyanin" => plucker_spec(
            name,
            &sklyanin_pi(SKLYANIN_J),
            FunctionSpec::Diagonal(vec![1.0; 4]),
            vec![0.5, 0.6, 0.7, 0.8],
            10.0,
        ),
        "n5" => plucker_spec(
            name,
            &n5_pi(),
            FunctionSpec::Diagonal(vec![1.0, 2.0, 3.0, 4.0, 5.0]),
            vec![0.5, 0.6, 0.7, 0.8, 0.9],
            10.0,
        ),
        "n6" => plucker_spec(
            name,
            &n6_pi(),
            FunctionSpec::Diagonal(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            vec![0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            5.0,
        ),
        "fairlie" => {
            let b = fairlie_bracket(FAIRLIE_C).expect("nonzero c");
            let c = FAIRLIE_C;
            ScenarioSpec {
                monitor: MonitorSpec::List(vec![
                    FunctionSpec::Diagonal(vec![1.0 / (8.0 * c[0]), 1.0 / (8.0 * c[1]), -1.0 / (8.0 * c[2]), -1.0 / (8.0 * c[3])]),
                    FunctionSpec::Diagonal(vec![2.0 * c[1], -2.0 * c[0], 0.0, 0.0]),
                    FunctionSpec::Diagonal(vec![0.0, 0.0, 2.0 * c[3], -2.0 * c[2]]),
                ]),
                ..plucker_spec(
                    name,
                    b.pi(),
                    FunctionSpec::Diagonal(vec![1.0 / (8.0 * c[0]), 1.0 / (8.0 * c[1]), -1.0 / (8.0 * c[2]), -1.0 / (8.0 * c[3])]),
                    vec![0.3, 0.4, 0.5, 0.6],
                    50.0,
                )
            }
        }
        "double-elliptic" => plucker_spec(
            name,
            &double_elliptic_pi(G, K_TILDE),
            FunctionSpec::Coordinate(5),
            double_elliptic_initial(K, G, K_TILDE),
            50.0,
        ),
        "clebsch" => ScenarioSpec {
            name: name.into(),
            dimension: 6,
            bracket: BracketKind::E3,
            pi: Vec::new(),
            unchecked: false,
            hamiltonian: Some(FunctionSpec::from_quadratic(&CLEBSCH.hamiltonian())),
            initial: Some(vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8]),
            t_end: Some(50.0),
            controls: controls(),
            monitor: MonitorSpec::Auto,
            drift_bound: 1e-6,
        },
        "realization-r4" => ScenarioSpec {
            name: name.into(),
            dimension: 4,
            bracket: BracketKind::Canonical,
            pi: Vec::new(),
            unchecked: false,
            hamiltonian: Some(FunctionSpec::Polynomial(realization_r4_hamiltonian(K).terms().to_vec())),
            initial: Some(vec![0.3, 0.4, 0.5, 0.6]),
            t_end: Some(10.0),
            controls: controls(),
            monitor: MonitorSpec::Auto,
            drift_bound: 1e-6,
        },
        _ => return None,
    };
    Some(spec)
}

pub fn builtin_catalog() -> Vec<ScenarioSpec> {
    NAMES.iter().map(|n| builtin(n).expect("catalog name")).collect()
}

fn max_over<T>(items: &[T], f: impl Fn(&T) -> f64) -> f64 {
    items.iter().map(f).fold(0.0, f64::max)
}

fn as_dyn(forms: &[QuadraticForm]) -> Vec<&dyn ScalarFunction> {
    forms.iter().map(|f| f as &dyn ScalarFunction).collect()
}

/// Checks that only make sense for the built-in of that name.
pub fn extra_checks(name: &str, opts: &VerifyOptions) -> Vec<Check> {
    let tol = |d| opts.tol_or(d);
    match name {
        "jacobi3d" => {
            let h2 = std::sync::Arc::new(QuadraticForm::diagonal(&[1.0, 1.0, 0.0]));
            let a = jacobi_system(K);
            let b = HamiltonianSystem::new(std::sync::Arc::new(pi2(K)), h2.clone());
            let c = HamiltonianSystem::new(std::sync::Arc::new(poisson3(K)), h2);
            let pts = opts.sample_points(3);
            vec![
                Check::new("bihamiltonian_pi2", bihamiltonian_residual(&a, &b, &pts).unwrap_or(f64::INFINITY), tol(1e-12)),
                Check::new("bihamiltonian_poisson3", bihamiltonian_residual(&a, &c, &pts).unwrap_or(f64::INFINITY), tol(1e-12)),
            ]
        }
        "ex3" => {
            let b = PluckerBracket::new(ex3_pi(K)).expect("ex3 is Poisson");
            let basis = b.kernel_basis();
            let d = [[K * K, 0.0, 0.0, 1.0], [2.0, 2.0, 1.0, 0.0]].iter().map(|v| span_distance(v, &basis)).fold(0.0, f64::max);
            vec![Check::new("kernel_contains_listed_vectors", d, tol(1e-10))]
        }
        "sklyanin" => {
            let b = PluckerBracket::new(sklyanin_pi(SKLYANIN_J)).expect("corrected signs are Poisson");
            let cas = sklyanin_casimirs(SKLYANIN_J);
            let pts = opts.sample_points(4);
            let r = max_over(&pts, |x| cas.iter().map(|f| casimir_residual(&b, f, x)).fold(0.0, f64::max));
            let from_casimirs = plucker_from_diagonal_quadrics(&cas).map(|p| p.normalized());
            let dev = match from_casimirs {
                Ok(p) => p.components().iter().zip(b.pi().normalized().components()).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max),
                Err(_) => f64::INFINITY,
            };
            vec![
                Check::new("listed_casimirs", r, tol(1e-10)),
                Check::new("bracket_from_listed_casimirs", dev, tol(1e-12)),
            ]
        }
        "n5" => {
            let b = PluckerBracket::new(n5_pi()).expect("wedge");
            let forms: Vec<QuadraticForm> =
                [[1, 2, 3], [2, 3, 4], [0, 1, 2]].iter().map(|&[i, j, k]| b.casimir_fijk(i, j, k).expect("triple")).collect();
            let pts = opts.sample_points(5);
            let r = max_over(&pts, |x| forms.iter().map(|f| casimir_residual(&b, f, x)).fold(0.0, f64::max));
            vec![
                Check::new("f234_f345_f123", r, tol(1e-10)),
                Check::new("kernel_dimension", (b.kernel_basis().len() as f64 - 3.0).abs(), 0.0),
            ]
        }
        "n6" => {
            let b = PluckerBracket::new(n6_pi()).expect("Poisson");
            let cas = n6_casimirs();
            let pts = opts.sample_points(6);
            let r = max_over(&pts, |x| cas.iter().map(|f| casimir_residual(&b, f, x)).fold(0.0, f64::max));
            let refs = as_dyn(&cas);
            let det = max_over(&pts, |x| {
                let p = b.structure_matrix(x);
                pairs(6)
                    .map(|(i, j)| {
                        let d = jacobian_bracket(&refs, Psi::Constant(1.0), &Coordinate { index: i, dim: 6 }, &Coordinate { index: j, dim: 6 }, x)
                            .unwrap_or(f64::INFINITY);
                        (d - p[(i, j)]).abs() / p.amax()
                    })
                    .fold(0.0, f64::max)
            });
            let minors = match plucker_from_diagonal_quadrics(&cas) {
                Ok(p) => p.components().iter().zip(b.pi().components()).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max),
                Err(_) => f64::INFINITY,
            };
            vec![
                Check::new("listed_casimirs", r, tol(1e-10)),
                Check::new("jacobian_reproduces_p", det, tol(1e-11)),
                Check::new("minors_reproduce_pi", minors, tol(1e-11)),
            ]
        }
        "fairlie" => {
            let b = fairlie_bracket(FAIRLIE_C).expect("nonzero");
            let c = FAIRLIE_C;
            let sys = crate::dynamics::fairlie_system(c).expect("nonzero");
            let pts = opts.sample_points(4);
            let r = max_over(&pts, |x| {
                let v = sys.vector_field(x).expect("dimension");
                let prod: f64 = x.iter().product();
                let scale = prod.abs() * c.iter().fold(0.0f64, |m, v| m.max(v.abs())) / x.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
                (0..4).map(|i| (v[i] - c[i] * prod / x[i]).abs()).fold(0.0, f64::max) / scale
            });
            vec![
                Check::new("fairlie_field", r, tol(1e-11)),
                Check::new("plucker_relation", b.pi().relative_residual(), tol(1e-15)),
            ]
        }
        "double-elliptic" => {
            let pi = double_elliptic_pi(G, K_TILDE);
            // displayed: {x1,x5} = −x2x3x4x6, {x2,x5}, {x3,x5} likewise, {x4,x5} = −g² x1x2x3x6
            let factor = pi.get(0, 4) / -1.0;
            let displayed = [(0, -1.0), (1, -1.0), (2, -1.0), (3, -G * G)];
            let dev = displayed.iter().map(|&(i, d)| (pi.get(i, 4) - factor * d).abs()).fold(0.0, f64::max) / factor.abs();
            vec![
                Check::new("common_factor", dev, tol(1e-12)).with_value(factor),
                Check::new("x5_x6_commute", pi.get(4, 5).abs() / pi.max_abs(), tol(1e-15)),
                Check::new("plucker_relations_of_quadric_bracket", pi.relative_residual(), tol(1e-12)),
            ]
        }
        "clebsch" => {
            let cond = CLEBSCH.condition_residual().map(f64::abs).unwrap_or(f64::INFINITY);
            let pts = opts.sample_points(6);
            let f3 = CLEBSCH.extra_integral();
            let h = CLEBSCH.hamiltonian();
            let r = match &f3 {
                Ok(f) => max_over(&pts, |x| super::report::commutator_residual(&LiePoissonE3, f, &h, x)),
                Err(_) => f64::INFINITY,
            };
            let sys = clebsch_system(CLEBSCH);
            let field = max_over(&pts, |z| {
                let v = sys.vector_field(z).expect("dimension");
                let hx: Vec<f64> = (0..3).map(|i| CLEBSCH.lambda[i] * z[i]).collect();
                let hy: Vec<f64> = (0..3).map(|i| CLEBSCH.kappa[i] * z[3 + i]).collect();
                let cr = |a: &[f64], b: &[f64]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                let (xd, a, b) = (cr(&hy, &z[..3]), cr(&hx, &z[..3]), cr(&hy, &z[3..]));
                let scale = v.iter().fold(1.0f64, |m, u| m.max(u.abs()));
                (0..3).map(|i| (v[i] - xd[i]).abs().max((v[3 + i] - a[i] - b[i]).abs())).fold(0.0, f64::max) / scale
            });
            vec![
                Check::new("clebsch_condition", cond, tol(1e-12)),
                Check::new("extra_integral", r, tol(1e-9)),
                Check::new("cross_product_field", field, tol(1e-11)),
            ]
        }
        "realization-r4" => {
            let can = CanonicalSymplectic { degrees_of_freedom: 2 };
            let pts = opts.sample_points(4);
            let map = max_over(&pts, |xi| {
                poisson_map_residual(&can, &pi1(), &realization_r4_map(xi), &realization_r4_jacobian(xi), xi)
            });
            let (h, hh) = (realization_r4_hamiltonian(K), realization_r4_reduced_hamiltonian(K));
            let pull = max_over(&pts, |xi| (h.value(xi) - hh.value(&realization_r4_map(xi))).abs() / h.value(xi).abs().max(1.0));
            let can3 = CanonicalSymplectic { degrees_of_freedom: 3 };
            let pts6 = opts.sample_points(6);
            let clebsch = max_over(&pts6, |xi| {
                poisson_map_residual(&can3, &LiePoissonE3, &clebsch_map(xi), &clebsch_map_jacobian(xi), xi)
            });
            vec![
                Check::new("poisson_map_r4", map, tol(1e-9)),
                Check::new("hamiltonian_pullback", pull, tol(1e-12)),
                Check::new("poisson_map_clebsch", clebsch, tol(1e-9)),
            ]
        }
        _ => Vec::new(),
    }
}

/// Verification of a built-in: the structural checks plus its extras.
pub fn verify_builtin(name: &str, opts: &VerifyOptions) -> Result<VerificationReport, ScenarioError> {
    let spec = builtin(name).ok_or_else(|| ScenarioError::UnknownScenario(name.into()))?;
    let mut checks = verify_built(&spec.build()?, opts)?;
    checks.extend(extra_checks(name, opts));
    Ok(VerificationReport::new(spec.name, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_round_trips_and_builds() {
        for spec in builtin_catalog() {
            let again = ScenarioSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(again, spec, "{}", spec.name);
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn double_elliptic_initial_lies_on_level_set() {
        let x = double_elliptic_initial(K, G, K_TILDE);
        let q = double_elliptic_quadrics(G, K_TILDE);
        let want = [1.0, K * K, 1.0, 1.0 / (K_TILDE * K_TILDE)];
        for (f, w) in q.iter().zip(want) {
            assert!((f.value(&x) - w).abs() < 1e-14);
        }
    }

    #[test]
    fn every_builtin_verifies() {
        let opts = VerifyOptions { points: 30, ..VerifyOptions::default() };
        for name in NAMES {
            let r = verify_builtin(name, &opts).unwrap();
            assert!(r.passed(), "{name}: {}", r.to_json());
        }
    }
}
