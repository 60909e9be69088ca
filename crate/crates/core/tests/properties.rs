mod common;

use plucker_poisson::dynamics::{integrate_field, jacobi_elliptic, Controls};
use plucker_poisson::exec::Execution;
use plucker_poisson::plucker::{triples, wedge, PluckerVector};
use plucker_poisson::poisson::{bracket_of, jacobiator, Polynomial};
use plucker_poisson::scenarios::{verify_builtin, ScenarioSpec, VerifyOptions, NAMES};
use plucker_poisson::{PluckerBracket, QuadraticForm};
use proptest::prelude::*;

use common::{relation, structure};

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
}

fn plane(n: usize) -> impl Strategy<Value = PluckerVector> {
    (vector(n), vector(n))
        .prop_filter_map("dependent generators", |(a, b)| wedge(&a, &b).ok().filter(|p| p.max_abs() > 1e-2))
}

fn sized_plane() -> impl Strategy<Value = PluckerVector> {
    (3usize..=7).prop_flat_map(plane)
}

fn generic_point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0.5..2.0f64, any::<bool>()).prop_map(|(m, s)| if s { m } else { -m }), n)
}

fn symmetric(n: usize) -> impl Strategy<Value = QuadraticForm> {
    prop::collection::vec(-1.0..1.0f64, n * n)
        .prop_map(move |v| QuadraticForm::new(nalgebra::DMatrix::from_row_slice(n, n, &v)))
}

proptest! {
    #[test]
    fn wedge_satisfies_every_relation(p in sized_plane()) {
        let scale = p.max_abs().powi(2);
        for r in p.residuals() {
            prop_assert!(r.residual.abs() <= 1e-12 * scale);
            prop_assert!((r.residual - relation(&p, r.indices)).abs() <= 1e-15 * scale);
        }
    }

    #[test]
    fn decomposable_iff_rank_n_minus_two(
        (n, p, generic) in (4usize..=7).prop_flat_map(|n| (Just(n), plane(n), vector(n * (n - 1) / 2))),
        use_plane in any::<bool>(),
    ) {
        let v = if use_plane { p } else { PluckerVector::new(n, generic).unwrap() };
        // keep clear of the tolerance boundary
        prop_assume!(v.relative_residual() > 1e-6 || v.relative_residual() < 1e-12);
        prop_assert_eq!(v.is_decomposable(1e-9), v.representation_rank() == n - 2);
        if use_plane {
            prop_assert!(v.is_decomposable(1e-9));
        }
    }

    #[test]
    fn recovered_plane_wedges_back(p in sized_plane()) {
        let basis = p.recover_plane(1e-9).unwrap();
        let back = basis.wedge().unwrap();
        for (a, b) in back.components().iter().zip(p.components()) {
            prop_assert!((a - b).abs() <= 1e-12 * p.max_abs());
        }
    }

    #[test]
    fn scale_covariance(p in sized_plane(), c in prop_oneof![-5.0..-0.2f64, 0.2..5.0f64], x in generic_point(7)) {
        let n = p.dim();
        let q = p.scaled(c).unwrap();
        prop_assert!((q.relative_residual() - p.relative_residual()).abs() <= 1e-12);
        prop_assert_eq!(q.is_decomposable(1e-9), p.is_decomposable(1e-9));
        let x = &x[..n];
        let (a, b) = (PluckerBracket::new_unchecked(p.clone()), PluckerBracket::new_unchecked(q));
        let s = structure(&p, x).amax().powi(2);
        for [i, j, k] in triples(n) {
            let ja = jacobiator(&a, i, j, k, x).unwrap();
            let jb = jacobiator(&b, i, j, k, x).unwrap();
            prop_assert!((jb - c * c * ja).abs() <= 1e-12 * c * c * s);
        }
    }

    #[test]
    fn self_intersection_is_twice_the_relations(n in 4usize..=6, v in vector(15)) {
        let p = PluckerVector::new(n, v[..n * (n - 1) / 2].to_vec());
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let own = p.intersection_residuals(&p).unwrap();
        for (r, s) in own.iter().zip(p.residuals()) {
            prop_assert!((r.residual - 2.0 * s.residual).abs() <= 1e-14);
        }
    }

    #[test]
    fn bracket_is_antisymmetric_and_leibniz(
        p in plane(4),
        f in symmetric(4),
        g in symmetric(4),
        h in symmetric(4),
        x in generic_point(4),
    ) {
        let b = PluckerBracket::new(p).unwrap();
        let fg = bracket_of(&b, &f, &g, &x);
        prop_assert!((fg + bracket_of(&b, &g, &f, &x)).abs() <= 1e-12 * (1.0 + fg.abs()));

        let (fp, gp, hp) = (Polynomial::from_quadratic(&f), Polynomial::from_quadratic(&g), Polynomial::from_quadratic(&h));
        let gh = gp.mul(&hp);
        let lhs = bracket_of(&b, &fp, &gh, &x);
        use plucker_poisson::ScalarFunction;
        let rhs = bracket_of(&b, &fp, &gp, &x) * h.value(&x) + g.value(&x) * bracket_of(&b, &fp, &hp, &x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn elliptic_flow_is_time_symmetric(k in 0.0..0.95f64, t in 0.1..15.0f64) {
        let k2 = k * k;
        let fwd = move |x: &[f64], d: &mut [f64]| {
            d[0] = x[1] * x[2];
            d[1] = -x[0] * x[2];
            d[2] = -k2 * x[0] * x[1];
        };
        let bwd = move |x: &[f64], d: &mut [f64]| {
            fwd(x, d);
            d.iter_mut().for_each(|v| *v = -*v);
        };
        let c = Controls::default();
        let there = integrate_field(fwd, &[0.0, 1.0, 1.0], 0.0, t, &c).unwrap();
        let back = integrate_field(bwd, there.states.last().unwrap(), 0.0, t, &c).unwrap();
        let end = back.states.last().unwrap();
        prop_assert!(end[0].abs() <= 1e-7 && (end[1] - 1.0).abs() <= 1e-7 && (end[2] - 1.0).abs() <= 1e-7);
    }

    #[test]
    fn elliptic_parity(k in 0.0..0.95f64, t in 0.0..8.0f64) {
        let (a, b) = (jacobi_elliptic(t, k).unwrap(), jacobi_elliptic(-t, k).unwrap());
        prop_assert_eq!(a.sn, -b.sn);
        prop_assert_eq!((a.cn, a.dn), (b.cn, b.dn));
    }
}

#[test]
fn reports_are_deterministic_and_execution_independent() {
    for name in NAMES {
        let par = VerifyOptions { points: 20, seed: 11, ..VerifyOptions::default() };
        let seq = VerifyOptions { exec: Execution::Sequential, ..par };
        let (a, b, c) = (verify_builtin(name, &par).unwrap(), verify_builtin(name, &par).unwrap(), verify_builtin(name, &seq).unwrap());
        assert_eq!(a, b, "{name}");
        assert_eq!(a, c, "{name}");
    }
}

#[test]
fn builtin_specs_survive_a_json_round_trip() {
    for name in NAMES {
        let spec = plucker_poisson::scenarios::builtin(name).unwrap();
        let again = ScenarioSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, again, "{name}");
    }
}
