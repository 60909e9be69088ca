//! Symplectic realizations: Poisson maps from canonical spaces onto the
//! three-dimensional bracket `π₁` and onto `e(3)`.

use nalgebra::DMatrix;

use crate::poisson::{BracketSource, Monomial, Polynomial};

/// `(q₁, q₂, p₁, p₂) ↦ (p₁, p₂, p₁q₂ − p₂q₁)`.
pub fn realization_r4_map(xi: &[f64]) -> [f64; 3] {
    let (q1, q2, p1, p2) = (xi[0], xi[1], xi[2], xi[3]);
    [p1, p2, p1 * q2 - p2 * q1]
}

pub fn realization_r4_jacobian(xi: &[f64]) -> DMatrix<f64> {
    let (q1, q2, p1, p2) = (xi[0], xi[1], xi[2], xi[3]);
    DMatrix::from_row_slice(3, 4, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -p2, p1, q2, -q1])
}

/// `H = ½(1+k²)p₁² + ½p₂² + ½(p₁q₂ − p₂q₁)²` on `(q₁, q₂, p₁, p₂)`.
pub fn realization_r4_hamiltonian(k: f64) -> Polynomial {
    let m = |c: f64, e: [u32; 4]| Monomial { coefficient: c, exponents: e.to_vec() };
    Polynomial::new(
        4,
        vec![
            m(0.5 * (1.0 + k * k), [0, 0, 2, 0]),
            m(0.5, [0, 0, 0, 2]),
            m(0.5, [0, 2, 2, 0]),
            m(-1.0, [1, 1, 1, 1]),
            m(0.5, [2, 0, 0, 2]),
        ],
    )
}

/// `Ĥ = ½(1+k²)x² + ½y² + ½z²`, so that `H = Ĥ ∘ Φ`.
pub fn realization_r4_reduced_hamiltonian(k: f64) -> crate::poisson::QuadraticForm {
    crate::poisson::QuadraticForm::diagonal(&[1.0 + k * k, 1.0, 1.0])
}

/// `x = p`, `y = (p₃q₂ − p₂q₃, p₁q₃ − p₃q₁, p₂q₁ − p₁q₂)` on
/// `(q₁, q₂, q₃, p₁, p₂, p₃)`.
pub fn clebsch_map(xi: &[f64]) -> [f64; 6] {
    let (q, p) = (&xi[..3], &xi[3..6]);
    [
        p[0],
        p[1],
        p[2],
        p[2] * q[1] - p[1] * q[2],
        p[0] * q[2] - p[2] * q[0],
        p[1] * q[0] - p[0] * q[1],
    ]
}

pub fn clebsch_map_jacobian(xi: &[f64]) -> DMatrix<f64> {
    let (q, p) = (&xi[..3], &xi[3..6]);
    let mut j = DMatrix::zeros(6, 6);
    for a in 0..3 {
        j[(a, 3 + a)] = 1.0;
    }
    // y1 = p3 q2 − p2 q3
    j[(3, 1)] = p[2];
    j[(3, 2)] = -p[1];
    j[(3, 4)] = -q[2];
    j[(3, 5)] = q[1];
    // y2 = p1 q3 − p3 q1
    j[(4, 0)] = -p[2];
    j[(4, 2)] = p[0];
    j[(4, 3)] = q[2];
    j[(4, 5)] = -q[0];
    // y3 = p2 q1 − p1 q2
    j[(5, 0)] = p[1];
    j[(5, 1)] = -p[0];
    j[(5, 3)] = -q[1];
    j[(5, 4)] = q[0];
    j
}

/// `max |D Φ · P_dom · D Φᵀ − P_target(Φ)|` over coordinate pairs, relative to
/// `max(1, max |P_target(Φ)|)`.
pub fn poisson_map_residual(
    domain: &dyn BracketSource,
    target: &dyn BracketSource,
    image: &[f64],
    jacobian: &DMatrix<f64>,
    xi: &[f64],
) -> f64 {
    let pushed = jacobian * domain.structure_matrix(xi) * jacobian.transpose();
    let expected = target.structure_matrix(image);
    (pushed - &expected).amax() / expected.amax().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::systems::pi1;
    use crate::poisson::{central_difference_gradient, CanonicalSymplectic, LiePoissonE3, ScalarFunction};
    use crate::sampling::generic_points;

    #[test]
    fn r4_map_values_and_pullback() {
        assert_eq!(realization_r4_map(&[0.0, 0.0, 1.0, 1.0]), [1.0, 1.0, 0.0]);
        let k = 0.5;
        let (h, hh) = (realization_r4_hamiltonian(k), realization_r4_reduced_hamiltonian(k));
        for xi in generic_points(4, 20, 9) {
            assert!((h.value(&xi) - hh.value(&realization_r4_map(&xi))).abs() < 1e-13);
        }
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let xi = [0.3, -1.2, 0.8, 1.5, -0.4, 0.9];
        let j = clebsch_map_jacobian(&xi);
        for r in 0..6 {
            let g = central_difference_gradient(|v| clebsch_map(v)[r], &xi);
            for c in 0..6 {
                assert!((j[(r, c)] - g[c]).abs() < 1e-9);
            }
        }
        let j = realization_r4_jacobian(&xi[..4]);
        for r in 0..3 {
            let g = central_difference_gradient(|v| realization_r4_map(v)[r], &xi[..4]);
            for c in 0..4 {
                assert!((j[(r, c)] - g[c]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn both_maps_are_poisson() {
        let c2 = CanonicalSymplectic { degrees_of_freedom: 2 };
        let c3 = CanonicalSymplectic { degrees_of_freedom: 3 };
        for xi in generic_points(6, 20, 10) {
            let r = poisson_map_residual(&c2, &pi1(), &realization_r4_map(&xi[..4]), &realization_r4_jacobian(&xi[..4]), &xi[..4]);
            assert!(r < 1e-14);
            let r = poisson_map_residual(&c3, &LiePoissonE3, &clebsch_map(&xi), &clebsch_map_jacobian(&xi), &xi);
            assert!(r < 1e-14);
        }
    }

    #[test]
    fn clebsch_map_at_zero_q() {
        assert_eq!(clebsch_map(&[0.0, 0.0, 0.0, 1.0, 2.0, 3.0]), [1.0, 2.0, 3.0, 0.0, 0.0, 0.0]);
    }
}
