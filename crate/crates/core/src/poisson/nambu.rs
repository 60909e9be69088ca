use nalgebra::DMatrix;

use super::bracket::PluckerBracket;
use super::function::{Coordinate, QuadraticForm, ScalarFunction};
use super::PoissonError;
use crate::linalg;
use crate::plucker::{pairs, PluckerError, PluckerVector};
use crate::sampling;

/// Prefactor of the Jacobian bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psi {
    Constant(f64),
    /// `x_1 x_2 ⋯ x_n`
    CoordinateProduct,
}

impl Psi {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Psi::Constant(c) => *c,
            Psi::CoordinateProduct => x.iter().product(),
        }
    }
}

/// `Ψ(x) · det(∇f, ∇g, ∇f_1, …, ∇f_{n−2})`.
pub fn jacobian_bracket(
    casimirs: &[&dyn ScalarFunction],
    psi: Psi,
    f: &dyn ScalarFunction,
    g: &dyn ScalarFunction,
    x: &[f64],
) -> Result<f64, PoissonError> {
    let n = x.len();
    if n < 2 || casimirs.len() != n - 2 {
        return Err(PoissonError::WrongCasimirCount { expected: n.saturating_sub(2), found: casimirs.len() });
    }
    let mut m = DMatrix::zeros(n, n);
    let columns = [f, g].into_iter().chain(casimirs.iter().copied());
    for (c, func) in columns.enumerate() {
        let grad = func.gradient(x);
        if grad.len() != n {
            return Err(PoissonError::PointDimension { expected: n, found: grad.len() });
        }
        m.column_mut(c).copy_from_slice(&grad);
    }
    Ok(psi.value(x) * m.determinant())
}

/// Plücker coordinates of the Jacobian bracket generated by `n − 2` diagonal
/// quadrics with `Ψ = 1`.
///
/// With `C` the `(n−2) × n` coefficient matrix, `π_ij = (−1)^{i+j+1} det C_ij`
/// where `C_ij` drops columns `i` and `j` (1-based indices).
pub fn plucker_from_diagonal_quadrics(forms: &[QuadraticForm]) -> Result<PluckerVector, PoissonError> {
    let n = forms.len() + 2;
    if n < 3 {
        return Err(PluckerError::DimensionTooSmall(n).into());
    }
    let mut c = DMatrix::zeros(n - 2, n);
    for (r, form) in forms.iter().enumerate() {
        if form.dim() != n {
            return Err(PoissonError::WrongCasimirCount { expected: form.dim().saturating_sub(2), found: forms.len() });
        }
        let coeffs = form.diagonal_coefficients().ok_or(PoissonError::NotDiagonal)?;
        c.row_mut(r).copy_from_slice(&coeffs);
    }
    if linalg::numerical_rank(&c) < n - 2 {
        return Err(PoissonError::DependentForms);
    }
    let components = pairs(n)
        .map(|(i, j)| {
            let keep: Vec<usize> = (0..n).filter(|&m| m != i && m != j).collect();
            let minor = c.select_columns(&keep).determinant();
            // 0-based i + j has the same parity as the 1-based sum
            let sign = if (i + j) % 2 == 0 { -1.0 } else { 1.0 };
            sign * minor
        })
        .collect();
    Ok(PluckerVector::new(n, components)?)
}

/// A bracket written as `λ · det(∇·, ∇·, ∇f_1, …, ∇f_{n−2})` with `Ψ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianRepresentation {
    pub casimirs: Vec<QuadraticForm>,
    pub scale: f64,
}

impl JacobianRepresentation {
    pub fn bracket(&self, f: &dyn ScalarFunction, g: &dyn ScalarFunction, x: &[f64]) -> Result<f64, PoissonError> {
        let cas: Vec<&dyn ScalarFunction> = self.casimirs.iter().map(|c| c as &dyn ScalarFunction).collect();
        jacobian_bracket(&cas, Psi::Constant(self.scale), f, g, x)
    }
}

const JACOBIAN_POINTS: usize = 20;
const JACOBIAN_SEED: u64 = 0x6a61_636f_6269;
const JACOBIAN_TOL: f64 = 1e-9;

/// Expresses `b` through its kernel Casimirs: `P_ij(x) = λ · det(e_i, e_j, ∇f_1, …)`.
///
/// `λ` is fixed by the largest-`|π_ij|` entry at one sample point and then
/// checked on every entry at every sample point.
pub fn plucker_to_jacobian(b: &PluckerBracket) -> Result<JacobianRepresentation, PoissonError> {
    let n = b.pi().dim();
    let casimirs = b.kernel_casimirs();
    let cas: Vec<&dyn ScalarFunction> = casimirs.iter().map(|c| c as &dyn ScalarFunction).collect();
    let coord = |i| Coordinate { index: i, dim: n };
    let points = sampling::generic_points(n, JACOBIAN_POINTS, JACOBIAN_SEED);

    let (a, c) = b
        .pi()
        .entries()
        .fold(((0, 1), -1.0), |best, (ij, v)| if v.abs() > best.1 { (ij, v.abs()) } else { best })
        .0;
    let x0 = &points[0];
    let det = jacobian_bracket(&cas, Psi::Constant(1.0), &coord(a), &coord(c), x0)?;
    if det == 0.0 {
        return Err(PoissonError::ZeroBracket);
    }
    let scale = b.entry(a, c, x0) / det;

    let mut deviation: f64 = 0.0;
    for x in &points {
        let p = b.structure_matrix_at(x)?;
        let norm = p.amax();
        for (i, j) in pairs(n) {
            let d = jacobian_bracket(&cas, Psi::Constant(scale), &coord(i), &coord(j), x)?;
            deviation = deviation.max((d - p[(i, j)]).abs() / norm);
        }
    }
    if deviation > JACOBIAN_TOL {
        return Err(PoissonError::InconsistentScale { deviation });
    }
    Ok(JacobianRepresentation { casimirs, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::source::{bracket_of, BracketSource};

    fn quadric(c: &[f64]) -> QuadraticForm {
        QuadraticForm::diagonal(c)
    }

    #[test]
    fn n4_table_of_minors() {
        let (a, b) = ([0.3, -1.2, 0.7, 2.0], [1.1, 0.4, -0.9, 0.6]);
        let pi = plucker_from_diagonal_quadrics(&[quadric(&a), quadric(&b)]).unwrap();
        let expected = [
            a[2] * b[3] - a[3] * b[2],
            a[3] * b[1] - a[1] * b[3],
            a[1] * b[2] - a[2] * b[1],
            a[0] * b[3] - a[3] * b[0],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        for (got, want) in pi.components().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn n4_coordinate_bracket_from_determinant() {
        let (a, b) = ([0.3, -1.2, 0.7, 2.0], [1.1, 0.4, -0.9, 0.6]);
        let (f, g) = (quadric(&a), quadric(&b));
        let x = [0.8, 1.3, -0.5, 1.7];
        let c = |i| Coordinate { index: i, dim: 4 };
        let v = jacobian_bracket(&[&f, &g], Psi::Constant(1.0), &c(0), &c(1), &x).unwrap();
        assert!((v - (a[2] * b[3] - a[3] * b[2]) * x[2] * x[3]).abs() < 1e-14);
    }

    #[test]
    fn minors_agree_with_direct_determinant() {
        let forms = [
            quadric(&[1.0, -0.5, 2.0, 0.3, -1.1, 0.8]),
            quadric(&[0.2, 1.4, -0.7, 1.0, 0.5, -0.3]),
            quadric(&[-1.3, 0.6, 0.9, -0.2, 1.2, 0.4]),
            quadric(&[0.7, 0.1, -0.4, 1.5, -0.6, 1.1]),
        ];
        let pi = plucker_from_diagonal_quadrics(&forms).unwrap();
        let b = PluckerBracket::new(pi).unwrap();
        let cas: Vec<&dyn ScalarFunction> = forms.iter().map(|f| f as &dyn ScalarFunction).collect();
        for x in sampling::generic_points(6, 10, 3) {
            let p = b.structure_matrix(&x);
            for (i, j) in pairs(6) {
                let d = jacobian_bracket(
                    &cas,
                    Psi::Constant(1.0),
                    &Coordinate { index: i, dim: 6 },
                    &Coordinate { index: j, dim: 6 },
                    &x,
                )
                .unwrap();
                assert!((d - p[(i, j)]).abs() <= 1e-11 * p.amax());
            }
        }
    }

    #[test]
    fn n6_example_reproduced() {
        let forms = [
            quadric(&[1.0, -1.0, 1.0, 0.0, 0.0, 0.0]),
            quadric(&[0.0, 0.0, -1.0, 1.0, 0.0, 0.0]),
            quadric(&[0.0, 0.0, 0.0, -1.0, 0.0, 1.0]),
            quadric(&[0.0, -1.0, 0.0, 0.0, -1.0, 1.0]),
        ];
        let pi = plucker_from_diagonal_quadrics(&forms).unwrap();
        let expected = PluckerVector::from_entries(
            6,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (0, 5, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (1, 4, 1.0),
                (1, 5, 1.0),
                (2, 4, 1.0),
                (3, 4, 1.0),
                (4, 5, -1.0),
            ],
        )
        .unwrap();
        assert_eq!(pi, expected);
    }

    #[test]
    fn fairlie_integrals_generate_the_fairlie_bracket() {
        let c = [1.3, 0.7, -0.4, 2.1];
        // f1 = c2 x1² − c1 x2², f2 = c4 x3² − c3 x4², written with the ½ convention
        let f1 = quadric(&[2.0 * c[1], -2.0 * c[0], 0.0, 0.0]);
        let f2 = quadric(&[0.0, 0.0, 2.0 * c[3], -2.0 * c[2]]);
        let pi = plucker_from_diagonal_quadrics(&[f1, f2]).unwrap();
        let expected = [0.0, -4.0 * c[0] * c[2], -4.0 * c[0] * c[3], -4.0 * c[1] * c[2], -4.0 * c[1] * c[3], 0.0];
        for (got, want) in pi.components().iter().zip(expected) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn casimir_columns_annihilate() {
        let (f, g) = (quadric(&[0.3, -1.2, 0.7, 2.0]), quadric(&[1.1, 0.4, -0.9, 0.6]));
        let h = quadric(&[0.5, 0.5, -0.2, 1.0]);
        let x = [0.8, 1.3, -0.5, 1.7];
        assert_eq!(jacobian_bracket(&[&f, &g], Psi::CoordinateProduct, &f, &h, &x).unwrap(), 0.0);
        assert_eq!(jacobian_bracket(&[&f, &g], Psi::Constant(1.0), &h, &h, &x).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let f = quadric(&[1.0, 0.0, 0.0, 0.0]);
        let x = [1.0; 4];
        assert!(matches!(
            jacobian_bracket(&[&f], Psi::Constant(1.0), &f, &f, &x),
            Err(PoissonError::WrongCasimirCount { expected: 2, found: 1 })
        ));
        let dup = quadric(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(
            plucker_from_diagonal_quadrics(&[dup.clone(), dup.scaled(2.0)]),
            Err(PoissonError::DependentForms)
        );
        let off = QuadraticForm::new(DMatrix::from_element(4, 4, 1.0));
        assert_eq!(plucker_from_diagonal_quadrics(&[off, dup]), Err(PoissonError::NotDiagonal));
    }

    #[test]
    fn ex3_jacobian_representation() {
        let k: f64 = 0.5;
        let b = PluckerBracket::new(PluckerVector::new(4, vec![-1.0, 2.0, 0.0, -2.0, -k * k, 2.0 * k * k]).unwrap())
            .unwrap();
        let rep = plucker_to_jacobian(&b).unwrap();
        assert_eq!(rep.casimirs.len(), 2);
        let x = [0.4, -1.3, 0.9, 1.8];
        let c = |i| Coordinate { index: i, dim: 4 };
        let lhs = rep.bracket(&c(1), &c(3), &x).unwrap();
        let rhs = bracket_of(&b, &c(1), &c(3), &x);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn three_dimensional_jacobian_representation() {
        let b = PluckerBracket::new(PluckerVector::new(3, vec![0.4, -1.5, 0.9]).unwrap()).unwrap();
        let rep = plucker_to_jacobian(&b).unwrap();
        assert_eq!(rep.casimirs.len(), 1);
        let back = plucker_from_diagonal_quadrics(&rep.casimirs).unwrap().scaled(rep.scale).unwrap();
        for (a, c) in back.components().iter().zip(b.pi().components()) {
            assert!((a - c).abs() < 1e-12);
        }
    }
}
