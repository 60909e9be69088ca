use nalgebra::{DMatrix, DVector};

use super::function::QuadraticForm;
use super::source::BracketSource;
use super::PoissonError;
use crate::linalg;
use crate::plucker::{PlaneBasis, PluckerVector, DEFAULT_TOL};

/// `Π_{m ∉ skip} x_m`.
pub(crate) fn product_except(x: &[f64], skip: &[usize]) -> f64 {
    x.iter()
        .enumerate()
        .filter(|(m, _)| !skip.contains(m))
        .map(|(_, v)| v)
        .product()
}

/// The quadratic bracket `{x_i, x_j} = π_ij · Π_{m≠i,j} x_m`.
///
/// Checked construction requires `π` to satisfy the Plücker relations (the
/// bracket is Poisson exactly then). [`PluckerBracket::new_unchecked`] skips
/// the check so that non-Poisson examples can be expressed.
#[derive(Clone, Debug, PartialEq)]
pub struct PluckerBracket {
    pi: PluckerVector,
    checked: bool,
}

impl PluckerBracket {
    pub fn new(pi: PluckerVector) -> Result<Self, PoissonError> {
        Self::with_tolerance(pi, DEFAULT_TOL)
    }

    pub fn with_tolerance(pi: PluckerVector, tol: f64) -> Result<Self, PoissonError> {
        let residual = pi.relative_residual();
        if residual > tol {
            return Err(PoissonError::NotPoisson { residual, tol });
        }
        Ok(Self { pi, checked: true })
    }

    pub fn new_unchecked(pi: PluckerVector) -> Self {
        Self { pi, checked: false }
    }

    pub fn pi(&self) -> &PluckerVector {
        &self.pi
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    /// Entry `(i, j)` of `P(x)`.
    pub fn entry(&self, i: usize, j: usize, x: &[f64]) -> f64 {
        if i == j {
            return 0.0;
        }
        self.pi.get(i, j) * product_except(x, &[i, j])
    }

    /// `P(x)`, with entry `(i, j) = π_ij Π_{m≠i,j} x_m`.
    pub fn structure_matrix_at(&self, x: &[f64]) -> Result<DMatrix<f64>, PoissonError> {
        self.check_point(x)?;
        Ok(self.structure_matrix(x))
    }

    fn check_point(&self, x: &[f64]) -> Result<(), PoissonError> {
        if x.len() != self.pi.dim() {
            return Err(PoissonError::PointDimension { expected: self.pi.dim(), found: x.len() });
        }
        Ok(())
    }

    /// `∂P_ab/∂x_l`.
    fn entry_derivative(&self, a: usize, b: usize, l: usize, x: &[f64]) -> f64 {
        if a == b || l == a || l == b {
            return 0.0;
        }
        self.pi.get(a, b) * product_except(x, &[a, b, l])
    }

    /// Natural size of a jacobiator at `x`: `‖π‖² · ‖x‖^{2n−4}`.
    pub fn jacobi_scale(&self, x: &[f64]) -> f64 {
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.pi.norm().powi(2) * xn.powi(2 * self.pi.dim() as i32 - 4)
    }

    /// Writes `P(x) = Ψ(x) · X ∧ Y` with `X_i = α_i / x_i`, `Y_j = β_j / x_j`
    /// and `Ψ = x_1 ⋯ x_n`, where `α ∧ β = π`.
    pub fn decompose_tensor(&self) -> Result<TensorDecomposition, PoissonError> {
        let basis = self.pi.recover_plane(DEFAULT_TOL)?;
        Ok(TensorDecomposition { basis })
    }

    /// `f_ijk = π_jk x_i² − π_ik x_j² + π_ij x_k²` as the diagonal form with
    /// those coefficients (so its value carries the usual ½).
    pub fn casimir_fijk(&self, i: usize, j: usize, k: usize) -> Result<QuadraticForm, PoissonError> {
        let n = self.pi.dim();
        if !(i < j && j < k && k < n) {
            return Err(PoissonError::InvalidTriple([i, j, k]));
        }
        let mut c = vec![0.0; n];
        c[i] = self.pi.get(j, k);
        c[j] = -self.pi.get(i, k);
        c[k] = self.pi.get(i, j);
        Ok(QuadraticForm::diagonal(&c))
    }

    /// Orthonormal basis of `ker(π_ij)`, which has dimension `n − 2`.
    pub fn kernel_basis(&self) -> Vec<DVector<f64>> {
        let n = self.pi.dim();
        linalg::smallest_right_singular_vectors(&self.pi.skew_matrix(), n - 2)
    }

    /// `½ Σ α_k x_k²` for each kernel basis vector `α`.
    pub fn kernel_casimirs(&self) -> Vec<QuadraticForm> {
        self.kernel_basis()
            .iter()
            .map(|a| QuadraticForm::diagonal(a.as_slice()))
            .collect()
    }
}

impl BracketSource for PluckerBracket {
    fn dim(&self) -> usize {
        self.pi.dim()
    }

    fn structure_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.pi.dim();
        let mut p = DMatrix::zeros(n, n);
        for ((i, j), v) in self.pi.entries() {
            let e = v * product_except(x, &[i, j]);
            p[(i, j)] = e;
            p[(j, i)] = -e;
        }
        p
    }

    fn structure_derivative(&self, x: &[f64], l: usize) -> DMatrix<f64> {
        let n = self.pi.dim();
        DMatrix::from_fn(n, n, |a, b| self.entry_derivative(a, b, l, x))
    }

    fn jacobiator_unchecked(&self, i: usize, j: usize, k: usize, x: &[f64]) -> f64 {
        (0..self.pi.dim())
            .map(|l| {
                self.entry_derivative(j, k, l, x) * self.entry(i, l, x)
                    + self.entry_derivative(k, i, l, x) * self.entry(j, l, x)
                    + self.entry_derivative(i, j, l, x) * self.entry(k, l, x)
            })
            .sum()
    }

    fn jacobiators(&self, x: &[f64]) -> Vec<([usize; 3], f64)> {
        crate::plucker::triples(self.pi.dim())
            .into_iter()
            .map(|[i, j, k]| ([i, j, k], self.jacobiator_unchecked(i, j, k, x)))
            .collect()
    }
}

/// `P = Ψ · X ∧ Y` for a decomposable bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorDecomposition {
    pub basis: PlaneBasis,
}

impl TensorDecomposition {
    pub fn psi(&self, x: &[f64]) -> f64 {
        x.iter().product()
    }

    /// Components `α_i / x_i`.
    pub fn x_field(&self, x: &[f64]) -> Vec<f64> {
        self.basis.alpha.iter().zip(x).map(|(a, xi)| a / xi).collect()
    }

    /// Components `β_j / x_j`.
    pub fn y_field(&self, x: &[f64]) -> Vec<f64> {
        self.basis.beta.iter().zip(x).map(|(b, xi)| b / xi).collect()
    }

    /// `Ψ(x) (X_i Y_j − X_j Y_i)`; requires every `x_m ≠ 0`.
    pub fn reconstruct(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let (xf, yf, psi) = (self.x_field(x), self.y_field(x), self.psi(x));
        DMatrix::from_fn(n, n, |i, j| psi * (xf[i] * yf[j] - xf[j] * yf[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::function::{Coordinate, ScalarFunction};
    use crate::poisson::source::{bracket_of, jacobiator, max_jacobiator, rank_at};

    fn ex3(k: f64) -> PluckerBracket {
        PluckerBracket::new(PluckerVector::new(4, vec![-1.0, 2.0, 0.0, -2.0, -k * k, 2.0 * k * k]).unwrap())
            .unwrap()
    }

    #[test]
    fn ex3_structure_matrix_at_ones() {
        let k = 0.5;
        let p = ex3(k).structure_matrix_at(&[1.0; 4]).unwrap();
        let expected = [(0, 1, -1.0), (0, 2, 2.0), (0, 3, 0.0), (1, 2, -2.0), (1, 3, -k * k), (2, 3, 2.0 * k * k)];
        for (i, j, v) in expected {
            assert_eq!(p[(i, j)], v);
            assert_eq!(p[(j, i)], -v);
        }
    }

    #[test]
    fn structure_matrix_dimension_error() {
        assert!(matches!(
            ex3(0.5).structure_matrix_at(&[1.0; 3]),
            Err(PoissonError::PointDimension { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn two_zero_coordinates_leave_one_entry() {
        let b = PluckerBracket::new(crate::plucker::wedge(&[1.0, 2.0, -1.0, 0.5, 3.0], &[0.3, -1.0, 2.0, 1.0, 1.0]).unwrap())
            .unwrap();
        let x = [1.5, 0.0, -0.7, 0.0, 2.0];
        let p = b.structure_matrix(&x);
        for i in 0..5 {
            for j in 0..5 {
                if (i, j) != (1, 3) && (i, j) != (3, 1) {
                    assert_eq!(p[(i, j)], 0.0, "entry ({i},{j})");
                }
            }
        }
        assert_ne!(p[(1, 3)], 0.0);
    }

    #[test]
    fn three_dimensional_bracket() {
        let (a, b, c) = (0.7, -1.3, 2.1);
        let br = PluckerBracket::new(PluckerVector::new(3, vec![a, b, c]).unwrap()).unwrap();
        let (x, y, z) = (0.4, 1.5, -0.8);
        let p = br.structure_matrix(&[x, y, z]);
        assert_eq!(p[(0, 1)], a * z);
        assert_eq!(p[(0, 2)], b * y);
        assert_eq!(p[(1, 2)], c * x);
        assert_eq!(jacobiator(&br, 0, 1, 2, &[x, y, z]).unwrap(), 0.0);
    }

    #[test]
    fn jacobiator_of_two_coordinate_planes() {
        let b = PluckerBracket::new_unchecked(
            PluckerVector::from_entries(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap(),
        );
        let j = jacobiator(&b, 0, 1, 2, &[1.0; 4]).unwrap();
        assert_eq!(j.abs(), 1.0);
        assert!(PluckerBracket::new(b.pi().clone()).is_err());
    }

    #[test]
    fn analytic_jacobiator_matches_generic_matrix_route() {
        let b = PluckerBracket::new_unchecked(PluckerVector::new(4, vec![1.0, -0.5, 2.0, 0.3, 1.1, -0.7]).unwrap());
        let x = [0.6, -1.4, 1.9, 0.8];
        let p = b.structure_matrix(&x);
        let d: Vec<DMatrix<f64>> = (0..4).map(|l| b.structure_derivative(&x, l)).collect();
        let (i, j, k) = (0, 2, 3);
        let generic: f64 =
            (0..4).map(|l| d[l][(j, k)] * p[(i, l)] + d[l][(k, i)] * p[(j, l)] + d[l][(i, j)] * p[(k, l)]).sum();
        assert!((b.jacobiator_unchecked(i, j, k, &x) - generic).abs() < 1e-13);
        assert!(b.jacobiator_unchecked(i, j, k, &x).abs() > 1e-3);
    }

    #[test]
    fn rank_is_two_generically_and_zero_at_origin() {
        let b = ex3(0.5);
        assert_eq!(rank_at(&b, &[0.7, -1.2, 1.6, 0.9]), 2);
        assert_eq!(rank_at(&b, &[0.0; 4]), 0);
    }

    #[test]
    fn decomposition_for_coordinate_plane_in_three_dimensions() {
        let b = PluckerBracket::new(PluckerVector::new(3, vec![1.0, 0.0, 0.0]).unwrap()).unwrap();
        let d = b.decompose_tensor().unwrap();
        let x = [1.3, -0.6, 2.2];
        let r = d.reconstruct(&x);
        assert!((r[(0, 1)] - x[2]).abs() < 1e-15);
        assert_eq!(r[(0, 2)], 0.0);
    }

    #[test]
    fn decomposition_reproduces_ex3() {
        let b = ex3(0.5);
        let d = b.decompose_tensor().unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        let r = d.reconstruct(&x);
        let p = b.structure_matrix(&x);
        for i in 0..4 {
            for j in 0..4 {
                assert!((r[(i, j)] - p[(i, j)]).abs() < 1e-12 * p.amax());
            }
        }
    }

    #[test]
    fn n5_fijk_matches_display() {
        let pi = crate::plucker::wedge(&[1.0, 2.0, -1.0, 0.5, 3.0], &[0.3, -1.0, 2.0, 1.0, 1.0]).unwrap();
        let b = PluckerBracket::new(pi.clone()).unwrap();
        let f234 = b.casimir_fijk(1, 2, 3).unwrap();
        assert_eq!(
            f234.diagonal_coefficients().unwrap(),
            vec![0.0, pi.get(2, 3), -pi.get(1, 3), pi.get(1, 2), 0.0]
        );
        let x = [0.9, -1.7, 0.6, 1.2, -0.8];
        for f in [b.casimir_fijk(1, 2, 3).unwrap(), b.casimir_fijk(2, 3, 4).unwrap(), b.casimir_fijk(0, 1, 2).unwrap()] {
            for l in 0..5 {
                let c = Coordinate { index: l, dim: 5 };
                assert!(bracket_of(&b, &f, &c, &x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prop_fg_converse_casimirs() {
        let b = ex3(0.5);
        let pi = b.pi();
        let f = b.casimir_fijk(1, 2, 3).unwrap();
        let g = b.casimir_fijk(0, 1, 2).unwrap();
        assert_eq!(f.diagonal_coefficients().unwrap(), vec![0.0, pi.get(2, 3), -pi.get(1, 3), pi.get(1, 2)]);
        assert_eq!(g.diagonal_coefficients().unwrap(), vec![pi.get(1, 2), -pi.get(0, 2), pi.get(0, 1), 0.0]);
    }

    #[test]
    fn fijk_errors_and_trivial_case() {
        let b = ex3(0.5);
        assert!(matches!(b.casimir_fijk(2, 1, 3), Err(PoissonError::InvalidTriple(_))));
        assert!(matches!(b.casimir_fijk(0, 1, 4), Err(PoissonError::InvalidTriple(_))));
        // π_23 = π_24 = π_34 = 0 in 0-based (1,2),(1,3),(2,3)
        let z = PluckerBracket::new(PluckerVector::from_entries(4, [(0, 1, 1.0)]).unwrap()).unwrap();
        assert!(z.casimir_fijk(1, 2, 3).unwrap().is_zero());
    }

    #[test]
    fn ex3_kernel_contains_listed_vectors() {
        let k = 0.5;
        let basis = ex3(k).kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in [[k * k, 0.0, 0.0, 1.0], [2.0, 2.0, 1.0, 0.0]] {
            let v = DVector::from_row_slice(&v);
            assert!(linalg::span_distance(&v, &basis) < 1e-12);
        }
        let x = [0.8, -1.1, 1.7, 0.6];
        for f in ex3(k).kernel_casimirs() {
            for l in 0..4 {
                let c = Coordinate { index: l, dim: 4 };
                assert!(bracket_of(&ex3(k), &f, &c, &x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_dimension_three_for_n5_and_one_for_n3() {
        let pi = crate::plucker::wedge(&[1.0, 2.0, -1.0, 0.5, 3.0], &[0.3, -1.0, 2.0, 1.0, 1.0]).unwrap();
        assert_eq!(PluckerBracket::new(pi).unwrap().kernel_basis().len(), 3);
        // π = (α, β, γ) = (π12, π13, π23); kernel solves the 3×3 skew system: (γ, −β, α)
        let (a, b, c) = (1.0, 2.0, 3.0);
        let br = PluckerBracket::new(PluckerVector::new(3, vec![a, b, c]).unwrap()).unwrap();
        let ker = br.kernel_basis();
        assert_eq!(ker.len(), 1);
        let expected = DVector::from_row_slice(&[c, -b, a]);
        assert!(linalg::span_distance(&expected, &ker) < 1e-14);
    }

    #[test]
    fn jacobi_holds_for_decomposable() {
        let pi = crate::plucker::wedge(&[1.0, 2.0, -1.0, 0.5, 3.0, -0.2], &[0.3, -1.0, 2.0, 1.0, 1.0, 0.7]).unwrap();
        let b = PluckerBracket::new(pi).unwrap();
        let x = [0.9, -1.7, 0.6, 1.2, -0.8, 1.9];
        assert!(max_jacobiator(&b, &x) < 1e-10 * b.jacobi_scale(&x));
        let _ = Coordinate { index: 0, dim: 6 }.value(&x);
    }
}
