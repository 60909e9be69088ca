//! Scalar functions with gradients: quadratic forms, sparse polynomials,
//! coordinate functions and finite-difference wrappers.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A differentiable scalar on `R^n`.
pub trait ScalarFunction: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Central differences unless overridden with an exact gradient.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        central_difference_gradient(|y| self.value(y), x)
    }
}

/// Step `∛ε · max(1, |x_i|)` per coordinate.
pub fn fd_step(xi: f64) -> f64 {
    f64::EPSILON.cbrt() * xi.abs().max(1.0)
}

pub fn central_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = fd_step(x[i]);
            y[i] = x[i] + h;
            let fp = f(&y);
            y[i] = x[i] - h;
            let fm = f(&y);
            y[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// `½ xᵀ A x` with `A` symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm {
    matrix: DMatrix<f64>,
}

impl QuadraticForm {
    /// Symmetrizes `A` on construction.
    ///
    /// # Panics
    /// If `matrix` is not square.
    pub fn new(matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "quadratic form needs a square matrix");
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Self { matrix: sym }
    }

    /// `½ Σ a_k x_k²`.
    pub fn diagonal(coefficients: &[f64]) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&DVector::from_column_slice(coefficients)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.matrix[(i, j)] == 0.0))
    }

    /// Diagonal of `A`; `None` if the form has off-diagonal terms.
    pub fn diagonal_coefficients(&self) -> Option<Vec<f64>> {
        self.is_diagonal()
            .then(|| self.matrix.diagonal().iter().copied().collect())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { matrix: &self.matrix * c }
    }

    pub fn gradient_vector(&self, x: &[f64]) -> DVector<f64> {
        &self.matrix * DVector::from_column_slice(x)
    }
}

impl ScalarFunction for QuadraticForm {
    fn value(&self, x: &[f64]) -> f64 {
        let v = DVector::from_column_slice(x);
        0.5 * v.dot(&(&self.matrix * &v))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.gradient_vector(x).iter().copied().collect()
    }
}

/// The coordinate function `x ↦ x_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub index: usize,
    pub dim: usize,
}

impl ScalarFunction for Coordinate {
    fn value(&self, x: &[f64]) -> f64 {
        x[self.index]
    }

    fn gradient(&self, _x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        g[self.index] = 1.0;
        g
    }
}

/// `c · Π x_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponents: Vec<u32>,
}

/// Sparse polynomial with exact gradient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Monomial>,
}

impl Polynomial {
    /// # Panics
    /// If any monomial has the wrong number of exponents.
    pub fn new(dim: usize, terms: Vec<Monomial>) -> Self {
        assert!(terms.iter().all(|t| t.exponents.len() == dim));
        Self { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn coordinate(dim: usize, index: usize) -> Self {
        let mut exponents = vec![0; dim];
        exponents[index] = 1;
        Self::new(dim, vec![Monomial { coefficient: 1.0, exponents }])
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::new(dim, vec![Monomial { coefficient: c, exponents: vec![0; dim] }])
    }

    pub fn from_quadratic(q: &QuadraticForm) -> Self {
        let n = q.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i..n {
                let a = q.matrix()[(i, j)];
                if a == 0.0 {
                    continue;
                }
                let mut exponents = vec![0; n];
                exponents[i] += 1;
                exponents[j] += 1;
                // ½ a_ii x_i² on the diagonal, a_ij x_i x_j off it
                let coefficient = if i == j { 0.5 * a } else { a };
                terms.push(Monomial { coefficient, exponents });
            }
        }
        Self::new(n, terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.dim, terms)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(
            self.dim,
            self.terms
                .iter()
                .map(|t| Monomial { coefficient: t.coefficient * c, exponents: t.exponents.clone() })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Monomial {
                    coefficient: a.coefficient * b.coefficient,
                    exponents: a.exponents.iter().zip(&b.exponents).map(|(p, q)| p + q).collect(),
                });
            }
        }
        Self::new(self.dim, terms)
    }
}

fn powi(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

impl ScalarFunction for Polynomial {
    fn value(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * t.exponents.iter().zip(x).map(|(&e, &v)| powi(v, e)).product::<f64>())
            .sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        for t in &self.terms {
            for (l, gl) in g.iter_mut().enumerate() {
                let el = t.exponents[l];
                if el == 0 {
                    continue;
                }
                let mut p = t.coefficient * el as f64 * powi(x[l], el - 1);
                for (m, (&e, &v)) in t.exponents.iter().zip(x).enumerate() {
                    if m != l {
                        p *= powi(v, e);
                    }
                }
                *gl += p;
            }
        }
        g
    }
}

/// Wraps a closure; the gradient comes from central differences.
pub struct FnScalar<F>(pub F);

impl<F> ScalarFunction for FnScalar<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}
