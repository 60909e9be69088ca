//! Uniform access to Poisson structure matrices.

use nalgebra::DMatrix;

use super::function::{fd_step, ScalarFunction};
use super::PoissonError;
use crate::linalg;

/// Anything that yields a skew-symmetric structure matrix `P(x)`.
pub trait BracketSource: Send + Sync {
    fn dim(&self) -> usize;

    fn structure_matrix(&self, x: &[f64]) -> DMatrix<f64>;

    /// `∂P/∂x_l` at `x`. Central differences unless overridden.
    fn structure_derivative(&self, x: &[f64], l: usize) -> DMatrix<f64> {
        let h = fd_step(x[l]);
        let mut y = x.to_vec();
        y[l] = x[l] + h;
        let plus = self.structure_matrix(&y);
        y[l] = x[l] - h;
        let minus = self.structure_matrix(&y);
        (plus - minus) / (2.0 * h)
    }

    /// Cyclic sum `{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}`.
    ///
    /// Indices are assumed valid; see [`jacobiator`] for the checked entry
    /// point.
    fn jacobiator_unchecked(&self, i: usize, j: usize, k: usize, x: &[f64]) -> f64 {
        let p = self.structure_matrix(x);
        (0..self.dim())
            .map(|l| {
                let d = self.structure_derivative(x, l);
                d[(j, k)] * p[(i, l)] + d[(k, i)] * p[(j, l)] + d[(i, j)] * p[(k, l)]
            })
            .sum()
    }

    /// Jacobiator of every triple `i < j < k`, in lexicographic order.
    fn jacobiators(&self, x: &[f64]) -> Vec<([usize; 3], f64)> {
        let n = self.dim();
        let p = self.structure_matrix(x);
        let d: Vec<DMatrix<f64>> = (0..n).map(|l| self.structure_derivative(x, l)).collect();
        crate::plucker::triples(n)
            .into_iter()
            .map(|[i, j, k]| {
                let v = (0..n)
                    .map(|l| d[l][(j, k)] * p[(i, l)] + d[l][(k, i)] * p[(j, l)] + d[l][(i, j)] * p[(k, l)])
                    .sum();
                ([i, j, k], v)
            })
            .collect()
    }
}

/// `{f, g}(x) = ∇f(x)ᵀ P(x) ∇g(x)`.
pub fn bracket_of(
    src: &dyn BracketSource,
    f: &dyn ScalarFunction,
    g: &dyn ScalarFunction,
    x: &[f64],
) -> f64 {
    let p = src.structure_matrix(x);
    bracket_with_matrix(&p, &f.gradient(x), &g.gradient(x))
}

pub(crate) fn bracket_with_matrix(p: &DMatrix<f64>, df: &[f64], dg: &[f64]) -> f64 {
    let n = df.len();
    let mut s = 0.0;
    for i in 0..n {
        if df[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            s += df[i] * p[(i, j)] * dg[j];
        }
    }
    s
}

/// Checked jacobiator of coordinate functions `x_i, x_j, x_k`.
pub fn jacobiator(
    src: &dyn BracketSource,
    i: usize,
    j: usize,
    k: usize,
    x: &[f64],
) -> Result<f64, PoissonError> {
    let n = src.dim();
    if i >= n || j >= n || k >= n {
        return Err(PoissonError::IndexOutOfRange { index: i.max(j).max(k), dim: n });
    }
    if i == j || j == k || i == k {
        return Err(PoissonError::RepeatedIndex);
    }
    if x.len() != n {
        return Err(PoissonError::PointDimension { expected: n, found: x.len() });
    }
    Ok(src.jacobiator_unchecked(i, j, k, x))
}

/// Largest `|jacobiator|` over all triples at `x`.
pub fn max_jacobiator(src: &dyn BracketSource, x: &[f64]) -> f64 {
    src.jacobiators(x).iter().fold(0.0, |m, (_, v)| m.max(v.abs()))
}

/// Numerical rank of `P(x)` (SVD, threshold `n · ε · σ_max`).
pub fn rank_at(src: &dyn BracketSource, x: &[f64]) -> usize {
    linalg::numerical_rank(&src.structure_matrix(x))
}

/// A constant skew matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantSkew {
    matrix: DMatrix<f64>,
}

impl ConstantSkew {
    /// Keeps the skew part `(M − Mᵀ)/2`.
    pub fn new(matrix: DMatrix<f64>) -> Self {
        let skew = (&matrix - matrix.transpose()) * 0.5;
        Self { matrix: skew }
    }
}

impl BracketSource for ConstantSkew {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn structure_matrix(&self, _x: &[f64]) -> DMatrix<f64> {
        self.matrix.clone()
    }

    fn structure_derivative(&self, _x: &[f64], _l: usize) -> DMatrix<f64> {
        DMatrix::zeros(self.dim(), self.dim())
    }
}

/// Canonical bracket on `R^{2m}` with coordinates `(q_1..q_m, p_1..p_m)` and
/// `{q_i, p_j} = δ_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalSymplectic {
    pub degrees_of_freedom: usize,
}

impl BracketSource for CanonicalSymplectic {
    fn dim(&self) -> usize {
        2 * self.degrees_of_freedom
    }

    fn structure_matrix(&self, _x: &[f64]) -> DMatrix<f64> {
        let m = self.degrees_of_freedom;
        let mut j = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            j[(i, m + i)] = 1.0;
            j[(m + i, i)] = -1.0;
        }
        j
    }

    fn structure_derivative(&self, _x: &[f64], _l: usize) -> DMatrix<f64> {
        DMatrix::zeros(self.dim(), self.dim())
    }
}

/// Lie–Poisson structure of `e(3)` on `(x_1, x_2, x_3, y_1, y_2, y_3)`:
///
/// ```text
/// P = [ 0  X ]     X = [  0   x3  -x2 ]
///     [ X  Y ]         [ -x3  0    x1 ]
///                      [  x2 -x1   0  ]
/// ```
///
/// and `Y` built from `y` the same way. Casimirs: `|x|²` and `x·y`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LiePoissonE3;

fn cross_block(v: &[f64]) -> [[f64; 3]; 3] {
    [[0.0, v[2], -v[1]], [-v[2], 0.0, v[0]], [v[1], -v[0], 0.0]]
}

impl BracketSource for LiePoissonE3 {
    fn dim(&self) -> usize {
        6
    }

    fn structure_matrix(&self, z: &[f64]) -> DMatrix<f64> {
        let xb = cross_block(&z[0..3]);
        let yb = cross_block(&z[3..6]);
        let mut p = DMatrix::zeros(6, 6);
        for a in 0..3 {
            for b in 0..3 {
                p[(a, 3 + b)] = xb[a][b];
                p[(3 + a, b)] = xb[a][b];
                p[(3 + a, 3 + b)] = yb[a][b];
            }
        }
        p
    }

    fn structure_derivative(&self, _z: &[f64], l: usize) -> DMatrix<f64> {
        // P is linear in z, so ∂P/∂z_l = P(e_l)
        let mut e = [0.0; 6];
        e[l] = 1.0;
        self.structure_matrix(&e)
    }
}
