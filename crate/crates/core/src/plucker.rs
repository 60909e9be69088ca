//! Plücker coordinates of 2-planes in `R^n` (equivalently, lines in
//! `P^{n-1}`).
//!
//! A [`PluckerVector`] stores the `C(n, 2)` coordinates `π_ij`, `i < j`, in
//! lexicographic order. Reads with `i > j` return `-π_ji` and the diagonal
//! reads as zero.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

/// Default relative tolerance for decomposability (residual / max|π|²).
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PluckerError {
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("expected {expected} components, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("all Plücker coordinates are zero")]
    ZeroVector,
    #[error("component is not finite")]
    NonFinite,
    #[error("index pair ({0}, {1}) is not a valid i < j pair")]
    InvalidPair(usize, usize),
    #[error("plane is degenerate: the spanning vectors are linearly dependent")]
    DegeneratePlane,
    #[error("not decomposable: relative residual {residual:e} exceeds {tol:e}")]
    NotDecomposable { residual: f64, tol: f64 },
}

/// Number of ordered pairs `i < j` in dimension `n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic position of the pair `(i, j)`, `i < j < n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j < n`, lexicographic.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// All triples `i < j < k < n`, lexicographic.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// All quadruples `i < j < k < l < n`, lexicographic.
pub fn quadruples(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for [i, j, k] in triples(n) {
        for l in k + 1..n {
            out.push([i, j, k, l]);
        }
    }
    out
}

/// One quadratic relation evaluated at a specific quadruple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Relation {
    pub indices: [usize; 4],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PluckerVector {
    n: usize,
    components: Vec<f64>,
}

impl PluckerVector {
    /// Builds a vector from components in lexicographic pair order
    /// (`π_12, π_13, …, π_1n, π_23, …`).
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self, PluckerError> {
        if n < 3 {
            return Err(PluckerError::DimensionTooSmall(n));
        }
        if components.len() != pair_count(n) {
            return Err(PluckerError::LengthMismatch {
                expected: pair_count(n),
                found: components.len(),
            });
        }
        if components.iter().any(|v| !v.is_finite()) {
            return Err(PluckerError::NonFinite);
        }
        if components.iter().all(|&v| v == 0.0) {
            return Err(PluckerError::ZeroVector);
        }
        Ok(Self { n, components })
    }

    /// Builds a vector from sparse `(i, j, value)` entries (0-based, `i < j`).
    /// Omitted pairs are zero.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, PluckerError> {
        if n < 3 {
            return Err(PluckerError::DimensionTooSmall(n));
        }
        let mut components = vec![0.0; pair_count(n)];
        for (i, j, v) in entries {
            if i >= j || j >= n {
                return Err(PluckerError::InvalidPair(i, j));
            }
            components[pair_index(n, i, j)] = v;
        }
        Self::new(n, components)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// Antisymmetric access: `get(i, j) = -get(j, i)`, `get(i, i) = 0`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.components[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.components[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// `((i, j), π_ij)` for every `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        pairs(self.n).zip(self.components.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> Result<Self, PluckerError> {
        Self::new(self.n, self.components.iter().map(|v| v * c).collect())
    }

    /// Rescaled so the largest component magnitude is 1.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        Self {
            n: self.n,
            components: self.components.iter().map(|v| v / m).collect(),
        }
    }

    /// Componentwise sum; fails only if the sum vanishes.
    pub fn add(&self, other: &Self) -> Result<Self, PluckerError> {
        self.check_same_dim(other)?;
        Self::new(
            self.n,
            self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        )
    }

    /// The constant skew matrix `(π_ij)`.
    pub fn skew_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), PluckerError> {
        if self.n != other.n {
            return Err(PluckerError::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// `R_ijkl = p_ij p_kl − p_ik p_jl + p_jk p_il` for every `i < j < k < l`.
    /// Empty for `n = 3`.
    pub fn residuals(&self) -> Vec<Relation> {
        quadruples(self.n)
            .into_iter()
            .map(|q| Relation {
                indices: q,
                residual: relation(|a, b| self.get(a, b), q),
            })
            .collect()
    }

    /// Largest relation residual divided by `max|π|²`.
    pub fn relative_residual(&self) -> f64 {
        let scale = self.max_abs().powi(2);
        self.residuals()
            .iter()
            .fold(0.0_f64, |m, r| m.max(r.residual.abs()))
            / scale
    }

    /// `true` iff every relation holds to `tol` relative to `max|π|²`.
    pub fn is_decomposable(&self, tol: f64) -> bool {
        self.relative_residual() <= tol
    }

    /// Matrix of `v ↦ v ∧ ω` from `R^n` to `Λ³R^n`, rows indexed by
    /// lexicographic triples. For `n = 3` this is the single row
    /// `(p_23, −p_13, p_12)`.
    pub fn representation_matrix(&self) -> DMatrix<f64> {
        let rows = triples(self.n);
        let mut m = DMatrix::zeros(rows.len(), self.n);
        for (r, &[a, b, c]) in rows.iter().enumerate() {
            m[(r, a)] = self.get(b, c);
            m[(r, b)] = -self.get(a, c);
            m[(r, c)] = self.get(a, b);
        }
        m
    }

    /// Numerical rank of [`Self::representation_matrix`]; equals `n − 2`
    /// exactly for decomposable vectors.
    pub fn representation_rank(&self) -> usize {
        linalg::numerical_rank(&self.representation_matrix())
    }

    /// Inverse of the Plücker embedding: a basis `(α, β)` with `α ∧ β = π`.
    ///
    /// Pivots on the largest `|π_ab|` (lexicographically first on ties) and
    /// sets `α_j = π_aj / π_ab`, `β_j = π_bj`.
    pub fn recover_plane(&self, tol: f64) -> Result<PlaneBasis, PluckerError> {
        let residual = self.relative_residual();
        if residual > tol {
            return Err(PluckerError::NotDecomposable { residual, tol });
        }
        let (mut a, mut b, mut best) = (0, 1, -1.0);
        for ((i, j), v) in self.entries() {
            if v.abs() > best {
                (a, b, best) = (i, j, v.abs());
            }
        }
        let pivot = self.get(a, b);
        let alpha = (0..self.n).map(|j| self.get(a, j) / pivot).collect();
        let beta = (0..self.n).map(|j| self.get(b, j)).collect();
        Ok(PlaneBasis { alpha, beta })
    }

    /// Bilinear intersection form for every `i < j < k < l`:
    /// `p_ij q_kl − p_ik q_jl + p_il q_jk + p_jk q_il − p_jl q_ik + p_kl q_ij`.
    /// All vanish iff the two lines meet.
    pub fn intersection_residuals(&self, other: &Self) -> Result<Vec<Relation>, PluckerError> {
        self.check_same_dim(other)?;
        let p = |a, b| self.get(a, b);
        let q = |a, b| other.get(a, b);
        Ok(quadruples(self.n)
            .into_iter()
            .map(|idx| {
                let [i, j, k, l] = idx;
                let residual = p(i, j) * q(k, l) - p(i, k) * q(j, l) + p(i, l) * q(j, k)
                    + p(j, k) * q(i, l)
                    - p(j, l) * q(i, k)
                    + p(k, l) * q(i, j);
                Relation { indices: idx, residual }
            })
            .collect())
    }

    /// Largest intersection residual relative to `max|p| · max|q|`.
    pub fn relative_intersection_residual(&self, other: &Self) -> Result<f64, PluckerError> {
        let scale = self.max_abs() * other.max_abs();
        Ok(self
            .intersection_residuals(other)?
            .iter()
            .fold(0.0_f64, |m, r| m.max(r.residual.abs()))
            / scale)
    }

    pub fn intersects(&self, other: &Self, tol: f64) -> Result<bool, PluckerError> {
        Ok(self.relative_intersection_residual(other)? <= tol)
    }
}

/// The relation `p_ij p_kl − p_ik p_jl + p_jk p_il` at a sorted quadruple.
pub(crate) fn relation(p: impl Fn(usize, usize) -> f64, [i, j, k, l]: [usize; 4]) -> f64 {
    p(i, j) * p(k, l) - p(i, k) * p(j, l) + p(j, k) * p(i, l)
}

/// Two vectors spanning a 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneBasis {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl PlaneBasis {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self, PluckerError> {
        let basis = Self { alpha, beta };
        basis.wedge()?;
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `π_ij = α_i β_j − α_j β_i`.
    pub fn wedge(&self) -> Result<PluckerVector, PluckerError> {
        wedge(&self.alpha, &self.beta)
    }
}

/// Plücker coordinates of `span{α, β}`.
pub fn wedge(alpha: &[f64], beta: &[f64]) -> Result<PluckerVector, PluckerError> {
    let n = alpha.len();
    if beta.len() != n {
        return Err(PluckerError::DimensionMismatch(n, beta.len()));
    }
    if n < 3 {
        return Err(PluckerError::DimensionTooSmall(n));
    }
    let components: Vec<f64> = pairs(n)
        .map(|(i, j)| alpha[i] * beta[j] - alpha[j] * beta[i])
        .collect();
    let scale = alpha.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
        * beta.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let largest = components.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if largest <= 16.0 * f64::EPSILON * scale || largest == 0.0 {
        return Err(PluckerError::DegeneratePlane);
    }
    PluckerVector::new(n, components)
}
