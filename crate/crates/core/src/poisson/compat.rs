use super::bracket::PluckerBracket;
use super::source::max_jacobiator;
use super::PoissonError;
use crate::exec::Execution;
use crate::plucker::{PluckerError, Relation};

/// Intersection residuals of the two underlying lines.
pub fn compatibility_residuals(a: &PluckerBracket, b: &PluckerBracket) -> Result<Vec<Relation>, PoissonError> {
    Ok(a.pi().intersection_residuals(b.pi())?)
}

/// Both routes to compatibility: the line-intersection test and the Jacobi
/// identity of the sum bracket sampled at points.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport {
    /// Largest intersection residual relative to `max|π| · max|π′|`.
    pub intersection_residual: f64,
    pub intersects: bool,
    /// Largest jacobiator of the normalized sum, over the jacobi scale.
    pub sum_jacobiator: f64,
    pub sum_is_poisson: bool,
    pub tolerance: f64,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.intersects
    }

    /// `true` when both routes reach the same verdict.
    pub fn consistent(&self) -> bool {
        self.intersects == self.sum_is_poisson
    }
}

/// Compares the intersection verdict with the sum-bracket Jacobi verdict.
///
/// Both `π` are normalized to `max|π| = 1` before summing. A vanishing sum is
/// the zero bracket, which is Poisson.
pub fn compatibility(
    a: &PluckerBracket,
    b: &PluckerBracket,
    points: &[Vec<f64>],
    tol: f64,
    exec: Execution,
) -> Result<CompatibilityReport, PoissonError> {
    let intersection_residual = a.pi().relative_intersection_residual(b.pi())?;
    let sum = match a.pi().normalized().add(&b.pi().normalized()) {
        Ok(s) => Some(PluckerBracket::new_unchecked(s)),
        Err(PluckerError::ZeroVector) => None,
        Err(e) => return Err(e.into()),
    };
    let sum_jacobiator = match &sum {
        Some(s) => exec.max_of(points, |x| max_jacobiator(s, x) / s.jacobi_scale(x)),
        None => 0.0,
    };
    Ok(CompatibilityReport {
        intersection_residual,
        intersects: intersection_residual <= tol,
        sum_jacobiator,
        sum_is_poisson: sum_jacobiator <= tol,
        tolerance: tol,
    })
}
