//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Rank threshold `max(rows, cols) · ε · σ_max`.
pub fn rank_threshold(m: &DMatrix<f64>, sigma_max: f64) -> f64 {
    m.nrows().max(m.ncols()) as f64 * f64::EPSILON * sigma_max
}

/// Numerical rank: number of singular values above [`rank_threshold`].
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else { return 0 };
    if smax == 0.0 || !smax.is_finite() {
        return 0;
    }
    let thr = rank_threshold(m, smax);
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis of the `dim` right-singular directions with the smallest
/// singular values. When `dim` equals the nullity this is a kernel basis.
pub fn smallest_right_singular_vectors(m: &DMatrix<f64>, dim: usize) -> Vec<DVector<f64>> {
    let n = m.ncols();
    // pad with zero rows so the SVD returns a full n×n right factor
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    order
        .into_iter()
        .take(dim)
        .map(|r| v_t.row(r).transpose())
        .collect()
}

/// Relative distance of `v` from the span of the orthonormal `basis`.
pub fn span_distance(v: &DVector<f64>, basis: &[DVector<f64>]) -> f64 {
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let mut residual = v.clone();
    for b in basis {
        residual -= b * b.dot(v);
    }
    residual.norm() / norm
}

/// Gram–Schmidt orthonormalisation; drops vectors that are numerically dependent.
pub fn orthonormalize(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                w -= b * b.dot(&w);
            }
        }
        let norm = w.norm();
        if norm > 1e-12 * v.norm().max(f64::MIN_POSITIVE) {
            out.push(w / norm);
        }
    }
    out
}
