use nalgebra::{DMatrix, DVector};

use super::Points;

/// Directional-vector Fisher ratio, mapped to 1 / (1 + dF).
///
/// The direction solves W w = (mu0 - mu1) with W the proportion-weighted
/// within-class scatter (population covariances), via pseudo-inverse.
pub(super) fn f1v(p: &Points) -> f64 {
    let d = p.dim();
    if d == 0 {
        return 1.0;
    }
    let n = p.len() as f64;
    let counts = p.class_counts();
    let mut means = [DVector::zeros(d), DVector::zeros(d)];
    for i in 0..p.len() {
        means[p.labels()[i] as usize] += DVector::from_column_slice(p.row(i));
    }
    for c in 0..2 {
        means[c] /= counts[c] as f64;
    }
    let mut within = DMatrix::zeros(d, d);
    for i in 0..p.len() {
        let c = p.labels()[i] as usize;
        let dev = DVector::from_column_slice(p.row(i)) - &means[c];
        // population covariance of class c, weighted by n_c / n
        within += (&dev * dev.transpose()) / n;
    }
    let delta = &means[0] - &means[1];
    let w = pinv_symmetric(&within) * &delta;
    if w.norm() == 0.0 {
        return if delta.norm() > 0.0 { 0.0 } else { 1.0 };
    }
    let between = &delta * delta.transpose();
    let num = (w.transpose() * between * &w)[(0, 0)];
    let den = (w.transpose() * &within * &w)[(0, 0)];
    if den <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 + num / den)
}

/// Pseudo-inverse of a symmetric positive semi-definite matrix, discarding
/// eigenvalues below 1e-12 of the largest.
fn pinv_symmetric(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let d = m.nrows();
    let mut out = DMatrix::zeros(d, d);
    if max == 0.0 {
        return out;
    }
    for k in 0..d {
        let lambda = eig.eigenvalues[k];
        if lambda.abs() > 1e-12 * max {
            let v = eig.eigenvectors.column(k);
            out += (v * v.transpose()) / lambda;
        }
    }
    out
}
