//! Classical (Torgerson) multidimensional scaling of CMD vectors.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingResult {
    /// One (x, y) per input vector, column means zero.
    pub coords: Vec<[f64; 2]>,
    /// Eigenvalues of the doubly centered Gram matrix, descending.
    pub eigenvalues: Vec<f64>,
    /// Kruskal stress-1 of the 2-D distances against the input distances.
    pub stress: f64,
    /// Number of output axes backed by a positive eigenvalue (0, 1 or 2).
    pub positive_axes: usize,
}

impl EmbeddingResult {
    pub fn is_degenerate(&self) -> bool {
        self.positive_axes < 2
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Replace undefined entries by 0. Returns the vectors and the number of
/// replaced entries.
pub fn impute(vectors: &[Vec<Option<f64>>]) -> (Vec<Vec<f64>>, usize) {
    let mut missing = 0;
    let out = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    x.unwrap_or_else(|| {
                        missing += 1;
                        0.0
                    })
                })
                .collect()
        })
        .collect();
    if missing > 0 {
        log::warn!("{missing} undefined CMD entries imputed as 0 for the embedding");
    }
    (out, missing)
}

/// Double-center -D²/2, keep the two leading eigenpairs and scale the
/// eigenvectors by the square root of their eigenvalues. Each axis is
/// oriented so its first nonzero coordinate is positive.
pub fn classical_mds(vectors: &[Vec<f64>]) -> Result<EmbeddingResult> {
    let m = vectors.len();
    if m < 3 {
        return Err(Error::TooFewRecords { needed: 3, found: m });
    }
    let dist = DMatrix::from_fn(m, m, |i, j| euclidean(&vectors[i], &vectors[j]));
    let sq = dist.map(|d| d * d);
    let row_means: Vec<f64> = (0..m).map(|i| sq.row(i).mean()).collect();
    let grand = sq.mean();
    let gram = DMatrix::from_fn(m, m, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));

    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let scale = eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut coords = vec![[0.0; 2]; m];
    let mut positive_axes = 0;
    for axis in 0..2.min(m) {
        let lambda = eigenvalues[axis];
        if lambda <= 1e-12 * scale || lambda <= 0.0 {
            continue;
        }
        positive_axes += 1;
        let v = eig.eigenvectors.column(order[axis]);
        let root = lambda.sqrt();
        let sign = v
            .iter()
            .find(|x| (*x * root).abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        for i in 0..m {
            coords[i][axis] = sign * v[i] * root;
        }
    }

    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..m {
        for j in (i + 1)..m {
            let e = euclidean(&coords[i], &coords[j]);
            num += (dist[(i, j)] - e).powi(2);
            den += dist[(i, j)].powi(2);
        }
    }
    let stress = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    if positive_axes < 2 {
        log::warn!("embedding has only {positive_axes} positive axes");
    }
    Ok(EmbeddingResult {
        coords,
        eigenvalues,
        stress,
        positive_axes,
    })
}
