use std::cmp::Ordering;

use rand::Rng;

use crate::seed;

/// A labeled point set in canonical order.
///
/// Columns that are constant over the set are dropped and the rows are sorted
/// lexicographically by (features, label), so every metric is independent of
/// the input row order. Index ties are broken on this canonical order.
#[derive(Debug, Clone)]
pub(crate) struct Points {
    x: Vec<f64>,
    d: usize,
    y: Vec<u8>,
}

impl Points {
    pub fn canonical(x: &[f64], d: usize, y: &[u8]) -> Self {
        let n = y.len();
        debug_assert_eq!(x.len(), n * d);
        let kept: Vec<usize> = (0..d)
            .filter(|&j| (1..n).any(|i| x[i * d + j] != x[j]))
            .collect();
        let kd = kept.len();
        let mut rows: Vec<(Vec<f64>, u8)> = (0..n)
            .map(|i| (kept.iter().map(|&j| x[i * d + j]).collect(), y[i]))
            .collect();
        rows.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
                .then(a.1.cmp(&b.1))
        });
        let mut xs = Vec::with_capacity(n * kd);
        let mut ys = Vec::with_capacity(n);
        for (r, label) in rows {
            xs.extend(r);
            ys.push(label);
        }
        Self { x: xs, d: kd, y: ys }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> &[u8] {
        &self.y
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn class_counts(&self) -> [usize; 2] {
        crate::data::count_classes(&self.y)
    }

    pub fn has_both_classes(&self) -> bool {
        let c = self.class_counts();
        c[0] > 0 && c[1] > 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        euclidean(self.row(i), self.row(j))
    }

    /// For every point, (distance, index) of its nearest point of the other
    /// class, or `None` without enemies.
    pub fn nearest_enemies(&self) -> Vec<Option<(f64, usize)>> {
        self.nearest_where(|i, j| self.y[i] != self.y[j])
    }

    /// Nearest other point of the same class.
    pub fn nearest_friends(&self) -> Vec<Option<(f64, usize)>> {
        self.nearest_where(|i, j| i != j && self.y[i] == self.y[j])
    }

    /// Nearest other point regardless of class.
    pub fn nearest_others(&self) -> Vec<Option<(f64, usize)>> {
        self.nearest_where(|i, j| i != j)
    }

    fn nearest_where(&self, accept: impl Fn(usize, usize) -> bool) -> Vec<Option<(f64, usize)>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut best: Option<(f64, usize)> = None;
                for j in 0..n {
                    if !accept(i, j) {
                        continue;
                    }
                    let dij = self.dist(i, j);
                    // Strict improvement keeps the lowest index among ties.
                    if best.is_none_or(|(bd, _)| dij < bd) {
                        best = Some((dij, j));
                    }
                }
                best
            })
            .collect()
    }

    /// Index of the nearest point to `q` (lowest index on ties).
    pub fn nearest_to(&self, q: &[f64]) -> usize {
        let mut best = (f64::INFINITY, 0);
        for j in 0..self.len() {
            let dj = euclidean(q, self.row(j));
            if dj < best.0 {
                best = (dj, j);
            }
        }
        best.1
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                m = m.max(self.dist(i, j));
            }
        }
        m
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(u, v)| (u - v) * (u - v))
        .sum::<f64>()
        .sqrt()
}

/// Synthetic same-class interpolants, one per point.
///
/// Point `i` (canonical order) is paired with a uniformly drawn other member of
/// its class (itself when alone) and mixed with a coefficient uniform in (0, 1).
/// Returns row-major coordinates and labels.
pub fn interpolate(x: &[f64], d: usize, y: &[u8], seed: u64) -> (Vec<f64>, Vec<u8>) {
    let n = y.len();
    let members: [Vec<usize>; 2] = [
        (0..n).filter(|&i| y[i] == 0).collect(),
        (0..n).filter(|&i| y[i] == 1).collect(),
    ];
    let mut rng = seed::rng(seed);
    let mut out = Vec::with_capacity(n * d);
    for i in 0..n {
        let class = &members[y[i] as usize];
        let partner = if class.len() > 1 {
            let pos = class.binary_search(&i).expect("point is a member of its class");
            let r = rng.random_range(0..class.len() - 1);
            class[if r >= pos { r + 1 } else { r }]
        } else {
            i
        };
        let alpha = loop {
            let a: f64 = rng.random();
            if a > 0.0 {
                break a;
            }
        };
        let (a, b) = (&x[i * d..(i + 1) * d], &x[partner * d..(partner + 1) * d]);
        out.extend(a.iter().zip(b).map(|(u, v)| u + alpha * (v - u)));
    }
    (out, y.to_vec())
}
