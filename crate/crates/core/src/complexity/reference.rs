//! Slow brute-force versions of every metric, for validating the fast paths.
//!
//! Each function works on its own canonicalized copy and follows the
//! definitions literally: Kruskal over all edges for N1, exhaustive neighbor
//! scans, pairwise sphere absorption, Jacobi eigenvectors for F1v and a plain
//! loop gradient descent for L1–L3.

use super::{interpolate, ComplexityConfig, MetricId, MetricValues};

/// All fourteen metrics by brute force; same conventions as
/// [`compute_all`](super::compute_all).
pub fn compute_all(x: &[f64], d: usize, y: &[u8], config: &ComplexityConfig) -> MetricValues {
    let set = Set::new(x, d, y);
    let mut out = MetricValues::default();
    for m in MetricId::ALL {
        out.0[m.index()] = metric(
            m,
            &set,
            config.epsilon,
            config.interpolation_seed(MetricId::L3),
            config.interpolation_seed(MetricId::N4),
        );
    }
    out
}


struct Set {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<u8>,
}

impl Set {
    fn new(flat: &[f64], d: usize, y: &[u8]) -> Self {
        let n = y.len();
        let keep: Vec<usize> = (0..d)
            .filter(|&j| (0..n).any(|i| flat[i * d + j] != flat[j]))
            .collect();
        let mut rows: Vec<(Vec<f64>, u8)> = (0..n)
            .map(|i| (keep.iter().map(|&j| flat[i * d + j]).collect(), y[i]))
            .collect();
        rows.sort_by(|a, b| {
            for (u, v) in a.0.iter().zip(&b.0) {
                match u.partial_cmp(v).unwrap() {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            a.1.cmp(&b.1)
        });
        let (x, y) = rows.into_iter().unzip();
        Self { x, y }
    }

    fn n(&self) -> usize {
        self.y.len()
    }

    fn dim(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        dist(&self.x[i], &self.x[j])
    }

    /// Exhaustive nearest point satisfying `pred`, lowest index on ties.
    fn nearest(&self, i: usize, pred: impl Fn(usize) -> bool) -> Option<f64> {
        let mut best: Option<(f64, usize)> = None;
        for j in 0..self.n() {
            if j == i || !pred(j) {
                continue;
            }
            let dj = self.dist(i, j);
            if best.is_none_or(|(b, _)| dj < b) {
                best = Some((dj, j));
            }
        }
        best.map(|(b, _)| b)
    }

    fn nearest_index(&self, i: usize) -> usize {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..self.n() {
            if j != i && self.dist(i, j) < best.0 {
                best = (self.dist(i, j), j);
            }
        }
        best.1
    }

    fn enemy(&self, i: usize) -> f64 {
        self.nearest(i, |j| self.y[j] != self.y[i]).unwrap()
    }

    fn flat(&self) -> Vec<f64> {
        self.x.concat()
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
}

fn metric(m: MetricId, s: &Set, epsilon: f64, seed_l3: u64, seed_n4: u64) -> Option<f64> {
    let n = s.n();
    if n < 2 {
        return None;
    }
    let n1 = s.y.iter().filter(|&&c| c == 1).count();
    let n0 = n - n1;
    let both = n0 > 0 && n1 > 0;
    if !both && m.needs_enemy() {
        return None;
    }
    let nf = n as f64;
    Some(match m {
        MetricId::F1v => f1v(s),
        MetricId::L1 | MetricId::L2 | MetricId::L3 => {
            let (w, b) = logistic(s);
            let score = |r: &[f64]| r.iter().zip(&w).map(|(u, v)| u * v).sum::<f64>() + b;
            let predict = |r: &[f64]| u8::from(score(r) >= 0.0);
            match m {
                MetricId::L1 => {
                    let wrong: Vec<usize> = (0..n).filter(|&i| predict(&s.x[i]) != s.y[i]).collect();
                    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if wrong.is_empty() {
                        0.0
                    } else if norm == 0.0 {
                        1.0
                    } else {
                        let raw = wrong.iter().map(|&i| score(&s.x[i]).abs() / norm).sum::<f64>()
                            / wrong.len() as f64;
                        raw / (1.0 + raw)
                    }
                }
                MetricId::L2 => (0..n).filter(|&i| predict(&s.x[i]) != s.y[i]).count() as f64 / nf,
                _ => {
                    let d = s.dim();
                    let (z, zy) = interpolate(&s.flat(), d, &s.y, seed_l3);
                    (0..n).filter(|&i| predict(&z[i * d..(i + 1) * d]) != zy[i]).count() as f64 / nf
                }
            }
        }
        MetricId::N1 => {
            // Kruskal over all edges
            let mut edges: Vec<(f64, usize, usize)> = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((s.dist(i, j), i, j));
                }
            }
            edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut comp: Vec<usize> = (0..n).collect();
            let mut border = vec![false; n];
            for (_, i, j) in edges {
                let (ci, cj) = (comp[i], comp[j]);
                if ci == cj {
                    continue;
                }
                comp.iter_mut().filter(|c| **c == cj).for_each(|c| *c = ci);
                if s.y[i] != s.y[j] {
                    border[i] = true;
                    border[j] = true;
                }
            }
            border.iter().filter(|&&b| b).count() as f64 / nf
        }
        MetricId::N2 => {
            let intra: f64 = (0..n).filter_map(|i| s.nearest(i, |j| s.y[j] == s.y[i])).sum();
            let extra: f64 = (0..n).map(|i| s.enemy(i)).sum();
            if extra == 0.0 {
                1.0
            } else {
                intra / extra / (1.0 + intra / extra)
            }
        }
        MetricId::N3 => (0..n).filter(|&i| s.y[s.nearest_index(i)] != s.y[i]).count() as f64 / nf,
        MetricId::N4 => {
            let d = s.dim();
            let (z, zy) = interpolate(&s.flat(), d, &s.y, seed_n4);
            let mut wrong = 0;
            for k in 0..n {
                let q = &z[k * d..(k + 1) * d];
                let mut best = (f64::INFINITY, 0);
                for j in 0..n {
                    let dj = dist(q, &s.x[j]);
                    if dj < best.0 {
                        best = (dj, j);
                    }
                }
                if s.y[best.1] != zy[k] {
                    wrong += 1;
                }
            }
            wrong as f64 / nf
        }
        MetricId::T1 => {
            let r: Vec<f64> = (0..n).map(|i| s.enemy(i)).collect();
            let mut absorbed = vec![false; n];
            for j in 0..n {
                for i in 0..n {
                    if i == j || s.dist(i, j) + r[j] > r[i] {
                        continue;
                    }
                    // identical spheres: the earlier one survives
                    let identical = s.dist(i, j) + r[i] <= r[j];
                    if !identical || i < j {
                        absorbed[j] = true;
                    }
                }
            }
            absorbed.iter().filter(|&&a| !a).count() as f64 / nf
        }
        MetricId::Lsc => {
            let mut total = 0usize;
            for i in 0..n {
                let e = s.enemy(i);
                total += (0..n).filter(|&j| j != i && s.dist(i, j) < e).count();
            }
            1.0 - total as f64 / (nf * nf)
        }
        MetricId::Density | MetricId::ClsCoef => {
            let mut diameter: f64 = 0.0;
            for i in 0..n {
                for j in 0..n {
                    diameter = diameter.max(s.dist(i, j));
                }
            }
            let adj: Vec<Vec<bool>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let rel = if diameter > 0.0 { s.dist(i, j) / diameter } else { 0.0 };
                            i != j && s.y[i] == s.y[j] && rel < epsilon
                        })
                        .collect()
                })
                .collect();
            if m == MetricId::Density {
                let e = adj.iter().flatten().filter(|&&a| a).count() / 2;
                1.0 - 2.0 * e as f64 / (nf * (nf - 1.0))
            } else {
                let mut sum = 0.0;
                for i in 0..n {
                    let nb: Vec<usize> = (0..n).filter(|&j| adj[i][j]).collect();
                    let k = nb.len();
                    if k < 2 {
                        continue;
                    }
                    let mut links = 0;
                    for a in 0..k {
                        for b in a + 1..k {
                            if adj[nb[a]][nb[b]] {
                                links += 1;
                            }
                        }
                    }
                    sum += links as f64 / (k * (k - 1) / 2) as f64;
                }
                1.0 - sum / nf
            }
        }
        MetricId::C1 => {
            let h: f64 = [n0, n1]
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / nf;
                    -p * p.log2()
                })
                .sum();
            1.0 - h
        }
        MetricId::C2 => {
            if !both {
                1.0
            } else {
                let (a, b) = (n0 as f64, n1 as f64);
                1.0 - 2.0 / (a / b + b / a)
            }
        }
    })
}

fn logistic(s: &Set) -> (Vec<f64>, f64) {
    let (n, d) = (s.n(), s.dim());
    let lambda = 1e-4;
    let big_l = 0.25 * s.x.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>() + 1.0).sum::<f64>() / n as f64
        + lambda;
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    for _ in 0..1000 {
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for i in 0..n {
            let z: f64 = s.x[i].iter().zip(&w).map(|(u, v)| u * v).sum::<f64>() + b;
            let r = 1.0 / (1.0 + (-z).exp()) - s.y[i] as f64;
            for k in 0..d {
                gw[k] += r * s.x[i][k];
            }
            gb += r;
        }
        for k in 0..d {
            w[k] -= (gw[k] / n as f64 + lambda * w[k]) / big_l;
        }
        b -= gb / n as f64 / big_l;
    }
    (w, b)
}

/// Jacobi eigen-decomposition of a small symmetric matrix.
fn jacobi(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = a.len();
    let mut v: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(i == j)).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..d).flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..d {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for k in 0..d {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - sn * vkq;
                    v[k][q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    ((0..d).map(|i| a[i][i]).collect(), v)
}

fn f1v(s: &Set) -> f64 {
    let (n, d) = (s.n(), s.dim());
    if d == 0 {
        return 1.0;
    }
    let mut mu = [vec![0.0; d], vec![0.0; d]];
    let mut cnt = [0.0; 2];
    for i in 0..n {
        let c = s.y[i] as usize;
        cnt[c] += 1.0;
        for k in 0..d {
            mu[c][k] += s.x[i][k];
        }
    }
    for c in 0..2 {
        mu[c].iter_mut().for_each(|m| *m /= cnt[c]);
    }
    // sum over classes of (n_c / n) * population covariance
    let mut w = vec![vec![0.0; d]; d];
    for c in 0..2 {
        for i in (0..n).filter(|&i| s.y[i] as usize == c) {
            for a in 0..d {
                for b in 0..d {
                    w[a][b] += (s.x[i][a] - mu[c][a]) * (s.x[i][b] - mu[c][b]) / cnt[c] * (cnt[c] / n as f64);
                }
            }
        }
    }
    let delta: Vec<f64> = (0..d).map(|k| mu[0][k] - mu[1][k]).collect();
    let (vals, vecs) = jacobi(w.clone());
    let top = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut dir = vec![0.0; d];
    for e in 0..d {
        if top == 0.0 || vals[e].abs() <= 1e-12 * top {
            continue;
        }
        let proj: f64 = (0..d).map(|k| vecs[k][e] * delta[k]).sum();
        for k in 0..d {
            dir[k] += vecs[k][e] * proj / vals[e];
        }
    }
    if dir.iter().all(|&v| v == 0.0) {
        return if delta.iter().any(|&v| v != 0.0) { 0.0 } else { 1.0 };
    }
    let wd: f64 = dir.iter().zip(&delta).map(|(a, b)| a * b).sum();
    let num = wd * wd;
    let den: f64 = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| dir[a] * w[a][b] * dir[b]).sum();
    if den <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 + num / den)
}
