use super::{interpolate, Analysis, MetricId, Points};

/// Fraction of points touching a cross-class edge of the Euclidean minimum
/// spanning tree (Prim's algorithm, ties to the lowest index).
pub(super) fn n1(p: &Points) -> f64 {
    let n = p.len();
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut borderline = vec![false; n];
    key[0] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || key[v] < key[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        let pu = parent[u];
        if pu != usize::MAX && p.labels()[pu] != p.labels()[u] {
            borderline[pu] = true;
            borderline[u] = true;
        }
        for v in 0..n {
            if !in_tree[v] {
                let duv = p.dist(u, v);
                if duv < key[v] {
                    key[v] = duv;
                    parent[v] = u;
                }
            }
        }
    }
    borderline.iter().filter(|&&b| b).count() as f64 / n as f64
}

/// Ratio of summed nearest-friend to summed nearest-enemy distances, squashed
/// by r / (1 + r). Points without a friend contribute nothing to the numerator.
pub(super) fn n2(a: &Analysis<'_>) -> f64 {
    let intra: f64 = a.points.nearest_friends().iter().flatten().map(|(dist, _)| dist).sum();
    let extra: f64 = a.enemies().iter().flatten().map(|(dist, _)| dist).sum();
    if extra == 0.0 {
        return 1.0;
    }
    let r = intra / extra;
    r / (1.0 + r)
}

/// Leave-one-out 1-NN error.
pub(super) fn n3(p: &Points) -> f64 {
    let wrong = p
        .nearest_others()
        .iter()
        .enumerate()
        .filter(|(i, nn)| nn.is_some_and(|(_, j)| p.labels()[j] != p.labels()[*i]))
        .count();
    wrong as f64 / p.len() as f64
}

/// 1-NN error on same-class interpolants, with the originals as reference set.
pub(super) fn n4(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let d = p.dim();
    let (z, labels) = interpolate(p.coords(), d, p.labels(), a.config.interpolation_seed(MetricId::N4));
    let wrong = labels
        .iter()
        .enumerate()
        .filter(|&(i, &y)| p.labels()[p.nearest_to(&z[i * d..(i + 1) * d])] != y)
        .count();
    wrong as f64 / labels.len() as f64
}

/// Fraction of hyperspheres (centered on each point, radius = nearest-enemy
/// distance) not contained in another sphere. Of two identical spheres the
/// lower index is kept.
pub(super) fn t1(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let n = p.len();
    let radius: Vec<f64> = a.enemies().iter().map(|e| e.expect("both classes present").0).collect();
    let kept = (0..n)
        .filter(|&j| {
            !(0..n).any(|i| {
                if i == j {
                    return false;
                }
                let dij = p.dist(i, j);
                let inside = dij + radius[j] <= radius[i];
                let mutual = dij + radius[i] <= radius[j];
                inside && (!mutual || i < j)
            })
        })
        .count();
    kept as f64 / n as f64
}

/// 1 - (sum of local set sizes) / n^2, where the local set of a point holds
/// the other points strictly closer than its nearest enemy.
pub(super) fn lsc(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let n = p.len();
    let enemies = a.enemies();
    let total: usize = (0..n)
        .map(|i| {
            let limit = enemies[i].expect("both classes present").0;
            (0..n).filter(|&j| j != i && p.dist(i, j) < limit).count()
        })
        .sum();
    1.0 - total as f64 / (n as f64 * n as f64)
}
