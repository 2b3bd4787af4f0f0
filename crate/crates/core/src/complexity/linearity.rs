use super::{interpolate, Analysis, MetricId};

/// Mean distance of misclassified points to the logistic boundary, squashed
/// by r / (1 + r).
pub(super) fn l1(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let model = a.logistic();
    let norm = model.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let mut total = 0.0;
    let mut wrong = 0usize;
    for i in 0..p.len() {
        if model.predict(p.row(i)) != p.labels()[i] {
            wrong += 1;
            total += model.score(p.row(i)).abs();
        }
    }
    if wrong == 0 {
        return 0.0;
    }
    if norm == 0.0 {
        // a flat model puts every misclassified point infinitely far away
        return 1.0;
    }
    let raw = total / norm / wrong as f64;
    raw / (1.0 + raw)
}

/// Training error of the logistic model.
pub(super) fn l2(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let model = a.logistic();
    let wrong = (0..p.len())
        .filter(|&i| model.predict(p.row(i)) != p.labels()[i])
        .count();
    wrong as f64 / p.len() as f64
}

/// Error of the logistic model on same-class interpolants.
pub(super) fn l3(a: &Analysis<'_>) -> f64 {
    let p = a.points;
    let model = a.logistic();
    let d = p.dim();
    let (z, labels) = interpolate(p.coords(), d, p.labels(), a.config.interpolation_seed(MetricId::L3));
    let wrong = labels
        .iter()
        .enumerate()
        .filter(|&(i, &y)| model.predict(&z[i * d..(i + 1) * d]) != y)
        .count();
    wrong as f64 / labels.len() as f64
}
