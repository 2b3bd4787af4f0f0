use super::Points;

/// One minus the normalized class entropy (1 for a single class).
pub(super) fn c1(p: &Points) -> f64 {
    let n = p.len() as f64;
    let entropy: f64 = p
        .class_counts()
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let q = c as f64 / n;
            -q * q.log2()
        })
        .sum();
    // two classes: log2(2) = 1
    1.0 - entropy
}

/// 1 - 1/IR with IR = (n0/n1 + n1/n0) / 2; 1 for a single class.
pub(super) fn c2(p: &Points) -> f64 {
    let [n0, n1] = p.class_counts();
    if n0 == 0 || n1 == 0 {
        return 1.0;
    }
    let (n0, n1) = (n0 as f64, n1 as f64);
    let ir = 0.5 * (n0 / n1 + n1 / n0);
    1.0 - 1.0 / ir
}
