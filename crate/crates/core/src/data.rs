//! Dataset representation, group splitting, standardization and stratified folds.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Numeric features with a binary target and a binary protected attribute.
///
/// Features are stored row-major. The protected attribute is never one of the
/// feature columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabularDataset {
    features: Vec<f64>,
    feature_names: Vec<String>,
    target: Vec<u8>,
    protected: Vec<u8>,
}

impl TabularDataset {
    pub fn new(
        features: Vec<f64>,
        feature_names: Vec<String>,
        target: Vec<u8>,
        protected: Vec<u8>,
    ) -> Result<Self> {
        let n = target.len();
        let d = feature_names.len();
        if n < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 rows, got {n}")));
        }
        if d < 1 {
            return Err(Error::InvalidDataset("need at least 1 feature".into()));
        }
        if protected.len() != n {
            return Err(Error::InvalidDataset(format!(
                "protected has {} entries, target has {n}",
                protected.len()
            )));
        }
        if features.len() != n * d {
            return Err(Error::InvalidDataset(format!(
                "feature matrix has {} cells, expected {n}x{d}",
                features.len()
            )));
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite feature value at row {}, column `{}`",
                pos / d,
                feature_names[pos % d]
            )));
        }
        if target.iter().chain(protected.iter()).any(|&v| v > 1) {
            return Err(Error::InvalidDataset("target and protected must be 0/1".into()));
        }
        Ok(Self {
            features,
            feature_names,
            target,
            protected,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.target.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn target(&self) -> &[u8] {
        &self.target
    }

    pub fn protected(&self) -> &[u8] {
        &self.protected
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.n_features();
        &self.features[i * d..(i + 1) * d]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.features.iter().skip(j).step_by(self.n_features()).copied()
    }

    /// Number of rows in class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        count_classes(&self.target)
    }

    /// Copy of the dataset restricted to `rows`, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let mut features = Vec::with_capacity(rows.len() * self.n_features());
        for &r in rows {
            features.extend_from_slice(self.row(r));
        }
        Self::new(
            features,
            self.feature_names.clone(),
            rows.iter().map(|&r| self.target[r]).collect(),
            rows.iter().map(|&r| self.protected[r]).collect(),
        )
    }

    /// Same dataset with the protected attribute inverted.
    pub fn swap_groups(&self) -> Self {
        Self {
            protected: self.protected.iter().map(|&a| 1 - a).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn with_features(&self, features: Vec<f64>) -> Self {
        debug_assert_eq!(features.len(), self.features.len());
        Self {
            features,
            ..self.clone()
        }
    }
}

pub(crate) fn count_classes(labels: &[u8]) -> [usize; 2] {
    let ones = labels.iter().filter(|&&y| y == 1).count();
    [labels.len() - ones, ones]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Privileged,
    Unprivileged,
}

/// Rows of a dataset belonging to one protected group.
#[derive(Debug, Clone)]
pub struct GroupView<'a> {
    pub parent: &'a TabularDataset,
    pub membership: Membership,
    pub rows: Vec<usize>,
}

impl GroupView<'_> {
    pub fn is_degenerate(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row-major features and targets of the view's rows.
    pub fn points(&self) -> (Vec<f64>, Vec<u8>) {
        let mut x = Vec::with_capacity(self.rows.len() * self.parent.n_features());
        let mut y = Vec::with_capacity(self.rows.len());
        for &r in &self.rows {
            x.extend_from_slice(self.parent.row(r));
            y.push(self.parent.target()[r]);
        }
        (x, y)
    }
}

/// Split into (privileged, unprivileged) views. An empty view is flagged
/// through [`GroupView::is_degenerate`].
pub fn split_groups(ds: &TabularDataset) -> (GroupView<'_>, GroupView<'_>) {
    let (privileged, unprivileged): (Vec<usize>, Vec<usize>) =
        (0..ds.n_rows()).partition(|&i| ds.protected()[i] == 1);
    (
        GroupView {
            parent: ds,
            membership: Membership::Privileged,
            rows: privileged,
        },
        GroupView {
            parent: ds,
            membership: Membership::Unprivileged,
            rows: unprivileged,
        },
    )
}

/// Per-feature location and scale used for standardization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaling {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    /// Features with zero spread; these map to all-zeros.
    pub constant: Vec<bool>,
}

impl FeatureScaling {
    /// Fit on row-major `x` with `d` columns. Uses the population standard deviation.
    pub fn fit(x: &[f64], d: usize) -> Self {
        let n = x.len() / d;
        let mut mean = vec![0.0; d];
        for row in x.chunks_exact(d) {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        let mut var = vec![0.0; d];
        for row in x.chunks_exact(d) {
            for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std: Vec<f64> = var.iter().map(|s| (s / n as f64).sqrt()).collect();
        let constant = std
            .iter()
            .zip(&mean)
            .map(|(s, m)| is_negligible_spread(*s, *m))
            .collect();
        Self {
            mean,
            std,
            constant,
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.mean.len();
        let mut out = Vec::with_capacity(x.len());
        for row in x.chunks_exact(d) {
            for j in 0..d {
                out.push(if self.constant[j] {
                    0.0
                } else {
                    (row[j] - self.mean[j]) / self.std[j]
                });
            }
        }
        out
    }
}

pub(crate) fn is_negligible_spread(std: f64, mean: f64) -> bool {
    std <= 1e-12 * mean.abs().max(1.0)
}

/// Standardize every feature to mean 0 and (population) standard deviation 1.
pub fn standardize(ds: &TabularDataset) -> (TabularDataset, FeatureScaling) {
    let scaling = FeatureScaling::fit(ds.features(), ds.n_features());
    (ds.with_features(scaling.apply(ds.features())), scaling)
}

/// Fold index per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of: Vec<usize>,
    pub k: usize,
}

impl FoldAssignment {
    /// Rows in fold `f`, ascending.
    pub fn test_rows(&self, f: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == f).collect()
    }

    /// Rows outside fold `f`, ascending.
    pub fn train_rows(&self, f: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != f).collect()
    }
}

/// Stratified k-fold assignment.
///
/// Each class is shuffled with the seed and dealt round-robin over the folds;
/// the dealing counter carries over from class 0 to class 1 so fold sizes stay
/// within one row of each other.
pub fn stratified_folds(ds: &TabularDataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    stratified_folds_for(ds.target(), k, seed)
}

pub(crate) fn stratified_folds_for(labels: &[u8], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("fold count must be >= 2, got {k}")));
    }
    let counts = count_classes(labels);
    for class in 0..2u8 {
        if counts[class as usize] < k {
            return Err(Error::ClassTooSmall {
                class,
                size: counts[class as usize],
                folds: k,
            });
        }
    }
    let mut rng = seed::rng(seed);
    let mut fold_of = vec![0; labels.len()];
    let mut dealt = 0usize;
    for class in 0..2u8 {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            fold_of[i] = dealt % k;
            dealt += 1;
        }
    }
    Ok(FoldAssignment { fold_of, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(features: Vec<f64>, d: usize, target: Vec<u8>, protected: Vec<u8>) -> TabularDataset {
        let names = (0..d).map(|j| format!("x{j}")).collect();
        TabularDataset::new(features, names, target, protected).unwrap()
    }

    #[test]
    fn split_partitions_rows() {
        let data = ds(vec![0.0, 1.0, 2.0, 3.0], 1, vec![0, 1, 0, 1], vec![1, 0, 1, 0]);
        let (p, u) = split_groups(&data);
        assert_eq!(p.rows, vec![0, 2]);
        assert_eq!(u.rows, vec![1, 3]);
        assert!(!p.is_degenerate() && !u.is_degenerate());
    }

    #[test]
    fn split_flags_empty_group() {
        let data = ds(vec![0.0, 1.0, 2.0], 1, vec![0, 1, 0], vec![1, 1, 1]);
        let (p, u) = split_groups(&data);
        assert_eq!(p.len(), 3);
        assert!(u.is_degenerate());
    }

    #[test]
    fn standardize_known_column() {
        let data = ds(vec![2.0, 5.0, 4.0, 5.0, 6.0, 5.0], 2, vec![0, 1, 0], vec![0, 1, 1]);
        let (z, scaling) = standardize(&data);
        let col: Vec<f64> = z.column(0).collect();
        let expected = 1.5f64.sqrt();
        assert!((col[0] + expected).abs() < 1e-12);
        assert!(col[1].abs() < 1e-12);
        assert!((col[2] - expected).abs() < 1e-12);
        assert!(scaling.constant[1]);
        assert!(z.column(1).all(|v| v == 0.0));
    }

    #[test]
    fn standardize_moments_on_random_matrix() {
        let mut rng = seed::rng(7);
        let x: Vec<f64> = (0..60).map(|_| rand::Rng::random_range(&mut rng, -5.0..5.0)).collect();
        let data = ds(x, 3, vec![0; 20], vec![0; 20]);
        let (z, _) = standardize(&data);
        for j in 0..3 {
            let col: Vec<f64> = z.column(j).collect();
            let m = col.iter().sum::<f64>() / 20.0;
            let s = (col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 20.0).sqrt();
            assert!(m.abs() < 1e-12, "mean {m}");
            assert!((s - 1.0).abs() < 1e-12, "std {s}");
        }
    }

    #[test]
    fn folds_balanced_two_classes() {
        let target: Vec<u8> = (0..20).map(|i| (i % 2) as u8).collect();
        let data = ds((0..20).map(|i| i as f64).collect(), 1, target.clone(), vec![0; 20]);
        let folds = stratified_folds(&data, 10, 3).unwrap();
        for f in 0..10 {
            let rows = folds.test_rows(f);
            let pos = rows.iter().filter(|&&r| target[r] == 1).count();
            assert_eq!((rows.len(), pos), (2, 1));
        }
        assert_eq!(folds, stratified_folds(&data, 10, 3).unwrap());
    }

    #[test]
    fn folds_thirty_seventy() {
        let target: Vec<u8> = (0..100).map(|i| u8::from(i < 30)).collect();
        let data = ds((0..100).map(|i| i as f64).collect(), 1, target.clone(), vec![0; 100]);
        let folds = stratified_folds(&data, 10, 11).unwrap();
        for f in 0..10 {
            let rows = folds.test_rows(f);
            let pos = rows.iter().filter(|&&r| target[r] == 1).count();
            assert_eq!((pos, rows.len() - pos), (3, 7));
        }
    }

    #[test]
    fn folds_reject_small_class() {
        let data = ds(vec![0.0; 12], 1, vec![0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1], vec![0; 12]);
        assert!(matches!(
            stratified_folds(&data, 5, 0),
            Err(Error::ClassTooSmall { class: 1, size: 3, folds: 5 })
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        let names = vec!["x".to_string()];
        assert!(TabularDataset::new(vec![1.0], names.clone(), vec![1], vec![1]).is_err());
        assert!(TabularDataset::new(vec![1.0, f64::NAN], names.clone(), vec![1, 0], vec![1, 0]).is_err());
        assert!(TabularDataset::new(vec![1.0, 2.0], names, vec![1, 2], vec![1, 0]).is_err());
    }

    proptest! {
        #[test]
        fn standardization_affine_invariant(
            x in prop::collection::vec(-100.0f64..100.0, 8..40),
            scale in 0.01f64..100.0,
            shift in -1000.0f64..1000.0,
        ) {
            let n = x.len();
            let a = ds(x.clone(), 1, vec![0; n], vec![0; n]);
            let b = ds(x.iter().map(|v| v * scale + shift).collect(), 1, vec![0; n], vec![0; n]);
            let (za, sa) = standardize(&a);
            let (zb, _) = standardize(&b);
            prop_assume!(!sa.constant[0] && sa.std[0] > 1e-3);
            for (u, v) in za.features().iter().zip(zb.features()) {
                prop_assert!((u - v).abs() < 1e-9);
            }
        }

        #[test]
        fn folds_partition_and_stratify(
            labels in prop::collection::vec(0u8..2, 20..200),
            k in 2usize..10,
            seed in any::<u64>(),
        ) {
            let counts = count_classes(&labels);
            prop_assume!(counts[0] >= k && counts[1] >= k);
            let folds = stratified_folds_for(&labels, k, seed).unwrap();
            for f in 0..k {
                let rows = folds.test_rows(f);
                let pos = rows.iter().filter(|&&r| labels[r] == 1).count() as f64;
                let neg = rows.len() as f64 - pos;
                prop_assert!((pos - counts[1] as f64 / k as f64).abs() < 1.0);
                prop_assert!((neg - counts[0] as f64 / k as f64).abs() < 1.0);
            }
            prop_assert!(folds.fold_of.iter().all(|&f| f < k));
        }
    }
}
