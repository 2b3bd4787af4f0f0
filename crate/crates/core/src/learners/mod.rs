//! Baseline classifiers and the cross-validation harness.

mod cv;
mod knn;
mod logistic;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use cv::{run_cv, write_predictions_csv, FoldPrediction, FoldPredictions};
pub use knn::{fit_knn, KnnModel};
pub use logistic::{fit_logistic, logistic_loss, LogisticConfig, LogisticModel};
pub use tree::{fit_tree, DecisionTree, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LearnerId {
    LR,
    DT,
    KN,
}

impl LearnerId {
    pub const ALL: [LearnerId; 3] = [LearnerId::LR, LearnerId::DT, LearnerId::KN];

    pub fn name(self) -> &'static str {
        match self {
            LearnerId::LR => "LR",
            LearnerId::DT => "DT",
            LearnerId::KN => "KN",
        }
    }
}

impl fmt::Display for LearnerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LearnerId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown learner `{s}`")))
    }
}

/// Number of neighbors used by the KN learner.
pub const DEFAULT_NEIGHBORS: usize = 10;

/// A fitted model of any of the three families.
#[derive(Debug, Clone)]
pub enum Model {
    Logistic(LogisticModel),
    Tree(DecisionTree),
    Knn(KnnModel),
}

impl Model {
    pub fn fit(learner: LearnerId, x: &[f64], d: usize, y: &[u8]) -> Self {
        match learner {
            LearnerId::LR => Model::Logistic(fit_logistic(x, d, y, &LogisticConfig::default())),
            LearnerId::DT => Model::Tree(fit_tree(x, d, y)),
            LearnerId::KN => Model::Knn(fit_knn(x, d, y, DEFAULT_NEIGHBORS)),
        }
    }

    pub fn predict(&self, row: &[f64]) -> u8 {
        match self {
            Model::Logistic(m) => m.predict(row),
            Model::Tree(m) => m.predict(row),
            Model::Knn(m) => m.predict(row),
        }
    }

    /// Set when training met a degenerate case (single-class data, clamped k).
    pub fn degenerate(&self) -> bool {
        match self {
            Model::Logistic(m) => m.constant.is_some(),
            Model::Tree(_) => false,
            Model::Knn(m) => m.clamped,
        }
    }
}
