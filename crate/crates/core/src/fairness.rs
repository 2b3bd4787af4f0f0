//! Group confusion matrices and group fairness differences.
//!
//! All three metrics are reported as unprivileged minus privileged, so a
//! negative statistical parity disfavors the unprivileged group. Values in
//! `[-band, band]` (default 0.1) count as fair.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::TabularDataset;
use crate::error::{Error, Result};
use crate::learners::{run_cv, FoldPrediction, FoldPredictions, LearnerId};

/// Default half-width of the fair interval.
pub const FAIR_BAND: f64 = 0.1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    fn add(&mut self, y_true: u8, y_pred: u8) {
        match (y_true, y_pred) {
            (1, 1) => self.tp += 1,
            (0, 1) => self.fp += 1,
            (0, _) => self.tn += 1,
            _ => self.fn_ += 1,
        }
    }
}

/// Confusion counts for the unprivileged (U) and privileged (P) groups.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfusion {
    pub unprivileged: Confusion,
    pub privileged: Confusion,
}

impl GroupConfusion {
    pub fn swapped(&self) -> Self {
        Self {
            unprivileged: self.privileged,
            privileged: self.unprivileged,
        }
    }
}

pub fn group_confusion<'a>(preds: impl IntoIterator<Item = &'a FoldPrediction>) -> GroupConfusion {
    let mut c = GroupConfusion::default();
    for p in preds {
        let group = if p.protected == 1 {
            &mut c.privileged
        } else {
            &mut c.unprivileged
        };
        group.add(p.y_true, p.y_pred);
    }
    c
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Difference of predicted-positive rates, U - P.
pub fn statistical_parity(c: &GroupConfusion) -> Option<f64> {
    let (u, p) = (&c.unprivileged, &c.privileged);
    Some(ratio(u.tp + u.fp, u.total())? - ratio(p.tp + p.fp, p.total())?)
}

/// Difference of true positive rates, U - P.
pub fn equal_opportunity(c: &GroupConfusion) -> Option<f64> {
    let (u, p) = (&c.unprivileged, &c.privileged);
    Some(ratio(u.tp, u.tp + u.fn_)? - ratio(p.tp, p.tp + p.fn_)?)
}

/// Difference of false discovery rates, U - P.
pub fn predictive_parity(c: &GroupConfusion) -> Option<f64> {
    let (u, p) = (&c.unprivileged, &c.privileged);
    Some(ratio(u.fp, u.tp + u.fp)? - ratio(p.fp, p.tp + p.fp)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FairnessMetric {
    SP,
    EO,
    PP,
}

impl FairnessMetric {
    pub const ALL: [FairnessMetric; 3] = [FairnessMetric::SP, FairnessMetric::EO, FairnessMetric::PP];

    pub fn name(self) -> &'static str {
        match self {
            FairnessMetric::SP => "SP",
            FairnessMetric::EO => "EO",
            FairnessMetric::PP => "PP",
        }
    }

    pub fn evaluate(self, c: &GroupConfusion) -> Option<f64> {
        match self {
            FairnessMetric::SP => statistical_parity(c),
            FairnessMetric::EO => equal_opportunity(c),
            FairnessMetric::PP => predictive_parity(c),
        }
    }
}

impl fmt::Display for FairnessMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FairnessMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FairnessMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown fairness metric `{s}`")))
    }
}

/// One fold-averaged fairness value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessValue {
    pub value: Option<f64>,
    /// Folds where the metric was defined.
    pub folds_used: usize,
}

impl FairnessValue {
    pub fn is_fair(&self, band: f64) -> bool {
        self.value.is_some_and(|v| v.abs() <= band)
    }
}

/// Fold-averaged SP/EO/PP per learner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub values: BTreeMap<LearnerId, BTreeMap<FairnessMetric, FairnessValue>>,
    /// Folds with degenerate learner training, per learner.
    #[serde(default)]
    pub degenerate_folds: BTreeMap<LearnerId, usize>,
}

impl FairnessReport {
    pub fn get(&self, learner: LearnerId, metric: FairnessMetric) -> FairnessValue {
        self.values
            .get(&learner)
            .and_then(|m| m.get(&metric))
            .copied()
            .unwrap_or(FairnessValue {
                value: None,
                folds_used: 0,
            })
    }

    /// Mean of each metric over the folds where it is defined.
    pub fn add_predictions(&mut self, preds: &FoldPredictions) {
        let per_fold: Vec<GroupConfusion> = (0..preds.k).map(|f| group_confusion(preds.fold(f))).collect();
        let mut row = BTreeMap::new();
        for metric in FairnessMetric::ALL {
            let defined: Vec<f64> = per_fold.iter().filter_map(|c| metric.evaluate(c)).collect();
            let value = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
            row.insert(
                metric,
                FairnessValue {
                    value,
                    folds_used: defined.len(),
                },
            );
        }
        self.values.insert(preds.learner, row);
        self.degenerate_folds
            .insert(preds.learner, preds.degenerate_folds.len());
    }

    pub fn from_predictions<'a>(preds: impl IntoIterator<Item = &'a FoldPredictions>) -> Self {
        let mut report = Self {
            values: BTreeMap::new(),
            degenerate_folds: BTreeMap::new(),
        };
        for p in preds {
            report.add_predictions(p);
        }
        report
    }

    /// Column name such as `SP_LR`.
    pub fn column(metric: FairnessMetric, learner: LearnerId) -> String {
        format!("{}_{}", metric.name(), learner.name())
    }

    /// (column, value) pairs in SP/EO/PP × LR/DT/KN order.
    pub fn flatten(&self) -> Vec<(String, Option<f64>)> {
        LearnerId::ALL
            .into_iter()
            .flat_map(|l| FairnessMetric::ALL.into_iter().map(move |m| (m, l)))
            .map(|(m, l)| (Self::column(m, l), self.get(l, m).value))
            .collect()
    }
}

/// Cross-validate all three learners and average fairness over folds.
pub fn fairness_report(
    ds: &TabularDataset,
    folds: usize,
    seed: u64,
    with_protected: bool,
) -> Result<FairnessReport> {
    let preds = LearnerId::ALL
        .into_iter()
        .map(|l| run_cv(ds, l, folds, seed, with_protected))
        .collect::<Result<Vec<_>>>()?;
    Ok(FairnessReport::from_predictions(&preds))
}
