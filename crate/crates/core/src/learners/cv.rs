use serde::{Deserialize, Serialize};

use super::{LearnerId, Model};
use crate::data::{stratified_folds, FeatureScaling, TabularDataset};
use crate::error::Result;

/// Out-of-fold prediction for one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPrediction {
    pub row_index: usize,
    pub fold: usize,
    pub y_true: u8,
    pub y_pred: u8,
    pub protected: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPredictions {
    pub learner: LearnerId,
    pub k: usize,
    /// Sorted by (fold, row_index).
    pub predictions: Vec<FoldPrediction>,
    /// Folds whose model hit a degenerate training case.
    pub degenerate_folds: Vec<usize>,
}

impl FoldPredictions {
    pub fn fold(&self, f: usize) -> impl Iterator<Item = &FoldPrediction> + '_ {
        self.predictions.iter().filter(move |p| p.fold == f)
    }
}

/// Stratified k-fold cross-validation.
///
/// For each fold the model is trained on the other folds; standardization is
/// fit on the training rows only and applied to both splits. With
/// `with_protected` the protected attribute is appended as an extra input
/// column for the learner (it never becomes a dataset feature).
pub fn run_cv(
    ds: &TabularDataset,
    learner: LearnerId,
    k: usize,
    seed: u64,
    with_protected: bool,
) -> Result<FoldPredictions> {
    let folds = stratified_folds(ds, k, seed)?;
    let d = ds.n_features() + usize::from(with_protected);
    let input = |rows: &[usize]| {
        let mut x = Vec::with_capacity(rows.len() * d);
        for &r in rows {
            x.extend_from_slice(ds.row(r));
            if with_protected {
                x.push(ds.protected()[r] as f64);
            }
        }
        x
    };
    let mut predictions = Vec::with_capacity(ds.n_rows());
    let mut degenerate_folds = Vec::new();
    for f in 0..k {
        let train = folds.train_rows(f);
        let test = folds.test_rows(f);
        let train_x = input(&train);
        let scaling = FeatureScaling::fit(&train_x, d);
        let train_y: Vec<u8> = train.iter().map(|&r| ds.target()[r]).collect();
        let model = Model::fit(learner, &scaling.apply(&train_x), d, &train_y);
        if model.degenerate() {
            degenerate_folds.push(f);
        }
        let test_x = scaling.apply(&input(&test));
        for (i, &r) in test.iter().enumerate() {
            predictions.push(FoldPrediction {
                row_index: r,
                fold: f,
                y_true: ds.target()[r],
                y_pred: model.predict(&test_x[i * d..(i + 1) * d]),
                protected: ds.protected()[r],
            });
        }
    }
    Ok(FoldPredictions {
        learner,
        k,
        predictions,
        degenerate_folds,
    })
}

/// CSV with columns row_index, fold, y_true, y_pred, protected.
pub fn write_predictions_csv(preds: &FoldPredictions) -> Result<Vec<u8>> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for p in &preds.predictions {
        wtr.serialize(p)?;
    }
    wtr.into_inner()
        .map_err(|e| crate::error::Error::io("<csv buffer>", e.into_error()))
}
