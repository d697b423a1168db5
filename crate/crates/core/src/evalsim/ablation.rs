use serde::{Deserialize, Serialize};

use super::holdout::{fold_accuracies, held_out_probabilities, mean_sd};
use crate::error::{Error, Result};
use crate::estimator::{fit_subject, FitOptions};
use crate::trial::{DerivedTrial, FoldPlan};

/// Cross-validated accuracy on fair held-out trials with and without catch
/// trials in training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatchAblation {
    pub subject_id: String,
    pub with_catch: f64,
    pub without_catch: f64,
    /// Training trials summed over folds.
    pub n_train_with: usize,
    pub n_train_without: usize,
    /// Fair trials scored across all test folds.
    pub n_test: usize,
}

impl CatchAblation {
    pub fn gain(&self) -> f64 {
        self.with_catch - self.without_catch
    }
}

/// Fits the subject twice, once with catch trials in every training fold
/// and once without, and scores both on the fair held-out trials. The
/// `include_catch_in_training` field of `options` is ignored.
pub fn catch_ablation(
    trials: &[DerivedTrial],
    plan: &FoldPlan,
    options: &FitOptions,
) -> Result<CatchAblation> {
    let subject = trials.first().ok_or(Error::Empty)?.subject_id().to_owned();
    if !trials.iter().any(DerivedTrial::is_catch) {
        return Err(Error::NoCatchTrials(subject));
    }
    let run = |include: bool| -> Result<(f64, usize)> {
        let opts = FitOptions {
            include_catch_in_training: include,
            ..*options
        };
        let fits = fit_subject(trials, plan, &opts)?;
        let probs = held_out_probabilities(trials, plan, &fits)?;
        let acc = fold_accuracies(trials, plan, &probs, true)?;
        Ok((mean_sd(&acc).0, fits.iter().map(|f| f.n_train).sum()))
    };
    let (with_catch, n_train_with) = run(true)?;
    let (without_catch, n_train_without) = run(false)?;
    let n_test = trials
        .iter()
        .filter(|t| !t.is_catch() && t.response().choice().is_some())
        .count();
    Ok(CatchAblation {
        subject_id: subject,
        with_catch,
        without_catch,
        n_train_with,
        n_train_without,
        n_test,
    })
}
