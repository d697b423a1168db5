use crate::error::{Error, Result};
use crate::estimator::FitResult;
use crate::model::ProspectProbabilities;
use crate::trial::{Choice, DerivedTrial, FoldPlan};

use super::metrics::{accuracy, predict_choice};

/// Probabilities for every trial from the fit that did not train on it.
pub fn held_out_probabilities(
    trials: &[DerivedTrial],
    plan: &FoldPlan,
    fits: &[FitResult],
) -> Result<Vec<ProspectProbabilities>> {
    if plan.assignments.len() != trials.len() {
        return Err(Error::LengthMismatch {
            left: plan.assignments.len(),
            right: trials.len(),
        });
    }
    let mut by_fold = vec![None; plan.n_folds];
    for fit in fits {
        if let Some(k) = fit.fold.filter(|&k| k < plan.n_folds) {
            by_fold[k] = Some(&fit.params);
        }
    }
    trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let k = plan.fold_of(i);
            let params = by_fold[k].ok_or_else(|| {
                Error::invariant(
                    format!("subject {}", t.subject_id()),
                    format!("no fitted parameters for fold {k}"),
                )
            })?;
            Ok(params.probabilities(t))
        })
        .collect()
}

/// Accuracy on each held-out fold. Trials without a response are skipped;
/// with `fair_only` catch trials are skipped too.
pub fn fold_accuracies(
    trials: &[DerivedTrial],
    plan: &FoldPlan,
    probs: &[ProspectProbabilities],
    fair_only: bool,
) -> Result<Vec<f64>> {
    if probs.len() != trials.len() {
        return Err(Error::LengthMismatch {
            left: probs.len(),
            right: trials.len(),
        });
    }
    (0..plan.n_folds)
        .map(|k| {
            let (pred, resp): (Vec<Choice>, Vec<Choice>) = plan
                .test_indices(k)
                .into_iter()
                .filter(|&i| !(fair_only && trials[i].is_catch()))
                .filter_map(|i| Some((predict_choice(&probs[i]), trials[i].response().choice()?)))
                .unzip();
            accuracy(&pred, &resp)
        })
        .collect()
}

/// Mean and sample standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
