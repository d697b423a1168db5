use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::grid_search;
use super::objective::ObjectiveSpec;
use super::simplex::{nelder_mead_minimize, SimplexConfig};
use crate::error::{Error, Result};
use crate::model::{ModelKind, ParamSet};
use crate::trial::{kfold_split, DerivedTrial, FoldPlan};

/// Settings shared by every fit in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub model: ModelKind,
    pub reg_weight: f64,
    /// Also penalize the tanh scale `a`.
    pub regularize_scale: bool,
    /// Keep catch trials in the training folds.
    pub include_catch_in_training: bool,
    pub simplex: SimplexConfig,
}

impl FitOptions {
    pub fn new(model: ModelKind) -> Self {
        FitOptions {
            model,
            reg_weight: 1.0,
            regularize_scale: false,
            include_catch_in_training: true,
            simplex: SimplexConfig::default(),
        }
    }

    pub fn with_reg_weight(mut self, reg_weight: f64) -> Self {
        self.reg_weight = reg_weight;
        self
    }

    pub fn without_catch_training(mut self) -> Self {
        self.include_catch_in_training = false;
        self
    }

    pub fn objective(&self, trials: Vec<DerivedTrial>) -> Result<ObjectiveSpec> {
        if !(self.reg_weight >= 0.0 && self.reg_weight.is_finite()) {
            return Err(Error::Config(format!(
                "reg_weight must be a non-negative number, got {}",
                self.reg_weight
            )));
        }
        let mut spec = ObjectiveSpec::new(trials, self.model)?.with_reg_weight(self.reg_weight);
        spec.regularize_scale = self.regularize_scale;
        spec.penalty_value = self.simplex.penalty_value;
        Ok(spec)
    }
}

/// One fitted parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub params: ParamSet,
    /// Held-out fold, or `None` for a fit on all trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold: Option<usize>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub start_point: Vec<f64>,
    pub start_objective: f64,
    pub n_train: usize,
}

/// Fits one parameter set to `trials` (grid start, then simplex).
pub fn fit_trials(trials: Vec<DerivedTrial>, options: &FitOptions) -> Result<FitResult> {
    let n_train = trials.len();
    let spec = options.objective(trials)?;
    let (start, start_value) = grid_search(&spec);
    let min = nelder_mead_minimize(|x| spec.value_at(x), &start, &options.simplex);
    // the start is a simplex vertex, so this only guards against NaN games
    let (point, value) = if min.value <= start_value {
        (min.point, min.value)
    } else {
        (start.clone(), start_value)
    };
    Ok(FitResult {
        params: spec.layout().decode(&point),
        fold: None,
        objective: value,
        iterations: min.iterations,
        converged: min.converged,
        start_point: start,
        start_objective: start_value,
        n_train,
    })
}

/// Training trials for fold `k`: every trial outside the fold, minus catch
/// trials when they are excluded.
pub fn training_set(
    trials: &[DerivedTrial],
    plan: &FoldPlan,
    k: usize,
    include_catch: bool,
) -> Vec<DerivedTrial> {
    plan.train_indices(k)
        .into_iter()
        .map(|i| &trials[i])
        .filter(|t| include_catch || !t.is_catch())
        .cloned()
        .collect()
}

/// Cross-validated fits for one subject: one [`FitResult`] per fold, each
/// trained on the other folds. Folds run in parallel.
pub fn fit_subject(
    trials: &[DerivedTrial],
    plan: &FoldPlan,
    options: &FitOptions,
) -> Result<Vec<FitResult>> {
    let Some(first) = trials.first() else {
        return Err(Error::Empty);
    };
    if plan.assignments.len() != trials.len() {
        return Err(Error::LengthMismatch {
            left: plan.assignments.len(),
            right: trials.len(),
        });
    }
    let subject = first.subject_id().to_owned();
    if let Some(other) = trials.iter().find(|t| t.subject_id() != subject) {
        return Err(Error::Config(format!(
            "fit_subject got trials for {} and {}",
            subject,
            other.subject_id()
        )));
    }
    (0..plan.n_folds)
        .into_par_iter()
        .map(|k| {
            let train = training_set(trials, plan, k, options.include_catch_in_training);
            if train.is_empty() {
                return Err(Error::TooFewTrials {
                    subject: subject.clone(),
                    available: 0,
                    required: 1,
                });
            }
            let mut fit = fit_trials(train, options)?;
            fit.fold = Some(k);
            Ok(fit)
        })
        .collect()
}

/// Cross-validated fits for one subject with a fresh fold plan.
pub fn cross_validate(
    trials: &[DerivedTrial],
    n_folds: usize,
    seed: u64,
    options: &FitOptions,
) -> Result<(FoldPlan, Vec<FitResult>)> {
    let plan = kfold_split(trials, n_folds, seed)?;
    let fits = fit_subject(trials, &plan, options)?;
    Ok((plan, fits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttractionParams, ComponentMask, UtilityParams};
    use crate::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// One block of fair trials answered by `truth`.
    fn sample(truth: &ParamSet, n: usize, seed: u64) -> Vec<DerivedTrial> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for i in 0..n {
            let s = [25.0, 50.0, 75.0, 100.0][i % 4];
            let p = [0.2, 0.4, 0.6, 0.8][(i / 4) % 4];
            let raw = GameTrial {
                subject_id: "fit".into(),
                block_id: i as u32,
                trial_index: 0,
                initial_amount: s,
                win_prob: p,
                framing: if (i / 16) % 2 == 0 { Framing::Gain } else { Framing::Loss },
                time_limit: if (i / 32) % 2 == 0 { 1.0 } else { 3.0 },
                need_level: 0.0,
                current_score: Some(0.0),
                sure_amount: p * s,
                previous_outcome: Some(PreviousOutcome::Absent),
                is_catch: false,
                response: Response::Missing,
            };
            let pg = truth.gamble_probability(&derive_features(std::slice::from_ref(&raw)).unwrap()[0]);
            let mut t = raw;
            t.response = if rng.gen_bool(pg) { Response::Gamble } else { Response::Sure };
            out.push(t);
        }
        derive_features(&out).unwrap()
    }

    fn truth() -> ParamSet {
        let mask: ComponentMask = "time_frame".parse().unwrap();
        ParamSet::qdt(
            UtilityParams::new(0.9, 1.0, 0.8, 0.3),
            AttractionParams {
                c1: 0.5,
                c2: 0.2,
                a: 0.5,
                ..AttractionParams::zero(mask)
            },
        )
    }

    #[test]
    fn fit_improves_on_its_start() {
        let trials = sample(&truth(), 128, 1);
        let options = FitOptions::new(truth().kind());
        let fit = fit_trials(trials.clone(), &options).unwrap();
        assert!(fit.objective <= fit.start_objective);
        assert_eq!(fit.n_train, 128);
        let spec = options.objective(trials).unwrap();
        assert_eq!(spec.value(&fit.params), fit.objective);
        fit.params.validate().unwrap();
    }

    #[test]
    fn six_folds_six_results() {
        let trials = sample(&truth(), 96, 2);
        let options = FitOptions::new(ModelKind::Cpt);
        let (plan, fits) = cross_validate(&trials, 6, 42, &options).unwrap();
        assert_eq!(fits.len(), 6);
        for (k, fit) in fits.iter().enumerate() {
            assert_eq!(fit.fold, Some(k));
            assert_eq!(fit.n_train, 96 - plan.test_indices(k).len());
            assert!(fit.params.attraction.is_none());
        }
    }

    #[test]
    fn catch_trials_can_be_held_out_of_training() {
        let mut raw: Vec<GameTrial> = sample(&truth(), 24, 3)
            .into_iter()
            .map(DerivedTrial::into_trial)
            .collect();
        for t in raw.iter_mut().step_by(4) {
            t.is_catch = true;
        }
        let trials = derive_features(&raw).unwrap();
        let plan = kfold_split(&trials, 3, 9).unwrap();
        let with = training_set(&trials, &plan, 0, true);
        let without = training_set(&trials, &plan, 0, false);
        assert!(without.iter().all(|t| !t.is_catch()));
        assert_eq!(
            with.len() - without.len(),
            with.iter().filter(|t| t.is_catch()).count()
        );
    }

    #[test]
    fn mismatched_plan_is_rejected() {
        let trials = sample(&truth(), 12, 4);
        let plan = kfold_split(&trials[..10], 2, 1).unwrap();
        assert!(matches!(
            fit_subject(&trials, &plan, &FitOptions::new(ModelKind::Cpt)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn fit_result_json_carries_the_parameter_block() {
        let trials = sample(&truth(), 32, 5);
        let mut fit = fit_trials(trials, &FitOptions::new(ModelKind::Cpt)).unwrap();
        fit.fold = Some(2);
        let json = serde_json::to_value(&fit).unwrap();
        assert!(json.get("utility").is_some());
        assert!(json.get("attraction").is_none());
        assert_eq!(json["fold"], 2);
        let back: FitResult = serde_json::from_value(json).unwrap();
        assert_eq!(back, fit);
    }
}
