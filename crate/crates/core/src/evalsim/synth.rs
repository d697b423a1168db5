use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttractionParams, ComponentMask, ModelKind, ParamSet, UtilityParams};
use crate::seeding::{subject_rng, SYNTH_STREAM, TRUTH_STREAM};
use crate::trial::{DerivedTrial, Framing, GameTrial, PreviousOutcome, Response, FAIRNESS_TOLERANCE};

/// A deliberately unfair trial with a dominant option.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatchSpec {
    pub initial_amount: f64,
    pub win_prob: f64,
    pub sure_amount: f64,
    pub framing: Framing,
}

impl CatchSpec {
    fn new(initial_amount: f64, win_prob: f64, sure_amount: f64, framing: Framing) -> Self {
        CatchSpec {
            initial_amount,
            win_prob,
            sure_amount,
            framing,
        }
    }
}

/// Built-in experiment layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Dataset1,
    Dataset2,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Dataset1 => "dataset1",
            Shape::Dataset2 => "dataset2",
        }
    }

    pub fn descriptor(self) -> ExperimentDescriptor {
        match self {
            Shape::Dataset1 => ExperimentDescriptor::dataset1(),
            Shape::Dataset2 => ExperimentDescriptor::dataset2(),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dataset1" => Ok(Shape::Dataset1),
            "dataset2" => Ok(Shape::Dataset2),
            other => Err(Error::InvalidDescriptor(format!(
                "unknown shape `{other}` (expected dataset1 or dataset2)"
            ))),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Block structure of a gambling experiment.
///
/// Every block presents each (amount, probability, frame) combination and
/// each catch trial `presentations` times in random order. There is one
/// block per (time limit, need level) pair, repeated `block_repeats` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDescriptor {
    pub amounts: Vec<f64>,
    pub win_probs: Vec<f64>,
    pub framings: Vec<Framing>,
    pub catch_trials: Vec<CatchSpec>,
    pub presentations: usize,
    pub time_limits: Vec<f64>,
    pub need_levels: Vec<f64>,
    pub block_repeats: usize,
}

const PROBS: [f64; 4] = [0.3, 0.4, 0.6, 0.7];

impl ExperimentDescriptor {
    /// Amounts 25 to 100, 40 distinct trials shown twice per block, 12
    /// blocks: 960 trials.
    pub fn dataset1() -> Self {
        use Framing::*;
        ExperimentDescriptor {
            amounts: vec![25.0, 50.0, 75.0, 100.0],
            win_probs: PROBS.to_vec(),
            framings: vec![Gain, Loss],
            catch_trials: vec![
                CatchSpec::new(100.0, 0.7, 40.0, Gain),
                CatchSpec::new(75.0, 0.7, 30.0, Loss),
                CatchSpec::new(100.0, 0.6, 30.0, Loss),
                CatchSpec::new(50.0, 0.7, 20.0, Gain),
                CatchSpec::new(100.0, 0.3, 50.0, Gain),
                CatchSpec::new(75.0, 0.3, 40.0, Loss),
                CatchSpec::new(50.0, 0.4, 35.0, Gain),
                CatchSpec::new(25.0, 0.3, 15.0, Loss),
            ],
            presentations: 2,
            time_limits: vec![1.0, 3.0],
            need_levels: vec![0.0, 2500.0, 3500.0],
            block_repeats: 2,
        }
    }

    /// Twelve amounts around 20, 40, 60 and 80, 104 trials per block, six
    /// blocks: 624 trials.
    pub fn dataset2() -> Self {
        use Framing::*;
        ExperimentDescriptor {
            amounts: vec![
                19.0, 20.0, 21.0, 39.0, 40.0, 41.0, 59.0, 60.0, 61.0, 79.0, 80.0, 81.0,
            ],
            win_probs: PROBS.to_vec(),
            framings: vec![Gain, Loss],
            catch_trials: vec![
                CatchSpec::new(80.0, 0.7, 32.0, Gain),
                CatchSpec::new(60.0, 0.7, 24.0, Loss),
                CatchSpec::new(80.0, 0.6, 24.0, Loss),
                CatchSpec::new(40.0, 0.7, 16.0, Gain),
                CatchSpec::new(80.0, 0.3, 40.0, Gain),
                CatchSpec::new(60.0, 0.3, 32.0, Loss),
                CatchSpec::new(40.0, 0.4, 28.0, Gain),
                CatchSpec::new(20.0, 0.3, 12.0, Loss),
            ],
            presentations: 1,
            time_limits: vec![1.0, 3.0],
            need_levels: vec![0.0, 2800.0, 3600.0],
            block_repeats: 1,
        }
    }

    pub fn distinct_trials(&self) -> usize {
        self.amounts.len() * self.win_probs.len() * self.framings.len() + self.catch_trials.len()
    }

    pub fn trials_per_block(&self) -> usize {
        self.distinct_trials() * self.presentations
    }

    pub fn n_blocks(&self) -> usize {
        self.time_limits.len() * self.need_levels.len() * self.block_repeats
    }

    pub fn trials_per_subject(&self) -> usize {
        self.trials_per_block() * self.n_blocks()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDescriptor(msg));
        if self.amounts.is_empty() || self.win_probs.is_empty() || self.framings.is_empty() {
            return bad("amounts, win_probs and framings must be non-empty".into());
        }
        if self.time_limits.is_empty() || self.need_levels.is_empty() {
            return bad("time_limits and need_levels must be non-empty".into());
        }
        if self.presentations == 0 || self.block_repeats == 0 {
            return bad("presentations and block_repeats must be at least 1".into());
        }
        if let Some(a) = self.amounts.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
            return bad(format!("amount {a} must be positive"));
        }
        if let Some(p) = self.win_probs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
            return bad(format!("win probability {p} outside (0, 1)"));
        }
        if let Some(t) = self.time_limits.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return bad(format!("time limit {t} must be positive"));
        }
        if let Some(n) = self.need_levels.iter().find(|n| !(**n >= 0.0 && n.is_finite())) {
            return bad(format!("need level {n} must be non-negative"));
        }
        for c in &self.catch_trials {
            let valid = c.initial_amount > 0.0
                && c.win_prob > 0.0
                && c.win_prob < 1.0
                && c.sure_amount >= 0.0;
            if !valid {
                return bad(format!("invalid catch trial {c:?}"));
            }
            if (c.sure_amount - c.win_prob * c.initial_amount).abs() <= FAIRNESS_TOLERANCE {
                return bad(format!("catch trial {c:?} is fair"));
            }
        }
        Ok(())
    }

    /// One block's problems before shuffling: `(amount, p, sure, frame, catch)`.
    fn block_items(&self) -> Vec<(f64, f64, f64, Framing, bool)> {
        let mut items = Vec::with_capacity(self.trials_per_block());
        for _ in 0..self.presentations {
            for &s in &self.amounts {
                for &p in &self.win_probs {
                    for &frame in &self.framings {
                        items.push((s, p, p * s, frame, false));
                    }
                }
            }
            for c in &self.catch_trials {
                items.push((c.initial_amount, c.win_prob, c.sure_amount, c.framing, true));
            }
        }
        items
    }
}

/// Ground truth for one generated subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSubject {
    pub subject_id: String,
    pub true_params: ParamSet,
    /// Presented trials without responses, scores or outcomes.
    pub trial_schedule: Vec<GameTrial>,
    pub rng_seed: u64,
}

/// Builds a subject's schedule and simulates their answers.
///
/// Blocks come in random order and problems are shuffled within each block.
/// Each response is a Bernoulli draw with the model's gamble probability
/// given the running score and the previous outcome; a chosen gamble is then
/// resolved with its win probability to update the score.
pub fn generate_synthetic_subject(
    descriptor: &ExperimentDescriptor,
    subject_id: &str,
    true_params: &ParamSet,
    seed: u64,
) -> Result<(Vec<GameTrial>, SyntheticSubject)> {
    descriptor.validate()?;
    true_params
        .validate()
        .map_err(|e| Error::InvalidDescriptor(format!("true parameters: {e}")))?;
    let mut rng = subject_rng(seed, subject_id, SYNTH_STREAM);

    let mut blocks = Vec::with_capacity(descriptor.n_blocks());
    for _ in 0..descriptor.block_repeats {
        for &tl in &descriptor.time_limits {
            for &need in &descriptor.need_levels {
                blocks.push((tl, need));
            }
        }
    }
    blocks.shuffle(&mut rng);

    let mut trials = Vec::with_capacity(descriptor.trials_per_subject());
    let mut schedule = Vec::with_capacity(descriptor.trials_per_subject());
    for (b, &(time_limit, need_level)) in blocks.iter().enumerate() {
        let mut items = descriptor.block_items();
        items.shuffle(&mut rng);
        let mut score = 0.0;
        let mut previous = PreviousOutcome::Absent;
        for (i, &(s, p, sure, framing, is_catch)) in items.iter().enumerate() {
            let presented = GameTrial {
                subject_id: subject_id.to_owned(),
                block_id: b as u32 + 1,
                trial_index: i as u32 + 1,
                initial_amount: s,
                win_prob: p,
                framing,
                time_limit,
                need_level,
                current_score: None,
                sure_amount: sure,
                previous_outcome: None,
                is_catch,
                response: Response::Missing,
            };
            schedule.push(presented.clone());
            let derived = DerivedTrial::with_state(presented, score, previous);
            let p_gamble = true_params.gamble_probability(&derived);
            let mut trial = derived.into_trial();
            if rng.gen_bool(p_gamble.clamp(0.0, 1.0)) {
                trial.response = Response::Gamble;
                if rng.gen_bool(p) {
                    score += s;
                    previous = PreviousOutcome::Won;
                } else {
                    previous = PreviousOutcome::Lost;
                }
            } else {
                trial.response = Response::Sure;
                score += sure;
                previous = PreviousOutcome::Sure;
            }
            trials.push(trial);
        }
    }
    let subject = SyntheticSubject {
        subject_id: subject_id.to_owned(),
        true_params: *true_params,
        trial_schedule: schedule,
        rng_seed: seed,
    };
    Ok((trials, subject))
}

/// Draws plausible true parameters for a synthetic subject near the fitting
/// grid. Enabled attraction weights have magnitude at least 0.05.
pub fn draw_true_params(model: ModelKind, subject_id: &str, seed: u64) -> ParamSet {
    let mut rng = subject_rng(seed, subject_id, TRUTH_STREAM);
    let utility = UtilityParams::new(
        rng.gen_range(0.6..1.0),
        rng.gen_range(0.7..1.3),
        rng.gen_range(0.6..1.0),
        rng.gen_range(0.1..0.6),
    );
    match model {
        ModelKind::Cpt => ParamSet::cpt(utility.with_lambda(rng.gen_range(1.0..2.5))),
        ModelKind::Qdt(mask) => {
            let signed = |rng: &mut rand_chacha::ChaCha8Rng| {
                let m: f64 = rng.gen_range(0.05..0.2);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            };
            let mut ap = AttractionParams::zero(mask);
            if mask.time_frame {
                ap.c1 = rng.gen_range(0.05..0.5);
                ap.c2 = rng.gen_range(0.05..0.5);
            }
            if mask.memory {
                ap.c3 = signed(&mut rng);
            }
            if mask.need {
                ap.c4 = signed(&mut rng);
            }
            if !mask.is_empty() {
                ap.a = rng.gen_range(0.005..0.02);
            }
            ParamSet::qdt(utility, ap)
        }
    }
}

/// Several synthetic subjects with drawn parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCohort {
    pub trials: Vec<GameTrial>,
    pub subjects: Vec<SyntheticSubject>,
}

/// Subject ids `synth_001`, `synth_002`, ...
pub fn synthetic_subject_id(i: usize) -> String {
    format!("synth_{:03}", i + 1)
}

/// `n_subjects` subjects of one experiment shape, each with parameters from
/// [`draw_true_params`].
pub fn generate_cohort(
    descriptor: &ExperimentDescriptor,
    n_subjects: usize,
    model: ModelKind,
    seed: u64,
) -> Result<SyntheticCohort> {
    if n_subjects == 0 {
        return Err(Error::InvalidDescriptor("need at least one subject".into()));
    }
    let parts: Vec<(Vec<GameTrial>, SyntheticSubject)> = (0..n_subjects)
        .into_par_iter()
        .map(|i| {
            let id = synthetic_subject_id(i);
            let truth = draw_true_params(model, &id, seed);
            generate_synthetic_subject(descriptor, &id, &truth, seed)
        })
        .collect::<Result<_>>()?;
    let mut cohort = SyntheticCohort {
        trials: Vec::with_capacity(n_subjects * descriptor.trials_per_subject()),
        subjects: Vec::with_capacity(n_subjects),
    };
    for (trials, subject) in parts {
        cohort.trials.extend(trials);
        cohort.subjects.push(subject);
    }
    Ok(cohort)
}

/// Default mask for synthetic ground truth: every component on.
pub fn full_model() -> ModelKind {
    ModelKind::Qdt(ComponentMask::ALL)
}
