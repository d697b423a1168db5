//! Trial records, per-trial feature derivation and cross-validation splits.
//!
//! A [`GameTrial`] is one sure-versus-gamble decision exactly as recorded.
//! [`derive_features`] turns an ordered run of trials into [`DerivedTrial`]s,
//! filling in the running score and the previous outcome when the source
//! omits them, and [`kfold_split`] assigns each subject's trials to folds.

mod features;
mod folds;
mod io;

pub use features::{derive_features, gamble_std, DerivedTrial};
pub use folds::{kfold_split, FoldPlan, DEFAULT_FOLDS};
pub use io::{
    load_trials, read_trials, write_features, write_trials, TrialSet, CSV_COLUMNS, FEATURE_COLUMNS,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for the fair-game identity `sure = p * S` and for
/// cross-checking stated scores against recomputed ones.
pub const FAIRNESS_TOLERANCE: f64 = 1e-6;

/// How the sure option was described to the subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Framing {
    /// "Keep 40"
    Gain,
    /// "Lose 60"
    Loss,
}

impl Framing {
    /// +1 for a gain frame, -1 for a loss frame.
    pub fn indicator(self) -> f64 {
        match self {
            Framing::Gain => 1.0,
            Framing::Loss => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Framing::Gain => "gain",
            Framing::Loss => "loss",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Framing::Gain => Framing::Loss,
            Framing::Loss => Framing::Gain,
        }
    }
}

/// Result of the subject's previous trial within the same block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreviousOutcome {
    Won,
    Lost,
    Sure,
    /// No earlier trial in the block.
    Absent,
}

impl PreviousOutcome {
    /// +1 after a won gamble, -1 after a lost one, 0 otherwise.
    pub fn indicator(self) -> f64 {
        match self {
            PreviousOutcome::Won => 1.0,
            PreviousOutcome::Lost => -1.0,
            PreviousOutcome::Sure | PreviousOutcome::Absent => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PreviousOutcome::Won => "won",
            PreviousOutcome::Lost => "lost",
            PreviousOutcome::Sure => "sure",
            PreviousOutcome::Absent => "none",
        }
    }
}

/// A binary decision: take the gamble or the sure amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    Gamble,
    Sure,
}

impl Choice {
    /// 1 for gamble, 0 for sure.
    pub fn label(self) -> u8 {
        match self {
            Choice::Gamble => 1,
            Choice::Sure => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Choice::Gamble => "gamble",
            Choice::Sure => "sure",
        }
    }
}

/// Observed response, possibly missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Response {
    Gamble,
    Sure,
    Missing,
}

impl Response {
    pub fn choice(self) -> Option<Choice> {
        match self {
            Response::Gamble => Some(Choice::Gamble),
            Response::Sure => Some(Choice::Sure),
            Response::Missing => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Response::Gamble => "gamble",
            Response::Sure => "sure",
            Response::Missing => "",
        }
    }
}

impl From<Choice> for Response {
    fn from(choice: Choice) -> Self {
        match choice {
            Choice::Gamble => Response::Gamble,
            Choice::Sure => Response::Sure,
        }
    }
}

/// One decision problem as presented to a subject.
///
/// `current_score` and `previous_outcome` are optional in the source data;
/// [`derive_features`] reconstructs them and the derived copy always carries
/// `Some`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameTrial {
    pub subject_id: String,
    pub block_id: u32,
    /// Position within the block; strictly increasing.
    pub trial_index: u32,
    pub initial_amount: f64,
    pub win_prob: f64,
    pub framing: Framing,
    /// Response deadline in seconds.
    pub time_limit: f64,
    /// Minimum block score required to keep the earned points.
    pub need_level: f64,
    /// Cumulative block score at the start of the trial.
    pub current_score: Option<f64>,
    pub sure_amount: f64,
    pub previous_outcome: Option<PreviousOutcome>,
    pub is_catch: bool,
    pub response: Response,
}

impl GameTrial {
    /// Checks the per-row invariants: probability strictly inside (0, 1),
    /// positive stake, non-negative levels, and the fair-game identity on
    /// non-catch trials.
    pub fn validate(&self) -> Result<()> {
        let ctx = || {
            format!(
                "subject {} block {} trial {}",
                self.subject_id, self.block_id, self.trial_index
            )
        };
        if !(self.win_prob > 0.0 && self.win_prob < 1.0) {
            return Err(Error::invariant(
                ctx(),
                format!("win_prob {} outside (0, 1)", self.win_prob),
            ));
        }
        if !(self.initial_amount > 0.0 && self.initial_amount.is_finite()) {
            return Err(Error::invariant(
                ctx(),
                format!("initial_amount {} must be positive", self.initial_amount),
            ));
        }
        if !(self.time_limit > 0.0 && self.time_limit.is_finite()) {
            return Err(Error::invariant(
                ctx(),
                format!("time_limit {} must be positive", self.time_limit),
            ));
        }
        if !(self.need_level >= 0.0 && self.need_level.is_finite()) {
            return Err(Error::invariant(
                ctx(),
                format!("need_level {} must be non-negative", self.need_level),
            ));
        }
        if !(self.sure_amount >= 0.0 && self.sure_amount.is_finite()) {
            return Err(Error::invariant(
                ctx(),
                format!("sure_amount {} must be non-negative", self.sure_amount),
            ));
        }
        if let Some(score) = self.current_score {
            if !(score >= 0.0 && score.is_finite()) {
                return Err(Error::invariant(
                    ctx(),
                    format!("current_score {score} must be non-negative"),
                ));
            }
        }
        if !self.is_catch {
            let fair = self.win_prob * self.initial_amount;
            if (self.sure_amount - fair).abs() > FAIRNESS_TOLERANCE {
                return Err(Error::invariant(
                    ctx(),
                    format!(
                        "non-catch trial is not fair: sure_amount {} != win_prob * initial_amount {}",
                        self.sure_amount, fair
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Expected value of the gamble, `p * S`.
    pub fn expected_gamble_value(&self) -> f64 {
        self.win_prob * self.initial_amount
    }
}
