//! Quantum Decision Theory (QDT) models of individual choice between a
//! gamble and a sure amount.
//!
//! A prospect probability is a utility factor plus an attraction factor,
//! `P = f + q`. The utility factor is a logit over gain-domain utilities
//! (power value function, Prelec-II weights). The attraction factor collects
//! framing under time pressure, memory of the last outcome, and need relative
//! to a block target. A logit-CPT model is the baseline.
//!
//! - [`trial`]: the trial CSV schema, running-score reconstruction, features
//!   and per-subject folds.
//! - [`model`]: utility and attraction factors and prospect probabilities.
//! - [`estimator`]: regularized likelihood, grid start, Nelder-Mead and
//!   cross-validated fitting.
//! - [`evalsim`]: accuracy, calibration, factor histograms, choice
//!   simulation, catch-trial ablation and synthetic subjects.
//! - [`cli`]: the `qdt-choice` command line.
//!
//! ```
//! use qdt_choice::model::{prospect_probabilities, AttractionParams, ComponentMask, UtilityParams};
//! use qdt_choice::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};
//!
//! let raw = GameTrial {
//!     subject_id: "s1".into(),
//!     block_id: 1,
//!     trial_index: 1,
//!     initial_amount: 100.0,
//!     win_prob: 0.4,
//!     framing: Framing::Loss,
//!     time_limit: 1.0,
//!     need_level: 2500.0,
//!     current_score: None,
//!     sure_amount: 40.0,
//!     previous_outcome: None,
//!     is_catch: false,
//!     response: Response::Gamble,
//! };
//! let trial = &derive_features(&[raw]).unwrap()[0];
//! assert_eq!(trial.previous_outcome(), PreviousOutcome::Absent);
//!
//! let up = UtilityParams::new(0.88, 1.0, 0.74, 0.5);
//! let ap = AttractionParams { c1: 0.3, c2: 0.4, c3: 0.0, c4: 0.0, a: 0.05, mask: ComponentMask::ALL };
//! let p = prospect_probabilities(trial, &up, &ap);
//! assert!((p.p_gamble + p.p_sure - 1.0).abs() < 1e-12);
//! assert!(p.q_gamble.abs() <= p.f_gamble.min(p.f_sure));
//! ```

pub mod cli;
pub mod error;
pub mod estimator;
pub mod evalsim;
pub mod model;
mod seeding;
pub mod trial;

pub use error::{Error, Result};
