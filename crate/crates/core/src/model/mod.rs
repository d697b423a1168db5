//! The choice model: prospect probability `P = f + q` for the gamble/sure
//! pair, and the logit-CPT baseline.
//!
//! The utility factor `f` comes from a gain-domain power value function with
//! Prelec-II weighting pushed through a logit rule. The attraction factor `q`
//! combines up to three switchable components (time-amplified framing,
//! memory of the last outcome, need relative to the block target), squashes
//! their total with `tanh`, and scales it by `min(f_gamble, f_sure)`. That
//! scaling keeps both prospect probabilities inside [0, 1] without clamping.
//!
//! The CPT baseline places the reference point at the gamble's expected
//! value so the gamble straddles gains and losses and `lambda` matters.

mod attraction;
mod params;
mod utility;

pub use attraction::{attraction_factor, attraction_total, q_framing, q_memory, q_need, q_time};
pub(crate) use attraction::attraction_from_total;
pub use params::{AttractionParams, Component, ComponentMask, ModelKind, ParamSet, UtilityParams};
pub(crate) use utility::gain_utility;
pub use utility::{
    option_utility_gain, prelec_weight, utility_factors, value_fn, MIN_WEIGHT_PROB,
};

use serde::{Deserialize, Serialize};

use crate::trial::DerivedTrial;

/// Tolerance on the sum constraints of [`ProspectProbabilities`].
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

/// Utility factors, attraction factors and prospect probabilities for the
/// gamble and the sure option of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProspectProbabilities {
    pub f_gamble: f64,
    pub f_sure: f64,
    pub q_gamble: f64,
    pub q_sure: f64,
    pub p_gamble: f64,
    pub p_sure: f64,
}

impl ProspectProbabilities {
    /// Largest violation among `f_A + f_B = 1`, `q_A + q_B = 0` and
    /// `P_A + P_B = 1`.
    pub fn max_sum_error(&self) -> f64 {
        let f = (self.f_gamble + self.f_sure - 1.0).abs();
        let q = (self.q_gamble + self.q_sure).abs();
        let p = (self.p_gamble + self.p_sure - 1.0).abs();
        f.max(q).max(p)
    }

    /// Every probability constraint: sums within [`CONSTRAINT_TOLERANCE`],
    /// `f, P` in [0, 1], `q` in [-1, 1] and `|q| <= min(f_A, f_B)`.
    pub fn satisfies_constraints(&self) -> bool {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        self.max_sum_error() < CONSTRAINT_TOLERANCE
            && unit(self.f_gamble)
            && unit(self.f_sure)
            && unit(self.p_gamble)
            && unit(self.p_sure)
            && self.q_gamble.abs() <= 1.0
            && self.q_sure.abs() <= 1.0
            && self.q_gamble.abs() <= self.f_gamble.min(self.f_sure)
    }
}

/// Gain-domain utilities `(u_gamble, u_sure)`, reference point 0.
pub fn gain_utilities(trial: &DerivedTrial, up: &UtilityParams) -> (f64, f64) {
    let t = trial.trial();
    (
        gain_utility(t.initial_amount, t.win_prob, 0.0, up),
        gain_utility(t.sure_amount, 1.0, 0.0, up),
    )
}

/// Prospect probabilities for one trial under the QDT model.
pub fn prospect_probabilities(
    trial: &DerivedTrial,
    up: &UtilityParams,
    ap: &AttractionParams,
) -> ProspectProbabilities {
    let (u_gamble, u_sure) = gain_utilities(trial, up);
    let (f_gamble, f_sure) = utility_factors(u_gamble, u_sure, up);
    let (q_gamble, q_sure) = attraction_factor(trial, f_gamble, f_sure, ap);
    ProspectProbabilities {
        f_gamble,
        f_sure,
        q_gamble,
        q_sure,
        p_gamble: f_gamble + q_gamble,
        p_sure: f_sure + q_sure,
    }
}

/// Logit-CPT probability of choosing the gamble, with the reference point at
/// the gamble's expected value.
pub fn cpt_baseline_probability(trial: &DerivedTrial, up: &UtilityParams) -> f64 {
    let (u_gamble, u_sure) = cpt_utilities(trial, up);
    utility_factors(u_gamble, u_sure, up).0
}

/// CPT utilities `(u_gamble, u_sure)` relative to `r = p * S`.
pub fn cpt_utilities(trial: &DerivedTrial, up: &UtilityParams) -> (f64, f64) {
    let t = trial.trial();
    let reference = t.expected_gamble_value();
    let w = prelec_weight(t.win_prob, up);
    let u_gamble = w * value_fn(t.initial_amount - reference, up)
        + (1.0 - w) * value_fn(0.0 - reference, up);
    let u_sure = value_fn(t.sure_amount - reference, up);
    (u_gamble, u_sure)
}

impl ParamSet {
    /// Full factor breakdown. For CPT the utility factor is the logit
    /// probability and the attraction factor is 0.
    pub fn probabilities(&self, trial: &DerivedTrial) -> ProspectProbabilities {
        match &self.attraction {
            Some(ap) => prospect_probabilities(trial, &self.utility, ap),
            None => {
                let (u_gamble, u_sure) = cpt_utilities(trial, &self.utility);
                let (f_gamble, f_sure) = utility_factors(u_gamble, u_sure, &self.utility);
                ProspectProbabilities {
                    f_gamble,
                    f_sure,
                    q_gamble: 0.0,
                    q_sure: 0.0,
                    p_gamble: f_gamble,
                    p_sure: f_sure,
                }
            }
        }
    }

    /// Probability of choosing the gamble.
    pub fn gamble_probability(&self, trial: &DerivedTrial) -> f64 {
        match &self.attraction {
            Some(ap) => prospect_probabilities(trial, &self.utility, ap).p_gamble,
            None => cpt_baseline_probability(trial, &self.utility),
        }
    }
}
