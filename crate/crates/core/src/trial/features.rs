use std::collections::HashSet;

use serde::Serialize;

use super::{GameTrial, PreviousOutcome, Response, FAIRNESS_TOLERANCE};
use crate::error::{Error, Result};

/// Standard deviation of the two-outcome gamble paying `initial_amount` with
/// probability `win_prob` and nothing otherwise.
pub fn gamble_std(initial_amount: f64, win_prob: f64) -> f64 {
    initial_amount * (win_prob * (1.0 - win_prob)).sqrt()
}

/// A trial with its running score and previous outcome resolved, plus the
/// features the attraction components consume.
///
/// Only [`derive_features`] constructs these, so every instance satisfies the
/// [`GameTrial`] invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedTrial {
    trial: GameTrial,
    std: f64,
    need_gap: f64,
}

impl DerivedTrial {
    pub fn trial(&self) -> &GameTrial {
        &self.trial
    }

    pub fn into_trial(self) -> GameTrial {
        self.trial
    }

    /// Standard deviation of the gamble's outcomes; the sure option has 0.
    pub fn std(&self) -> f64 {
        self.std
    }

    /// `need_level - current_score`; positive while behind target.
    pub fn need_gap(&self) -> f64 {
        self.need_gap
    }

    pub fn current_score(&self) -> f64 {
        self.trial.current_score.unwrap_or(0.0)
    }

    pub fn previous_outcome(&self) -> PreviousOutcome {
        self.trial
            .previous_outcome
            .unwrap_or(PreviousOutcome::Absent)
    }

    pub fn subject_id(&self) -> &str {
        &self.trial.subject_id
    }

    pub fn is_catch(&self) -> bool {
        self.trial.is_catch
    }

    pub fn response(&self) -> Response {
        self.trial.response
    }

    /// Wraps a trial whose score and previous outcome are already known.
    /// The caller is responsible for the row invariants.
    pub(crate) fn with_state(mut trial: GameTrial, score: f64, previous: PreviousOutcome) -> Self {
        trial.current_score = Some(score);
        trial.previous_outcome = Some(previous);
        DerivedTrial {
            std: gamble_std(trial.initial_amount, trial.win_prob),
            need_gap: trial.need_level - score,
            trial,
        }
    }
}

/// Resolves running scores and previous outcomes and computes per-trial
/// features.
///
/// Input must be grouped by (subject, block) with `trial_index` strictly
/// increasing inside each block. Within a block the first trial starts at
/// score 0 with no previous outcome unless the source states otherwise. A
/// missing previous outcome after a gamble is inferred from the score
/// increment, and a missing score is accumulated from the previous payoff.
/// Stated scores must agree with the recomputed ones.
pub fn derive_features(trials: &[GameTrial]) -> Result<Vec<DerivedTrial>> {
    let mut out = Vec::with_capacity(trials.len());
    let mut seen_blocks: HashSet<(&str, u32)> = HashSet::new();
    let mut start = 0;
    while start < trials.len() {
        let key = (trials[start].subject_id.as_str(), trials[start].block_id);
        let mut end = start + 1;
        while end < trials.len()
            && trials[end].subject_id == key.0
            && trials[end].block_id == key.1
        {
            end += 1;
        }
        if !seen_blocks.insert(key) {
            return Err(Error::OrderingError {
                subject: key.0.to_owned(),
                block: key.1,
                reason: "block rows are not contiguous".into(),
            });
        }
        derive_block(&trials[start..end], &mut out)?;
        start = end;
    }
    Ok(out)
}

fn derive_block(block: &[GameTrial], out: &mut Vec<DerivedTrial>) -> Result<()> {
    let mut prev: Option<(&GameTrial, f64)> = None;
    for trial in block {
        trial.validate()?;
        let ctx = || {
            format!(
                "subject {} block {} trial {}",
                trial.subject_id, trial.block_id, trial.trial_index
            )
        };

        let (outcome, score) = match prev {
            None => (
                trial.previous_outcome.unwrap_or(PreviousOutcome::Absent),
                trial.current_score.unwrap_or(0.0),
            ),
            Some((last, last_score)) => {
                if trial.trial_index <= last.trial_index {
                    return Err(Error::OrderingError {
                        subject: trial.subject_id.clone(),
                        block: trial.block_id,
                        reason: format!(
                            "trial_index {} follows {}",
                            trial.trial_index, last.trial_index
                        ),
                    });
                }
                let outcome = match trial.previous_outcome {
                    Some(stated) => stated,
                    None => infer_outcome(last, last_score, trial.current_score)
                        .ok_or_else(|| {
                            Error::invariant(
                                ctx(),
                                "previous outcome is missing and cannot be inferred from scores",
                            )
                        })?,
                };
                let payoff = payoff(last, outcome).ok_or_else(|| {
                    Error::invariant(
                        ctx(),
                        format!(
                            "previous outcome `{}` is inconsistent with previous response `{}`",
                            outcome.as_str(),
                            last.response.as_str()
                        ),
                    )
                })?;
                let recomputed = last_score + payoff;
                let score = match trial.current_score {
                    Some(stated) if (stated - recomputed).abs() > FAIRNESS_TOLERANCE => {
                        return Err(Error::invariant(
                            ctx(),
                            format!("stated score {stated} != recomputed score {recomputed}"),
                        ))
                    }
                    Some(stated) => stated,
                    None => recomputed,
                };
                (outcome, score)
            }
        };

        let mut resolved = trial.clone();
        resolved.previous_outcome = Some(outcome);
        resolved.current_score = Some(score);
        out.push(DerivedTrial {
            std: gamble_std(trial.initial_amount, trial.win_prob),
            need_gap: trial.need_level - score,
            trial: resolved,
        });
        prev = Some((trial, score));
    }
    Ok(())
}

fn infer_outcome(last: &GameTrial, last_score: f64, score: Option<f64>) -> Option<PreviousOutcome> {
    match last.response {
        Response::Sure => Some(PreviousOutcome::Sure),
        Response::Gamble => {
            let delta = score? - last_score;
            if (delta - last.initial_amount).abs() <= FAIRNESS_TOLERANCE {
                Some(PreviousOutcome::Won)
            } else if delta.abs() <= FAIRNESS_TOLERANCE {
                Some(PreviousOutcome::Lost)
            } else {
                None
            }
        }
        Response::Missing => None,
    }
}

fn payoff(last: &GameTrial, outcome: PreviousOutcome) -> Option<f64> {
    match (last.response, outcome) {
        (Response::Sure, PreviousOutcome::Sure) => Some(last.sure_amount),
        (Response::Gamble, PreviousOutcome::Won) => Some(last.initial_amount),
        (Response::Gamble, PreviousOutcome::Lost) => Some(0.0),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::Framing;
    use proptest::prelude::*;

    fn trial(index: u32, amount: f64, p: f64, response: Response) -> GameTrial {
        GameTrial {
            subject_id: "s".into(),
            block_id: 1,
            trial_index: index,
            initial_amount: amount,
            win_prob: p,
            framing: Framing::Gain,
            time_limit: 1.0,
            need_level: 2500.0,
            current_score: None,
            sure_amount: amount * p,
            previous_outcome: None,
            is_catch: false,
            response,
        }
    }

    #[test]
    fn std_matches_two_outcome_variance() {
        // E[X^2] - E[X]^2 over {S with p, 0 with 1-p}
        let (s, p) = (100.0_f64, 0.4_f64);
        let mean = p * s;
        let var = p * (s - mean).powi(2) + (1.0 - p) * (0.0 - mean).powi(2);
        assert!((gamble_std(s, p) - var.sqrt()).abs() < 1e-12);
        assert!((gamble_std(s, p) - 48.989_794_855_663_56).abs() < 1e-9);
        assert_eq!(gamble_std(2.0, 0.5), 1.0);
    }

    #[test]
    fn need_gap_at_target_is_zero() {
        let mut t = trial(1, 100.0, 0.4, Response::Sure);
        t.current_score = Some(2500.0);
        let d = derive_features(&[t]).unwrap();
        assert_eq!(d[0].need_gap(), 0.0);
    }

    #[test]
    fn scores_and_outcomes_are_reconstructed() {
        let t1 = trial(1, 100.0, 0.4, Response::Sure);
        let t2 = trial(2, 50.0, 0.6, Response::Gamble);
        let mut t3 = trial(3, 75.0, 0.3, Response::Gamble);
        t3.previous_outcome = Some(PreviousOutcome::Won);
        let mut t4 = trial(4, 25.0, 0.7, Response::Missing);
        t4.previous_outcome = Some(PreviousOutcome::Lost);

        let d = derive_features(&[t1, t2, t3, t4]).unwrap();
        let scores: Vec<f64> = d.iter().map(DerivedTrial::current_score).collect();
        assert_eq!(scores, vec![0.0, 40.0, 90.0, 90.0]);
        assert_eq!(d[0].previous_outcome(), PreviousOutcome::Absent);
        assert_eq!(d[1].previous_outcome(), PreviousOutcome::Sure);
        assert_eq!(d[2].previous_outcome(), PreviousOutcome::Won);
        assert_eq!(d[3].previous_outcome(), PreviousOutcome::Lost);
        assert_eq!(d[1].need_gap(), 2460.0);
    }

    #[test]
    fn outcome_is_inferred_from_score_delta() {
        let mut t1 = trial(1, 100.0, 0.4, Response::Gamble);
        t1.current_score = Some(10.0);
        let mut t2 = trial(2, 50.0, 0.6, Response::Sure);
        t2.current_score = Some(110.0);
        let mut t3 = trial(3, 50.0, 0.6, Response::Sure);
        t3.current_score = Some(140.0);
        let d = derive_features(&[t1.clone(), t2.clone(), t3]).unwrap();
        assert_eq!(d[1].previous_outcome(), PreviousOutcome::Won);
        assert_eq!(d[2].previous_outcome(), PreviousOutcome::Sure);

        t2.current_score = Some(10.0);
        let d = derive_features(&[t1.clone(), t2.clone()]).unwrap();
        assert_eq!(d[1].previous_outcome(), PreviousOutcome::Lost);

        // neither the outcome nor the score is known after a gamble
        t2.current_score = None;
        assert!(derive_features(&[t1, t2]).is_err());
    }

    #[test]
    fn stated_score_must_match() {
        let t1 = trial(1, 100.0, 0.4, Response::Sure);
        let mut t2 = trial(2, 50.0, 0.6, Response::Sure);
        t2.current_score = Some(41.0);
        assert!(matches!(
            derive_features(&[t1, t2]),
            Err(Error::InvariantViolation { .. })
        ));
    }

    #[test]
    fn non_monotone_index_is_an_ordering_error() {
        let t1 = trial(2, 100.0, 0.4, Response::Sure);
        let t2 = trial(1, 50.0, 0.6, Response::Sure);
        assert!(matches!(
            derive_features(&[t1, t2]),
            Err(Error::OrderingError { .. })
        ));
    }

    #[test]
    fn split_block_is_an_ordering_error() {
        let a = trial(1, 100.0, 0.4, Response::Sure);
        let mut b = trial(1, 100.0, 0.4, Response::Sure);
        b.block_id = 2;
        let c = trial(5, 100.0, 0.4, Response::Sure);
        assert!(matches!(
            derive_features(&[a, b, c]),
            Err(Error::OrderingError { .. })
        ));
    }

    #[test]
    fn each_block_restarts() {
        let a1 = trial(1, 100.0, 0.4, Response::Sure);
        let a2 = trial(2, 100.0, 0.4, Response::Sure);
        let mut b1 = trial(1, 100.0, 0.4, Response::Sure);
        b1.block_id = 2;
        let d = derive_features(&[a1, a2, b1]).unwrap();
        assert_eq!(d[2].current_score(), 0.0);
        assert_eq!(d[2].previous_outcome(), PreviousOutcome::Absent);
    }

    proptest! {
        #[test]
        fn std_is_symmetric_in_probability(s in 0.1f64..1000.0, p in 0.001f64..0.999) {
            let a = gamble_std(s, p);
            let b = gamble_std(s, 1.0 - p);
            prop_assert!((a - b).abs() <= 1e-12 * s.max(1.0));
            prop_assert!(a > 0.0);
        }

        #[test]
        fn derivation_is_idempotent(responses in proptest::collection::vec(0u8..2, 1..30), seed in 0u64..1000) {
            let trials: Vec<GameTrial> = responses
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let amount = [25.0, 50.0, 75.0, 100.0][(i + seed as usize) % 4];
                    let p = [0.3, 0.4, 0.6, 0.7][(i * 7 + seed as usize) % 4];
                    let response = if *r == 1 { Response::Gamble } else { Response::Sure };
                    trial(i as u32 + 1, amount, p, response)
                })
                .collect();
            // outcomes after gambles cannot be inferred without scores, so state them
            let mut stated = trials;
            for i in 1..stated.len() {
                if stated[i - 1].response == Response::Gamble {
                    stated[i].previous_outcome = Some(if (i as u64 + seed).is_multiple_of(2) {
                        PreviousOutcome::Won
                    } else {
                        PreviousOutcome::Lost
                    });
                }
            }
            let once = derive_features(&stated).unwrap();
            let again: Vec<GameTrial> = once.iter().map(|d| d.trial().clone()).collect();
            let twice = derive_features(&again).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
