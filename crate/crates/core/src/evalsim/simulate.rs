use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::Histogram;
use crate::error::{Error, Result};
use crate::model::ParamSet;
use crate::seeding::subject_rng;
use crate::trial::{Choice, DerivedTrial};

pub const DEFAULT_SIMS: usize = 1000;
pub const SIMILARITY_BIN_WIDTH: f64 = 0.025;

/// Similarity samples for one subject, one per simulated replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectSimilarity {
    pub subject_id: String,
    pub samples: Vec<f64>,
}

impl SubjectSimilarity {
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n_sims: usize,
    pub rng_seed: u64,
    pub subjects: Vec<SubjectSimilarity>,
    /// All samples pooled over subjects.
    pub histogram: Histogram,
}

impl SimulationReport {
    /// Mean similarity over every sample of every subject.
    pub fn mean_similarity(&self) -> f64 {
        let (sum, n) = self
            .subjects
            .iter()
            .flat_map(|s| &s.samples)
            .fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
        sum / n as f64
    }
}

/// Replays every subject's trials `n_sims` times, drawing each choice with
/// the model's gamble probability, and records the share of trials where
/// the simulated choice matches the observed one.
///
/// `p_gamble[i]` belongs to `trials[i]`. Trials without a response are
/// skipped. Replicate `r` of a subject draws from a stream keyed by
/// `(seed, subject, r)`, so the report does not depend on scheduling.
pub fn simulate_with_probabilities(
    trials: &[DerivedTrial],
    p_gamble: &[f64],
    n_sims: usize,
    seed: u64,
) -> Result<SimulationReport> {
    if n_sims == 0 {
        return Err(Error::Config("n_sims must be at least 1".into()));
    }
    if p_gamble.len() != trials.len() {
        return Err(Error::LengthMismatch {
            left: p_gamble.len(),
            right: trials.len(),
        });
    }
    let mut groups: Vec<(&str, Vec<(f64, Choice)>)> = Vec::new();
    for (t, &p) in trials.iter().zip(p_gamble) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainError(format!(
                "gamble probability {p} outside [0, 1]"
            )));
        }
        let Some(choice) = t.response().choice() else {
            continue;
        };
        match groups.iter_mut().find(|(s, _)| *s == t.subject_id()) {
            Some((_, g)) => g.push((p, choice)),
            None => groups.push((t.subject_id(), vec![(p, choice)])),
        }
    }

    let subjects: Vec<SubjectSimilarity> = groups
        .par_iter()
        .map(|(subject, rows)| SubjectSimilarity {
            subject_id: subject.to_string(),
            samples: (0..n_sims)
                .map(|r| {
                    let mut rng = subject_rng(seed, subject, r as u64);
                    let hits = rows
                        .iter()
                        .filter(|(p, observed)| {
                            let gamble = rng.gen_bool(*p);
                            (*observed == Choice::Gamble) == gamble
                        })
                        .count();
                    hits as f64 / rows.len() as f64
                })
                .collect(),
        })
        .collect();

    let mut histogram = Histogram::new(0.0, SIMILARITY_BIN_WIDTH, 40);
    for s in subjects.iter().flat_map(|s| &s.samples) {
        histogram.add(*s);
    }
    Ok(SimulationReport {
        n_sims,
        rng_seed: seed,
        subjects,
        histogram,
    })
}

/// [`simulate_with_probabilities`] under one parameter set for all trials.
pub fn simulate_responses(
    trials: &[DerivedTrial],
    params: &ParamSet,
    n_sims: usize,
    seed: u64,
) -> Result<SimulationReport> {
    let p: Vec<f64> = trials.iter().map(|t| params.gamble_probability(t)).collect();
    simulate_with_probabilities(trials, &p, n_sims, seed)
}
