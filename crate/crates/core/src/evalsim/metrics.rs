use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ParamSet, ProspectProbabilities};
use crate::trial::{Choice, DerivedTrial};

/// Predicted choice: the gamble iff its probability exceeds one half. An
/// exact tie predicts the sure option.
pub fn predict_choice(probs: &ProspectProbabilities) -> Choice {
    predict_from_probability(probs.p_gamble)
}

/// [`predict_choice`] from the gamble probability alone.
pub fn predict_from_probability(p_gamble: f64) -> Choice {
    if p_gamble > 0.5 {
        Choice::Gamble
    } else {
        Choice::Sure
    }
}

/// Fraction of positions where the prediction equals the response.
pub fn accuracy(predictions: &[Choice], responses: &[Choice]) -> Result<f64> {
    if predictions.len() != responses.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: responses.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::Empty);
    }
    let hits = predictions
        .iter()
        .zip(responses)
        .filter(|(p, r)| p == r)
        .count();
    Ok(hits as f64 / predictions.len() as f64)
}

/// Equal-width histogram over `[lower, lower + width * counts.len()]`. The
/// last bin is closed on the right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lower: f64,
    pub width: f64,
    pub counts: Vec<u64>,
    /// Samples that fell outside the covered range.
    pub out_of_range: u64,
}

impl Histogram {
    pub fn new(lower: f64, width: f64, n_bins: usize) -> Self {
        assert!(width > 0.0 && n_bins > 0);
        Histogram {
            lower,
            width,
            counts: vec![0; n_bins],
            out_of_range: 0,
        }
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.lower + self.width * i as f64
    }

    pub fn upper(&self) -> f64 {
        self.edge(self.counts.len())
    }

    /// Bin holding `x`, if any.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let n = self.counts.len();
        if !(x >= self.lower && x <= self.upper()) {
            return None;
        }
        let mut i = (((x - self.lower) / self.width).floor() as usize).min(n - 1);
        // the division can land one bin off near an edge
        if i > 0 && x < self.edge(i) {
            i -= 1;
        } else if i + 1 < n && x >= self.edge(i + 1) {
            i += 1;
        }
        Some(i)
    }

    pub fn add(&mut self, x: f64) {
        match self.bin_of(x) {
            Some(i) => self.counts[i] += 1,
            None => self.out_of_range += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.out_of_range
    }

    /// `(bin_lower, count)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.edge(i), c))
    }
}

/// One probability decile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBin {
    pub lower: f64,
    pub upper: f64,
    pub midpoint: f64,
    pub n_trials: usize,
    pub gamble_count: usize,
    /// `None` for an empty bin.
    pub empirical_rate: Option<f64>,
}

impl CalibrationBin {
    /// Non-empty and the observed gamble rate lies inside the bin.
    pub fn in_band(&self) -> bool {
        self.empirical_rate
            .is_some_and(|r| r >= self.lower && r <= self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub bins: Vec<CalibrationBin>,
    pub in_band_count: usize,
}

impl CalibrationReport {
    pub fn non_empty(&self) -> usize {
        self.bins.iter().filter(|b| b.n_trials > 0).count()
    }

    /// Non-empty bins whose rate falls outside the band.
    pub fn failing_bins(&self) -> Vec<usize> {
        (0..self.bins.len())
            .filter(|&i| self.bins[i].n_trials > 0 && !self.bins[i].in_band())
            .collect()
    }

    pub fn total_trials(&self) -> usize {
        self.bins.iter().map(|b| b.n_trials).sum()
    }
}

pub const CALIBRATION_BINS: usize = 10;

/// Decile of a probability: bin `b` is `[b/10, (b+1)/10)`, the last one
/// closed at 1.
pub fn calibration_bin_of(p: f64) -> usize {
    let mut b = ((p * 10.0).floor().max(0.0) as usize).min(CALIBRATION_BINS - 1);
    if b > 0 && p < b as f64 / 10.0 {
        b -= 1;
    } else if b + 1 < CALIBRATION_BINS && p >= (b + 1) as f64 / 10.0 {
        b += 1;
    }
    b
}

/// Groups trials by predicted gamble probability into ten deciles and
/// compares each decile with the observed gamble rate.
pub fn calibration_bins(p_gamble: &[f64], responses: &[Choice]) -> Result<CalibrationReport> {
    if p_gamble.len() != responses.len() {
        return Err(Error::LengthMismatch {
            left: p_gamble.len(),
            right: responses.len(),
        });
    }
    let mut n = [0usize; CALIBRATION_BINS];
    let mut gambles = [0usize; CALIBRATION_BINS];
    for (&p, &r) in p_gamble.iter().zip(responses) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::DomainError(format!(
                "gamble probability {p} outside [0, 1]"
            )));
        }
        let b = calibration_bin_of(p);
        n[b] += 1;
        if r == Choice::Gamble {
            gambles[b] += 1;
        }
    }
    let bins: Vec<CalibrationBin> = (0..CALIBRATION_BINS)
        .map(|b| {
            let lower = b as f64 / 10.0;
            let upper = (b + 1) as f64 / 10.0;
            CalibrationBin {
                lower,
                upper,
                midpoint: (2 * b + 1) as f64 / 20.0,
                n_trials: n[b],
                gamble_count: gambles[b],
                empirical_rate: (n[b] > 0).then(|| gambles[b] as f64 / n[b] as f64),
            }
        })
        .collect();
    let in_band_count = bins.iter().filter(|b| b.in_band()).count();
    Ok(CalibrationReport {
        bins,
        in_band_count,
    })
}

pub const FACTOR_BIN_WIDTH: f64 = 0.05;

/// Histograms of the gamble's utility factor (over [0, 1]) and attraction
/// factor (over [-0.5, 0.5]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDistributions {
    pub utility: Histogram,
    pub attraction: Histogram,
}

impl FactorDistributions {
    pub fn new() -> Self {
        FactorDistributions {
            utility: Histogram::new(0.0, FACTOR_BIN_WIDTH, 20),
            attraction: Histogram::new(-0.5, FACTOR_BIN_WIDTH, 20),
        }
    }

    /// Adds one trial's factors. An attraction factor beyond 0.5 in size is
    /// an invariant violation.
    pub fn add(&mut self, probs: &ProspectProbabilities) -> Result<()> {
        if probs.q_gamble.abs() > 0.5 {
            return Err(Error::invariant(
                "attraction factor",
                format!("|q| = {} exceeds 0.5", probs.q_gamble.abs()),
            ));
        }
        self.utility.add(probs.f_gamble);
        self.attraction.add(probs.q_gamble);
        Ok(())
    }
}

impl Default for FactorDistributions {
    fn default() -> Self {
        Self::new()
    }
}

/// Factor histograms for `trials` under one parameter set.
pub fn factor_distributions(trials: &[DerivedTrial], params: &ParamSet) -> Result<FactorDistributions> {
    let mut dist = FactorDistributions::new();
    for t in trials {
        dist.add(&params.probabilities(t))?;
    }
    Ok(dist)
}
