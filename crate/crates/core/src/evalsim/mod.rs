//! Scoring fitted models and generating synthetic subjects.
//!
//! Accuracy uses the majority rule on the gamble probability, calibration
//! groups trials into probability deciles, and the simulation protocol
//! replays each subject's trials with Bernoulli draws and measures how often
//! the simulated choice matches the observed one. The generator produces
//! subjects with known parameters in the layout of either built-in
//! experiment.

mod ablation;
mod holdout;
mod metrics;
mod simulate;
mod synth;

pub use ablation::{catch_ablation, CatchAblation};
pub use holdout::{fold_accuracies, held_out_probabilities, mean_sd};
pub use metrics::{
    accuracy, calibration_bin_of, calibration_bins, factor_distributions, predict_choice,
    predict_from_probability, CalibrationBin, CalibrationReport, FactorDistributions, Histogram,
    CALIBRATION_BINS, FACTOR_BIN_WIDTH,
};
pub use simulate::{
    simulate_responses, simulate_with_probabilities, SimulationReport, SubjectSimilarity,
    DEFAULT_SIMS, SIMILARITY_BIN_WIDTH,
};
pub use synth::{
    draw_true_params, full_model, generate_cohort, generate_synthetic_subject,
    synthetic_subject_id, CatchSpec, ExperimentDescriptor, Shape, SyntheticCohort,
    SyntheticSubject,
};
