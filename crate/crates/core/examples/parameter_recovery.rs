//! Generate synthetic subjects with known parameters, fit them with 6-fold
//! cross-validation, and compare fitted with true gamble probabilities.
//!
//! ```bash
//! cargo run --release --example parameter_recovery -- 3
//! ```

use std::time::Instant;

use qdt_choice::estimator::{cross_validate, FitOptions};
use qdt_choice::evalsim::{
    fold_accuracies, full_model, generate_cohort, held_out_probabilities, mean_sd,
    ExperimentDescriptor,
};
use qdt_choice::model::ModelKind;
use qdt_choice::trial::{derive_features, DEFAULT_FOLDS};

fn main() -> qdt_choice::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2);
    let seed = 42;
    let cohort = generate_cohort(&ExperimentDescriptor::dataset1(), n, full_model(), seed)?;
    let trials = derive_features(&cohort.trials)?;

    println!("subject     model  |p_fit-p_true|  accuracy        secs");
    for truth in &cohort.subjects {
        let mine: Vec<_> = trials
            .iter()
            .filter(|t| t.subject_id() == truth.subject_id)
            .cloned()
            .collect();
        for model in [full_model(), ModelKind::Cpt] {
            let started = Instant::now();
            let (plan, fits) =
                cross_validate(&mine, DEFAULT_FOLDS, seed, &FitOptions::new(model))?;
            let probs = held_out_probabilities(&mine, &plan, &fits)?;
            let err = mine
                .iter()
                .zip(&probs)
                .map(|(t, p)| (p.p_gamble - truth.true_params.gamble_probability(t)).abs())
                .sum::<f64>()
                / mine.len() as f64;
            let (acc, sd) = mean_sd(&fold_accuracies(&mine, &plan, &probs, false)?);
            println!(
                "{:<11} {:<6} {:>13.4}  {:.3} ± {:.3}  {:>6.1}",
                truth.subject_id,
                model.name(),
                err,
                acc,
                sd,
                started.elapsed().as_secs_f64()
            );
        }
    }
    Ok(())
}
