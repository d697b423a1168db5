//! Replay a subject's trials with simulated choices and compare the
//! similarity to the observed responses under QDT and CPT.
//!
//! ```bash
//! cargo run --release --example simulate_choices
//! ```

use qdt_choice::estimator::{cross_validate, FitOptions};
use qdt_choice::evalsim::{
    full_model, generate_cohort, held_out_probabilities, simulate_with_probabilities,
    ExperimentDescriptor, DEFAULT_SIMS,
};
use qdt_choice::model::ModelKind;
use qdt_choice::trial::{derive_features, DEFAULT_FOLDS};

fn main() -> qdt_choice::Result<()> {
    let cohort = generate_cohort(&ExperimentDescriptor::dataset2(), 2, full_model(), 9)?;
    let trials = derive_features(&cohort.trials)?;

    for model in [full_model(), ModelKind::Cpt] {
        let mut p = Vec::new();
        for s in &cohort.subjects {
            let mine: Vec<_> = trials
                .iter()
                .filter(|t| t.subject_id() == s.subject_id)
                .cloned()
                .collect();
            let (plan, fits) = cross_validate(&mine, DEFAULT_FOLDS, 42, &FitOptions::new(model))?;
            p.extend(held_out_probabilities(&mine, &plan, &fits)?.iter().map(|x| x.p_gamble));
        }
        let report = simulate_with_probabilities(&trials, &p, DEFAULT_SIMS, 42)?;
        println!("{model}: mean similarity {:.4}", report.mean_similarity());
        for s in &report.subjects {
            let lo = s.samples.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = s.samples.iter().copied().fold(0.0, f64::max);
            println!("  {}  mean {:.4}  range [{lo:.3}, {hi:.3}]", s.subject_id, s.mean());
        }
    }
    Ok(())
}
