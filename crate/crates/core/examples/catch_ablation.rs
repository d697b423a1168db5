//! Fair-trial accuracy with and without catch trials in the training folds.
//!
//! ```bash
//! cargo run --release --example catch_ablation -- 3
//! ```

use qdt_choice::estimator::FitOptions;
use qdt_choice::evalsim::{catch_ablation, full_model, generate_cohort, mean_sd, ExperimentDescriptor};
use qdt_choice::trial::{derive_features, kfold_split, DEFAULT_FOLDS};

fn main() -> qdt_choice::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let cohort = generate_cohort(&ExperimentDescriptor::dataset2(), n, full_model(), 17)?;
    let trials = derive_features(&cohort.trials)?;

    let mut gains = Vec::new();
    println!("subject     with   without  train(with/without)  scored");
    for s in &cohort.subjects {
        let mine: Vec<_> = trials
            .iter()
            .filter(|t| t.subject_id() == s.subject_id)
            .cloned()
            .collect();
        let plan = kfold_split(&mine, DEFAULT_FOLDS, 42)?;
        let r = catch_ablation(&mine, &plan, &FitOptions::new(full_model()))?;
        println!(
            "{:<10} {:.3}   {:.3}    {}/{}            {}",
            r.subject_id, r.with_catch, r.without_catch, r.n_train_with, r.n_train_without, r.n_test
        );
        gains.push(r.gain());
    }
    let (m, sd) = mean_sd(&gains);
    println!("mean gain from catch trials: {m:+.4} ± {sd:.4}");
    Ok(())
}
