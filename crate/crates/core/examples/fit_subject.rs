//! One likelihood fit on a synthetic subject: grid start, simplex polish,
//! and the recovered parameters next to the truth.
//!
//! ```bash
//! cargo run --release --example fit_subject
//! ```

use qdt_choice::estimator::{fit_trials, grid_search, FitOptions};
use qdt_choice::evalsim::{full_model, generate_cohort, ExperimentDescriptor};
use qdt_choice::model::ParamSet;
use qdt_choice::trial::derive_features;

fn show(label: &str, p: &ParamSet) {
    let u = &p.utility;
    print!(
        "{label:<6} alpha {:.3} delta {:.3} gamma {:.3} phi {:.3}",
        u.alpha, u.delta, u.gamma, u.phi
    );
    if let Some(a) = &p.attraction {
        print!(
            "  c1 {:.3} c2 {:.3} c3 {:+.3} c4 {:+.4} a {:.4}",
            a.c1, a.c2, a.c3, a.c4, a.a
        );
    }
    println!();
}

fn main() -> qdt_choice::Result<()> {
    let cohort = generate_cohort(&ExperimentDescriptor::dataset2(), 1, full_model(), 7)?;
    let trials = derive_features(&cohort.trials)?;
    let options = FitOptions::new(full_model());

    let spec = options.objective(trials.clone())?;
    let (start, start_value) = grid_search(&spec);
    println!("grid start {start:.3?} objective {start_value:.3}");

    let fit = fit_trials(trials.clone(), &options)?;
    println!(
        "simplex: objective {:.3} after {} iterations (converged {})",
        fit.objective, fit.iterations, fit.converged
    );
    show("truth", &cohort.subjects[0].true_params);
    show("fit", &fit.params);

    let err = trials
        .iter()
        .map(|t| {
            (fit.params.gamble_probability(t) - cohort.subjects[0].true_params.gamble_probability(t))
                .abs()
        })
        .sum::<f64>()
        / trials.len() as f64;
    println!("mean |p_fit - p_true| on the training trials: {err:.4}");
    Ok(())
}
