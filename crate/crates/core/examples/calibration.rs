//! Ten-bin calibration of held-out QDT probabilities, printed as a text
//! reliability table.
//!
//! ```bash
//! cargo run --release --example calibration
//! ```

use qdt_choice::estimator::{cross_validate, FitOptions};
use qdt_choice::evalsim::{
    calibration_bins, full_model, generate_cohort, held_out_probabilities, ExperimentDescriptor,
};
use qdt_choice::trial::{derive_features, DEFAULT_FOLDS};

fn main() -> qdt_choice::Result<()> {
    let cohort = generate_cohort(&ExperimentDescriptor::dataset2(), 3, full_model(), 11)?;
    let trials = derive_features(&cohort.trials)?;

    let mut p = Vec::new();
    let mut r = Vec::new();
    for s in &cohort.subjects {
        let mine: Vec<_> = trials
            .iter()
            .filter(|t| t.subject_id() == s.subject_id)
            .cloned()
            .collect();
        let (plan, fits) = cross_validate(&mine, DEFAULT_FOLDS, 42, &FitOptions::new(full_model()))?;
        for (t, pp) in mine.iter().zip(held_out_probabilities(&mine, &plan, &fits)?) {
            p.push(pp.p_gamble);
            r.push(t.response().choice().expect("synthetic trials are answered"));
        }
    }

    let report = calibration_bins(&p, &r)?;
    println!("bin          n  gamble rate  in band");
    for b in &report.bins {
        match b.empirical_rate {
            Some(rate) => println!(
                "[{:.1}, {:.1})  {:>5}  {rate:>11.3}  {}",
                b.lower,
                b.upper,
                b.n_trials,
                if b.in_band() { "yes" } else { "no" }
            ),
            None => println!("[{:.1}, {:.1})      0            -", b.lower, b.upper),
        }
    }
    println!("{}/{} non-empty bins in band", report.in_band_count, report.non_empty());
    Ok(())
}
