//! Histograms of utility and attraction factors for a parameter set.
//!
//! ```bash
//! cargo run --example factor_distributions
//! ```

use qdt_choice::evalsim::{
    factor_distributions, full_model, generate_cohort, ExperimentDescriptor, Histogram,
};
use qdt_choice::trial::derive_features;

fn bars(name: &str, h: &Histogram) {
    println!("{name}");
    let top = h.counts.iter().copied().max().unwrap_or(1).max(1);
    for (lower, count) in h.rows() {
        if count > 0 {
            let width = (count * 50 / top) as usize;
            println!("  {lower:>6.2} {count:>5} {}", "#".repeat(width.max(1)));
        }
    }
}

fn main() -> qdt_choice::Result<()> {
    let cohort = generate_cohort(&ExperimentDescriptor::dataset1(), 1, full_model(), 5)?;
    let trials = derive_features(&cohort.trials)?;
    let d = factor_distributions(&trials, &cohort.subjects[0].true_params)?;
    bars("utility factor f (gamble)", &d.utility);
    bars("attraction factor q (gamble)", &d.attraction);
    Ok(())
}
