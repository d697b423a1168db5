//! Read a trial CSV, reconstruct running scores and previous outcomes, and
//! print the flat feature matrix.
//!
//! ```bash
//! cargo run --example export_features -- data.csv > features.csv
//! ```

use std::io;

use qdt_choice::evalsim::{full_model, generate_cohort, ExperimentDescriptor};
use qdt_choice::trial::{derive_features, load_trials, write_features};

fn main() -> qdt_choice::Result<()> {
    let raw = match std::env::args().nth(1) {
        Some(path) => {
            let set = load_trials(&path)?;
            for s in &set.dropped_subjects {
                eprintln!("dropped {s}: missing responses");
            }
            set.trials
        }
        // without a file, use a small synthetic subject
        None => generate_cohort(&ExperimentDescriptor::dataset2(), 1, full_model(), 1)?.trials,
    };
    let trials = derive_features(&raw)?;
    eprintln!("{} trials", trials.len());
    write_features(io::stdout().lock(), &trials)
}
