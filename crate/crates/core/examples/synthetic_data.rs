//! Generate a synthetic subject from an experiment descriptor and write it
//! as a trial CSV.
//!
//! ```bash
//! cargo run --example synthetic_data -- dataset2 > synth.csv
//! ```

use std::io;

use qdt_choice::evalsim::{draw_true_params, full_model, generate_synthetic_subject, Shape};
use qdt_choice::trial::write_trials;

fn main() -> qdt_choice::Result<()> {
    let shape: Shape = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dataset1".into())
        .parse()?;
    let desc = shape.descriptor();
    let seed = 42;
    let params = draw_true_params(full_model(), "demo", seed);
    let (trials, subject) = generate_synthetic_subject(&desc, "demo", &params, seed)?;

    let gambles = trials.iter().filter(|t| t.response.as_str() == "gamble").count();
    eprintln!(
        "{shape}: {} blocks x {} trials = {} rows, {} catch, gamble rate {:.3}",
        desc.n_blocks(),
        desc.trials_per_block(),
        trials.len(),
        trials.iter().filter(|t| t.is_catch).count(),
        gambles as f64 / trials.len() as f64
    );
    eprintln!("true parameters: {}", serde_json::to_string(&subject.true_params)?);
    write_trials(io::stdout().lock(), &trials)
}
