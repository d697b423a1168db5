//! The logit-CPT baseline: how loss aversion and the Prelec curve move the
//! gamble probability on fair trials.
//!
//! ```bash
//! cargo run --example cpt_baseline
//! ```

use qdt_choice::model::{cpt_baseline_probability, prelec_weight, UtilityParams};
use qdt_choice::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};

fn main() -> qdt_choice::Result<()> {
    let raw: Vec<GameTrial> = [0.3, 0.4, 0.6, 0.7]
        .iter()
        .enumerate()
        .map(|(i, &p)| GameTrial {
            subject_id: "demo".into(),
            block_id: i as u32,
            trial_index: 1,
            initial_amount: 100.0,
            win_prob: p,
            framing: Framing::Gain,
            time_limit: 3.0,
            need_level: 0.0,
            current_score: Some(0.0),
            sure_amount: 100.0 * p,
            previous_outcome: Some(PreviousOutcome::Absent),
            is_catch: false,
            response: Response::Missing,
        })
        .collect();
    let trials = derive_features(&raw)?;

    println!("lambda  gamma    w(0.3)   P(0.3)  P(0.4)  P(0.6)  P(0.7)");
    for lambda in [1.0, 1.5, 2.25] {
        for gamma in [0.6, 1.0] {
            let up = UtilityParams::new(0.88, 1.0, gamma, 0.2).with_lambda(lambda);
            print!("{lambda:>6} {gamma:>6}  {:>8.4} ", prelec_weight(0.3, &up));
            for t in &trials {
                print!("  {:.3} ", cpt_baseline_probability(t, &up));
            }
            println!();
        }
    }
    Ok(())
}
