//! Break one decision problem into utility factor, attraction components
//! and prospect probability.
//!
//! ```bash
//! cargo run --example prospect_probabilities
//! ```

use qdt_choice::model::{
    attraction_total, prospect_probabilities, q_framing, q_memory, q_need, q_time,
    AttractionParams, ComponentMask, UtilityParams,
};
use qdt_choice::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};

fn trial(framing: Framing, time_limit: f64, previous: PreviousOutcome) -> GameTrial {
    GameTrial {
        subject_id: "demo".into(),
        block_id: 1,
        trial_index: 1,
        initial_amount: 100.0,
        win_prob: 0.4,
        framing,
        time_limit,
        need_level: 2500.0,
        current_score: Some(1800.0),
        sure_amount: 40.0,
        previous_outcome: Some(previous),
        is_catch: false,
        response: Response::Missing,
    }
}

fn main() -> qdt_choice::Result<()> {
    let up = UtilityParams::new(0.88, 1.0, 0.74, 0.5);
    let ap = AttractionParams {
        c1: 0.3,
        c2: 0.4,
        c3: 0.05,
        c4: 0.002,
        a: 0.05,
        mask: ComponentMask::ALL,
    };

    println!("frame time previous   framing    time   memory     need   total   f_g     q_g     P_g");
    for framing in [Framing::Gain, Framing::Loss] {
        for time_limit in [1.0, 3.0] {
            for previous in [PreviousOutcome::Won, PreviousOutcome::Lost] {
                // each trial is its own block so the stated score is kept
                let t = &derive_features(&[trial(framing, time_limit, previous)])?[0];
                let raw = t.trial();
                let pp = prospect_probabilities(t, &up, &ap);
                println!(
                    "{:<5} {:>4} {:<8} {:>8.3} {:>7.3} {:>8.3} {:>8.3} {:>7.3} {:.3}  {:+.3}  {:.3}",
                    framing.as_str(),
                    time_limit,
                    previous.as_str(),
                    q_framing(t.std(), framing, ap.c1),
                    q_time(time_limit, ap.c2),
                    q_memory(t.std(), previous, ap.c3),
                    q_need(t.need_gap(), t.std(), raw.win_prob, ap.c4),
                    attraction_total(t, &ap),
                    pp.f_gamble,
                    pp.q_gamble,
                    pp.p_gamble,
                );
                assert!(pp.satisfies_constraints());
            }
        }
    }
    Ok(())
}
