#![allow(dead_code)]

use qdt_choice::model::{AttractionParams, ComponentMask, UtilityParams};
use qdt_choice::trial::{
    derive_features, DerivedTrial, Framing, GameTrial, PreviousOutcome, Response,
};
use rand::Rng;

pub const AMOUNTS: [f64; 6] = [50.0, 100.0, 500.0, 1000.0, 2500.0, 5000.0];
pub const WIN_PROBS: [f64; 4] = [0.3, 0.4, 0.6, 0.7];

/// A fair trial in a block of its own, with the running state stated.
pub fn game_trial<R: Rng>(rng: &mut R, subject: &str, block: u32) -> GameTrial {
    let amount = AMOUNTS[rng.gen_range(0..AMOUNTS.len())];
    let p = WIN_PROBS[rng.gen_range(0..WIN_PROBS.len())];
    let previous = match rng.gen_range(0..4) {
        0 => PreviousOutcome::Won,
        1 => PreviousOutcome::Lost,
        2 => PreviousOutcome::Sure,
        _ => PreviousOutcome::Absent,
    };
    GameTrial {
        subject_id: subject.to_owned(),
        block_id: block,
        trial_index: 0,
        initial_amount: amount,
        win_prob: p,
        framing: if rng.gen_bool(0.5) { Framing::Gain } else { Framing::Loss },
        time_limit: if rng.gen_bool(0.5) { 1.0 } else { 3.0 },
        need_level: [0.0, 1000.0, 2500.0, 5000.0][rng.gen_range(0..4)],
        current_score: Some(rng.gen_range(0..40) as f64 * 100.0),
        sure_amount: p * amount,
        previous_outcome: Some(previous),
        is_catch: false,
        response: if rng.gen_bool(0.5) { Response::Gamble } else { Response::Sure },
    }
}

pub fn random_trials<R: Rng>(rng: &mut R, subject: &str, n: usize) -> Vec<DerivedTrial> {
    let raw: Vec<GameTrial> = (0..n).map(|i| game_trial(rng, subject, i as u32)).collect();
    derive_features(&raw).expect("generated trials are valid")
}

pub fn random_utility<R: Rng>(rng: &mut R) -> UtilityParams {
    UtilityParams::new(
        rng.gen_range(0.05..1.5),
        rng.gen_range(0.05..3.0),
        rng.gen_range(0.05..2.0),
        10f64.powf(rng.gen_range(-4.0..1.0)),
    )
    .with_lambda(rng.gen_range(1.0..4.0))
}

pub fn random_mask<R: Rng>(rng: &mut R) -> ComponentMask {
    ComponentMask {
        time_frame: rng.gen_bool(0.5),
        memory: rng.gen_bool(0.5),
        need: rng.gen_bool(0.5),
    }
}

/// Attraction parameters spanning tiny to saturating scales.
pub fn random_attraction<R: Rng>(rng: &mut R, mask: ComponentMask) -> AttractionParams {
    AttractionParams {
        c1: rng.gen_range(0.0..2.0),
        c2: rng.gen_range(0.0..2.0),
        c3: rng.gen_range(-1.0..1.0),
        c4: rng.gen_range(-1.0..1.0),
        a: 10f64.powf(rng.gen_range(-4.0..2.0)),
        mask,
    }
}
