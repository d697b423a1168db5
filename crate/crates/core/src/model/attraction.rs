//! Attraction-factor components and their combination.
//!
//! Components are evaluated for the gamble; the sure option's total is 0, so
//! the difference fed to `tanh` is the gamble's total. The alternation law
//! then fixes `q_sure = -q_gamble`.

use super::AttractionParams;
use crate::trial::{DerivedTrial, Framing, PreviousOutcome};

/// Framing term `-I_framing * std^c1`; `0^0` is 1.
pub fn q_framing(std: f64, framing: Framing, c1: f64) -> f64 {
    -framing.indicator() * std.powf(c1)
}

/// Time-pressure multiplier `exp(-c2 * time_limit)`.
pub fn q_time(time_limit: f64, c2: f64) -> f64 {
    (-c2 * time_limit).exp()
}

/// Memory term `c3 * I_previous * std`.
pub fn q_memory(std: f64, previous: PreviousOutcome, c3: f64) -> f64 {
    c3 * previous.indicator() * std
}

/// Need term `c4 * (need_gap - 5 * std * (1 - win_prob))`.
pub fn q_need(need_gap: f64, std: f64, win_prob: f64, c4: f64) -> f64 {
    c4 * (need_gap - 5.0 * std * (1.0 - win_prob))
}

/// Sum of the enabled components for the gamble prospect. Time pressure and
/// framing switch on and off together.
pub fn attraction_total(trial: &DerivedTrial, params: &AttractionParams) -> f64 {
    let t = trial.trial();
    let frame = if params.mask.time_frame {
        q_time(t.time_limit, params.c2) * q_framing(trial.std(), t.framing, params.c1)
    } else {
        0.0
    };
    let memory = if params.mask.memory {
        q_memory(trial.std(), trial.previous_outcome(), params.c3)
    } else {
        0.0
    };
    let need = if params.mask.need {
        q_need(trial.need_gap(), trial.std(), t.win_prob, params.c4)
    } else {
        0.0
    };
    frame + memory + need
}

/// `(q_gamble, q_sure)` from a component total: `q_gamble = min(f_A, f_B) *
/// tanh(a * total)`.
pub(crate) fn attraction_from_total(total: f64, a: f64, f_gamble: f64, f_sure: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    let cos_delta = (a * total).tanh();
    let q_gamble = f_gamble.min(f_sure) * cos_delta;
    (q_gamble, -q_gamble)
}

/// Attraction factors `(q_gamble, q_sure)` for one trial.
///
/// Returns exactly `(0, 0)` when `a = 0` or no component is enabled.
pub fn attraction_factor(
    trial: &DerivedTrial,
    f_gamble: f64,
    f_sure: f64,
    params: &AttractionParams,
) -> (f64, f64) {
    if params.a == 0.0 || params.mask.is_empty() {
        return (0.0, 0.0);
    }
    attraction_from_total(attraction_total(trial, params), params.a, f_gamble, f_sure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn framing_examples() {
        assert!((q_framing(48.99, Framing::Loss, 1.0) - 48.99).abs() < 1e-12);
        assert_eq!(q_framing(37.0, Framing::Gain, 0.0), -1.0);
        assert_eq!(q_framing(0.0, Framing::Gain, 0.0), -1.0);
    }

    #[test]
    fn time_examples() {
        assert_eq!(q_time(1.0, 0.0), 1.0);
        assert_eq!(q_time(3.0, 0.0), 1.0);
        assert!(q_time(1.0, 1.0) > q_time(3.0, 1.0));
        assert!((q_time(3.0, 0.5) - (-1.5_f64).exp()).abs() < 1e-15);
        assert!((q_time(3.0, 0.5) - 0.22313).abs() < 1e-5);
    }

    #[test]
    fn memory_examples() {
        assert_eq!(q_memory(48.99, PreviousOutcome::Sure, 0.3), 0.0);
        assert_eq!(q_memory(48.99, PreviousOutcome::Absent, 0.3), 0.0);
        assert!((q_memory(48.99, PreviousOutcome::Won, 0.01) - 0.4899).abs() < 1e-12);
        assert_eq!(
            q_memory(12.0, PreviousOutcome::Won, 0.2),
            -q_memory(12.0, PreviousOutcome::Lost, 0.2)
        );
    }

    #[test]
    fn need_examples() {
        assert_eq!(q_need(2500.0, 40.0, 0.4, 0.0), 0.0);
        assert!((q_need(0.0, 48.99, 0.4, 1.0) - -(5.0 * 48.99 * 0.6)).abs() < 1e-12);
        assert!((q_need(0.0, 48.99, 0.4, 1.0) - -146.97).abs() < 1e-9);
        assert!((q_need(2500.0, 0.0, 0.4, 0.001) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn combination_example() {
        let (qg, qs) = attraction_from_total(0.5_f64.atanh(), 1.0, 0.6, 0.4);
        assert!((qg - 0.2).abs() < 1e-12);
        assert!((qs + 0.2).abs() < 1e-12);
        assert_eq!(attraction_from_total(1e6, 0.0, 0.6, 0.4), (0.0, 0.0));
    }

    proptest! {
        #[test]
        fn framing_flips_sign(std in 0.0f64..200.0, c1 in 0.0f64..3.0) {
            prop_assert_eq!(q_framing(std, Framing::Gain, c1), -q_framing(std, Framing::Loss, c1));
        }

        #[test]
        fn time_is_bounded_and_monotone(tl in 0.0f64..10.0, c2 in 0.0f64..5.0, d in 0.0f64..2.0) {
            let q = q_time(tl, c2);
            prop_assert!(q > 0.0 && q <= 1.0);
            prop_assert!(q_time(tl + d, c2) <= q);
            prop_assert!(q_time(tl, c2 + d) <= q);
        }

        #[test]
        fn combined_factor_is_bounded(
            total in -1e4f64..1e4,
            a in 0.0f64..10.0,
            fg in 0.0f64..=1.0,
        ) {
            let fs = 1.0 - fg;
            let (qg, qs) = attraction_from_total(total, a, fg, fs);
            prop_assert!(qg.abs() <= fg.min(fs));
            prop_assert!(qg.abs() <= 0.5);
            prop_assert_eq!(qg + qs, 0.0);
        }
    }
}
