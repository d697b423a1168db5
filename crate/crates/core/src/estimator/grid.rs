//! Starting points for the simplex from a coarse Cartesian grid.

use super::objective::{mask_of, ObjectiveSpec, ParamLayout};
use crate::model::{
    attraction_from_total, gain_utilities, q_framing, q_memory, q_need, q_time, utility_factors,
    AttractionParams, ModelKind, UtilityParams,
};

pub const ALPHA_GRID: [f64; 3] = [0.5, 0.88, 1.0];
pub const DELTA_GRID: [f64; 3] = [0.5, 1.0, 1.5];
pub const GAMMA_GRID: [f64; 3] = [0.5, 0.74, 1.0];
pub const PHI_GRID: [f64; 3] = [0.05, 0.5, 2.0];
pub const LAMBDA_GRID: [f64; 2] = [1.0, 2.25];
/// Values for c1 and c2, which must stay non-negative.
pub const NONNEG_C_GRID: [f64; 3] = [0.0, 0.1, 1.0];
/// Values for c3 and c4.
pub const SIGNED_C_GRID: [f64; 3] = [-0.1, 0.0, 0.1];
pub const SCALE_GRID: [f64; 3] = [0.01, 0.1, 1.0];

/// Candidate values per coordinate, in [`ParamLayout`] order.
pub fn grid_axes(layout: &ParamLayout) -> Vec<&'static [f64]> {
    layout
        .names()
        .into_iter()
        .map(|name| -> &'static [f64] {
            match name {
                "alpha" => &ALPHA_GRID,
                "delta" => &DELTA_GRID,
                "gamma" => &GAMMA_GRID,
                "phi" => &PHI_GRID,
                "lambda" => &LAMBDA_GRID,
                "c1" | "c2" => &NONNEG_C_GRID,
                "c3" | "c4" => &SIGNED_C_GRID,
                "a" => &SCALE_GRID,
                other => unreachable!("no grid for {other}"),
            }
        })
        .collect()
}

/// Best grid point and its objective value. Points are visited in
/// lexicographic order (last coordinate fastest) and only a strictly lower
/// value replaces the incumbent.
pub fn grid_search(spec: &ObjectiveSpec) -> (Vec<f64>, f64) {
    match spec.model() {
        ModelKind::Qdt(mask) if !mask.is_empty() => cached_qdt_search(spec),
        _ => exhaustive_search(spec),
    }
}

/// Starting vector for the simplex; see [`grid_search`].
pub fn grid_search_init(spec: &ObjectiveSpec) -> Vec<f64> {
    grid_search(spec).0
}

/// Evaluates every grid point through [`ObjectiveSpec::value_at`].
pub fn exhaustive_search(spec: &ObjectiveSpec) -> (Vec<f64>, f64) {
    let axes = grid_axes(&spec.layout());
    let mut idx = vec![0usize; axes.len()];
    let mut point: Vec<f64> = axes.iter().map(|ax| ax[0]).collect();
    let mut best = (point.clone(), f64::INFINITY);
    loop {
        let v = spec.value_at(&point);
        if v < best.1 {
            best = (point.clone(), v);
        }
        // odometer increment, last axis fastest
        let mut k = axes.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                point[k] = axes[k][idx[k]];
                break;
            }
            idx[k] = 0;
            point[k] = axes[k][0];
        }
    }
}

/// Same visit order and arithmetic as [`exhaustive_search`], but component
/// values are computed once per grid value and utility factors once per
/// utility point.
fn cached_qdt_search(spec: &ObjectiveSpec) -> (Vec<f64>, f64) {
    let layout = spec.layout();
    let mask = mask_of(spec.model());
    let trials = spec.trials();
    let n = trials.len();

    let frames: Vec<Vec<f64>> = if mask.time_frame {
        let mut out = Vec::new();
        for &c1 in &NONNEG_C_GRID {
            for &c2 in &NONNEG_C_GRID {
                out.push(
                    trials
                        .iter()
                        .map(|t| {
                            q_time(t.trial().time_limit, c2)
                                * q_framing(t.std(), t.trial().framing, c1)
                        })
                        .collect(),
                );
            }
        }
        out
    } else {
        vec![vec![0.0; n]]
    };
    let memories: Vec<Vec<f64>> = if mask.memory {
        SIGNED_C_GRID
            .iter()
            .map(|&c3| {
                trials
                    .iter()
                    .map(|t| q_memory(t.std(), t.previous_outcome(), c3))
                    .collect()
            })
            .collect()
    } else {
        vec![vec![0.0; n]]
    };
    let needs: Vec<Vec<f64>> = if mask.need {
        SIGNED_C_GRID
            .iter()
            .map(|&c4| {
                trials
                    .iter()
                    .map(|t| q_need(t.need_gap(), t.std(), t.trial().win_prob, c4))
                    .collect()
            })
            .collect()
    } else {
        vec![vec![0.0; n]]
    };

    // One entry per (c1, c2, c3, c4) combination in lexicographic order.
    let mut combos: Vec<(AttractionParams, Vec<f64>)> = Vec::new();
    for (fi, frame) in frames.iter().enumerate() {
        for (mi, memory) in memories.iter().enumerate() {
            for (ni, need) in needs.iter().enumerate() {
                let mut ap = AttractionParams::zero(mask);
                if mask.time_frame {
                    ap.c1 = NONNEG_C_GRID[fi / NONNEG_C_GRID.len()];
                    ap.c2 = NONNEG_C_GRID[fi % NONNEG_C_GRID.len()];
                }
                if mask.memory {
                    ap.c3 = SIGNED_C_GRID[mi];
                }
                if mask.need {
                    ap.c4 = SIGNED_C_GRID[ni];
                }
                let totals = (0..n).map(|j| frame[j] + memory[j] + need[j]).collect();
                combos.push((ap, totals));
            }
        }
    }

    let mut factors = vec![(0.0, 0.0); n];
    let mut best: Option<(UtilityParams, AttractionParams)> = None;
    let mut best_value = f64::INFINITY;
    for &alpha in &ALPHA_GRID {
        for &delta in &DELTA_GRID {
            for &gamma in &GAMMA_GRID {
                for &phi in &PHI_GRID {
                    let up = UtilityParams::new(alpha, delta, gamma, phi);
                    for (slot, t) in factors.iter_mut().zip(trials) {
                        let (ug, us) = gain_utilities(t, &up);
                        *slot = utility_factors(ug, us, &up);
                    }
                    for (base, totals) in &combos {
                        for &a in &SCALE_GRID {
                            let ap = AttractionParams { a, ..*base };
                            let mut ll = 0.0;
                            for ((t, &(fg, fs)), &total) in
                                trials.iter().zip(&factors).zip(totals)
                            {
                                let (qg, qs) = attraction_from_total(total, a, fg, fs);
                                ll += spec.log_term(t, fg + qg, fs + qs);
                            }
                            let mut v = -ll + spec.regularization(&ap);
                            if !v.is_finite() {
                                v = spec.penalty_value;
                            }
                            if v < best_value {
                                best_value = v;
                                best = Some((up, ap));
                            }
                        }
                    }
                }
            }
        }
    }
    let (up, ap) = best.expect("grid is non-empty and values are finite");
    (
        layout.encode(&crate::model::ParamSet::qdt(up, ap)),
        best_value,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ComponentMask;
    use crate::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_block(
        seed: u64,
        n: usize,
        forced: Option<Response>,
    ) -> Vec<crate::trial::DerivedTrial> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amounts = [25.0, 50.0, 75.0, 100.0];
        let probs = [0.2, 0.4, 0.6, 0.8];
        let mut score = 0.0;
        let mut prev = PreviousOutcome::Absent;
        let mut raw = Vec::new();
        for i in 0..n {
            let s = amounts[rng.gen_range(0..4)];
            let p = probs[rng.gen_range(0..4)];
            let gamble = match forced {
                Some(r) => r == Response::Gamble,
                None => rng.gen_bool(0.5),
            };
            raw.push(GameTrial {
                subject_id: "g".into(),
                block_id: 1,
                trial_index: i as u32,
                initial_amount: s,
                win_prob: p,
                framing: if rng.gen_bool(0.5) { Framing::Gain } else { Framing::Loss },
                time_limit: if i % 2 == 0 { 1.0 } else { 3.0 },
                need_level: 2500.0,
                current_score: Some(score),
                sure_amount: p * s,
                previous_outcome: Some(prev),
                is_catch: false,
                response: if gamble { Response::Gamble } else { Response::Sure },
            });
            if gamble {
                if rng.gen_bool(p) {
                    score += s;
                    prev = PreviousOutcome::Won;
                } else {
                    prev = PreviousOutcome::Lost;
                }
            } else {
                score += p * s;
                prev = PreviousOutcome::Sure;
            }
        }
        derive_features(&raw).unwrap()
    }

    #[test]
    fn cached_search_matches_exhaustive() {
        let trials = random_block(7, 24, None);
        for mask in ["time_frame,memory,need", "memory", "time_frame,need"] {
            let mask: ComponentMask = mask.parse().unwrap();
            let spec = ObjectiveSpec::new(trials.clone(), ModelKind::Qdt(mask)).unwrap();
            let fast = grid_search(&spec);
            let slow = exhaustive_search(&spec);
            assert_eq!(fast.0, slow.0, "{mask}");
            assert_eq!(fast.1.to_bits(), slow.1.to_bits(), "{mask}");
            assert_eq!(spec.value_at(&fast.0).to_bits(), fast.1.to_bits());
        }
    }

    #[test]
    fn always_gamble_start_favours_the_gamble() {
        let trials = random_block(3, 16, Some(Response::Gamble));
        let spec = ObjectiveSpec::new(trials, ModelKind::Cpt).unwrap();
        let start = spec.layout().decode(&grid_search_init(&spec));
        for t in spec.trials() {
            assert!(start.gamble_probability(t) > 0.9);
        }
    }

    #[test]
    fn qdt_start_is_no_worse_than_zero_attraction() {
        let trials = random_block(11, 30, None);
        let spec = ObjectiveSpec::new(trials, ModelKind::Qdt(ComponentMask::ALL)).unwrap();
        let (_, v) = grid_search(&spec);
        let base = ObjectiveSpec::new(spec.trials().to_vec(), ModelKind::Qdt(ComponentMask::NONE))
            .unwrap();
        assert!(v <= exhaustive_search(&base).1);
    }

    #[test]
    fn search_is_deterministic() {
        let trials = random_block(5, 20, None);
        let spec = ObjectiveSpec::new(trials, ModelKind::Qdt(ComponentMask::ALL)).unwrap();
        assert_eq!(grid_search_init(&spec), grid_search_init(&spec));
    }
}
