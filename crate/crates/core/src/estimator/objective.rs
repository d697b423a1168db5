use crate::error::{Error, Result};
use crate::model::{
    attraction_from_total, attraction_total, cpt_utilities, gain_utilities, utility_factors,
    AttractionParams, ComponentMask, ModelKind, ParamSet, UtilityParams,
};
use crate::trial::{Choice, DerivedTrial};

/// Probabilities are clamped to `[floor, 1 - floor]` before taking logs.
pub const PROB_FLOOR: f64 = 1e-9;

/// Maps between a flat optimizer vector and a [`ParamSet`].
///
/// Coordinates, in order: alpha, delta, gamma, phi, then lambda (CPT only),
/// then c1 and c2 (time/frame), c3 (memory), c4 (need), and finally the
/// tanh scale `a` when any attraction component is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamLayout {
    model: ModelKind,
}

impl ParamLayout {
    pub fn new(model: ModelKind) -> Self {
        ParamLayout { model }
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut names = vec!["alpha", "delta", "gamma", "phi"];
        match self.model {
            ModelKind::Cpt => names.push("lambda"),
            ModelKind::Qdt(mask) => {
                if mask.time_frame {
                    names.extend(["c1", "c2"]);
                }
                if mask.memory {
                    names.push("c3");
                }
                if mask.need {
                    names.push("c4");
                }
                if !mask.is_empty() {
                    names.push("a");
                }
            }
        }
        names
    }

    pub fn dim(&self) -> usize {
        self.names().len()
    }

    pub fn decode(&self, x: &[f64]) -> ParamSet {
        debug_assert_eq!(x.len(), self.dim());
        let mut utility = UtilityParams::new(x[0], x[1], x[2], x[3]);
        match self.model {
            ModelKind::Cpt => {
                utility.lambda = x[4];
                ParamSet::cpt(utility)
            }
            ModelKind::Qdt(mask) => {
                let mut ap = AttractionParams::zero(mask);
                let mut rest = x[4..].iter().copied();
                if mask.time_frame {
                    ap.c1 = rest.next().unwrap_or(0.0);
                    ap.c2 = rest.next().unwrap_or(0.0);
                }
                if mask.memory {
                    ap.c3 = rest.next().unwrap_or(0.0);
                }
                if mask.need {
                    ap.c4 = rest.next().unwrap_or(0.0);
                }
                if !mask.is_empty() {
                    ap.a = rest.next().unwrap_or(0.0);
                }
                ParamSet::qdt(utility, ap)
            }
        }
    }

    pub fn encode(&self, params: &ParamSet) -> Vec<f64> {
        let u = &params.utility;
        let mut x = vec![u.alpha, u.delta, u.gamma, u.phi];
        match self.model {
            ModelKind::Cpt => x.push(u.lambda),
            ModelKind::Qdt(mask) => {
                let ap = params
                    .attraction
                    .unwrap_or_else(|| AttractionParams::zero(mask));
                if mask.time_frame {
                    x.extend([ap.c1, ap.c2]);
                }
                if mask.memory {
                    x.push(ap.c3);
                }
                if mask.need {
                    x.push(ap.c4);
                }
                if !mask.is_empty() {
                    x.push(ap.a);
                }
            }
        }
        x
    }
}

/// Regularized negative log-likelihood for one subject's training trials.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    trials: Vec<DerivedTrial>,
    model: ModelKind,
    /// Weight on the L1 penalty over the enabled c-weights.
    pub reg_weight: f64,
    pub prob_floor: f64,
    /// Also penalize `|a|`. Off by default.
    pub regularize_scale: bool,
    /// Returned for parameter vectors outside the hard bounds.
    pub penalty_value: f64,
}

impl ObjectiveSpec {
    /// Trials without a response are dropped; at least one must remain and
    /// all must belong to one subject.
    pub fn new(trials: Vec<DerivedTrial>, model: ModelKind) -> Result<Self> {
        let trials: Vec<DerivedTrial> = trials
            .into_iter()
            .filter(|t| t.response().choice().is_some())
            .collect();
        let Some(first) = trials.first() else {
            return Err(Error::Empty);
        };
        let subject = first.subject_id().to_owned();
        if trials.iter().any(|t| t.subject_id() != subject) {
            return Err(Error::Config(
                "objective trials must come from a single subject".into(),
            ));
        }
        Ok(ObjectiveSpec {
            trials,
            model,
            reg_weight: 1.0,
            prob_floor: PROB_FLOOR,
            regularize_scale: false,
            penalty_value: super::SimplexConfig::default().penalty_value,
        })
    }

    pub fn with_reg_weight(mut self, reg_weight: f64) -> Self {
        self.reg_weight = reg_weight;
        self
    }

    pub fn trials(&self) -> &[DerivedTrial] {
        &self.trials
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn layout(&self) -> ParamLayout {
        ParamLayout::new(self.model)
    }

    /// Objective at a flat parameter vector laid out by [`Self::layout`].
    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.value(&self.layout().decode(x))
    }

    /// Objective for a parameter set. Under a QDT objective the attraction mask
    /// is the objective's, whatever `params` carries; under CPT the attraction
    /// block is ignored.
    pub fn value(&self, params: &ParamSet) -> f64 {
        let up = &params.utility;
        if !up.is_valid() {
            return self.penalty_value;
        }
        let value = match self.model {
            ModelKind::Cpt => {
                let mut ll = 0.0;
                for t in &self.trials {
                    let (ug, us) = cpt_utilities(t, up);
                    let (fg, fs) = utility_factors(ug, us, up);
                    ll += self.log_term(t, fg, fs);
                }
                -ll
            }
            ModelKind::Qdt(mask) => {
                let ap = AttractionParams {
                    mask,
                    ..params
                        .attraction
                        .unwrap_or_else(|| AttractionParams::zero(mask))
                };
                if !ap.is_valid() {
                    return self.penalty_value;
                }
                let active = ap.a != 0.0 && !mask.is_empty();
                let mut ll = 0.0;
                for t in &self.trials {
                    let (ug, us) = gain_utilities(t, up);
                    let (fg, fs) = utility_factors(ug, us, up);
                    let total = if active { attraction_total(t, &ap) } else { 0.0 };
                    let (qg, qs) = attraction_from_total(total, ap.a, fg, fs);
                    ll += self.log_term(t, fg + qg, fs + qs);
                }
                -ll + self.regularization(&ap)
            }
        };
        if value.is_finite() {
            value
        } else {
            self.penalty_value
        }
    }

    pub(crate) fn regularization(&self, ap: &AttractionParams) -> f64 {
        let mut l1 = ap.l1_weights();
        if self.regularize_scale && !ap.mask.is_empty() {
            l1 += ap.a.abs();
        }
        self.reg_weight * l1
    }

    /// `ln P(observed choice)` with both probabilities clamped.
    #[inline]
    pub(crate) fn log_term(&self, trial: &DerivedTrial, p_gamble: f64, p_sure: f64) -> f64 {
        let hi = 1.0 - self.prob_floor;
        match trial.response().choice() {
            Some(Choice::Gamble) => p_gamble.clamp(self.prob_floor, hi).ln(),
            Some(Choice::Sure) => p_sure.clamp(self.prob_floor, hi).ln(),
            None => 0.0,
        }
    }
}

/// Regularized negative log-likelihood of `spec`'s trials under the given
/// utility and attraction parameters.
pub fn regularized_nll(spec: &ObjectiveSpec, up: &UtilityParams, ap: &AttractionParams) -> f64 {
    let params = match spec.model() {
        ModelKind::Cpt => ParamSet::cpt(*up),
        ModelKind::Qdt(_) => ParamSet::qdt(*up, *ap),
    };
    spec.value(&params)
}

/// Convenience: mask of a model, empty for CPT.
pub(crate) fn mask_of(model: ModelKind) -> ComponentMask {
    match model {
        ModelKind::Qdt(mask) => mask,
        ModelKind::Cpt => ComponentMask::NONE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::{derive_features, Framing, GameTrial, PreviousOutcome, Response};

    fn fair_trials(responses: &[Response]) -> Vec<DerivedTrial> {
        let raw: Vec<GameTrial> = responses
            .iter()
            .enumerate()
            .map(|(i, r)| GameTrial {
                subject_id: "s".into(),
                block_id: 1,
                trial_index: i as u32,
                initial_amount: 100.0,
                win_prob: 0.4,
                framing: if i % 2 == 0 { Framing::Gain } else { Framing::Loss },
                time_limit: 1.0,
                need_level: 2500.0,
                current_score: Some(0.0),
                sure_amount: 40.0,
                previous_outcome: Some(PreviousOutcome::Absent),
                is_catch: false,
                response: *r,
            })
            .collect();
        // each row is its own block so the stated scores stay consistent
        let raw: Vec<GameTrial> = raw
            .into_iter()
            .enumerate()
            .map(|(i, mut t)| {
                t.block_id = i as u32;
                t
            })
            .collect();
        derive_features(&raw).unwrap()
    }

    #[test]
    fn coin_flip_likelihood() {
        let trials = fair_trials(&[Response::Gamble, Response::Sure, Response::Sure, Response::Gamble, Response::Gamble]);
        let spec = ObjectiveSpec::new(trials, ModelKind::Qdt(ComponentMask::ALL))
            .unwrap()
            .with_reg_weight(0.0);
        let up = UtilityParams::new(0.9, 1.0, 0.8, 0.0);
        let ap = AttractionParams::zero(ComponentMask::ALL);
        let v = regularized_nll(&spec, &up, &ap);
        assert!((v - 5.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn zero_weights_add_no_penalty() {
        let trials = fair_trials(&[Response::Gamble, Response::Sure]);
        let spec = ObjectiveSpec::new(trials, ModelKind::Qdt(ComponentMask::ALL)).unwrap();
        let up = UtilityParams::new(0.9, 1.0, 0.8, 0.0);
        let ap = AttractionParams {
            a: 0.3,
            ..AttractionParams::zero(ComponentMask::ALL)
        };
        let with = regularized_nll(&spec, &up, &ap);
        let without = regularized_nll(&spec.clone().with_reg_weight(0.0), &up, &ap);
        assert_eq!(with, without);
    }

    #[test]
    fn single_trial_example() {
        // linear utilities on a fair trial give f = 0.5; pick the attraction
        // so that P(gamble) = 0.8: min(f) * tanh(a * total) = 0.3
        let trials = fair_trials(&[Response::Gamble]);
        let spec = ObjectiveSpec::new(trials.clone(), ModelKind::Qdt("memory".parse().unwrap()))
            .unwrap()
            .with_reg_weight(0.0);
        // previous outcome is absent, so use the need component instead
        let spec_need = ObjectiveSpec::new(trials, ModelKind::Qdt("need".parse().unwrap()))
            .unwrap()
            .with_reg_weight(0.0);
        let up = UtilityParams::new(1.0, 1.0, 1.0, 0.3);
        let need_base = 2500.0 - 5.0 * crate::trial::gamble_std(100.0, 0.4) * 0.6;
        let ap = AttractionParams {
            c4: 1.0,
            a: 0.6_f64.atanh() / need_base,
            ..AttractionParams::zero("need".parse().unwrap())
        };
        let v = regularized_nll(&spec_need, &up, &ap);
        assert!((v - -(0.8_f64.ln())).abs() < 1e-9, "{v}");
        assert!((v - 0.22314).abs() < 1e-5);
        // memory-only model sees no memory signal: coin flip
        let v = regularized_nll(&spec, &up, &AttractionParams { c3: 1.0, a: 1.0, ..ap });
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn bounds_are_penalized() {
        let trials = fair_trials(&[Response::Gamble, Response::Sure]);
        let spec = ObjectiveSpec::new(trials, ModelKind::Qdt(ComponentMask::ALL)).unwrap();
        let ap = AttractionParams::zero(ComponentMask::ALL);
        let bad_alpha = UtilityParams::new(0.0, 1.0, 1.0, 0.1);
        assert_eq!(regularized_nll(&spec, &bad_alpha, &ap), spec.penalty_value);
        let bad_phi = UtilityParams::new(1.0, 1.0, 1.0, -0.1);
        assert_eq!(regularized_nll(&spec, &bad_phi, &ap), spec.penalty_value);
        let up = UtilityParams::new(1.0, 1.0, 1.0, 0.1);
        for bad in [
            AttractionParams { c1: -0.1, ..ap },
            AttractionParams { c2: -0.1, ..ap },
            AttractionParams { a: -0.1, ..ap },
        ] {
            assert_eq!(regularized_nll(&spec, &up, &bad), spec.penalty_value);
        }
        // c3 and c4 are sign-free
        assert!(regularized_nll(&spec, &up, &AttractionParams { c3: -0.1, c4: -0.1, ..ap }) < spec.penalty_value);
    }

    #[test]
    fn layout_round_trips() {
        for model in [
            ModelKind::Cpt,
            ModelKind::Qdt(ComponentMask::NONE),
            ModelKind::Qdt(ComponentMask::ALL),
            ModelKind::Qdt("memory,need".parse().unwrap()),
        ] {
            let layout = ParamLayout::new(model);
            let x: Vec<f64> = (0..layout.dim()).map(|i| 0.1 + i as f64).collect();
            assert_eq!(layout.encode(&layout.decode(&x)), x);
        }
        assert_eq!(ParamLayout::new(ModelKind::Cpt).dim(), 5);
        assert_eq!(ParamLayout::new(ModelKind::Qdt(ComponentMask::ALL)).dim(), 9);
        assert_eq!(ParamLayout::new(ModelKind::Qdt(ComponentMask::NONE)).dim(), 4);
    }
}
