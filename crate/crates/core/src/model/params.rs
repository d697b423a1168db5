use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the utility factor (and of the CPT baseline, which also
/// uses `lambda`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityParams {
    /// Value-curvature exponent, > 0.
    pub alpha: f64,
    /// Prelec weighting elevation, > 0.
    pub delta: f64,
    /// Prelec weighting curvature, > 0.
    pub gamma: f64,
    /// Logit sensitivity, >= 0.
    pub phi: f64,
    /// Loss aversion, > 0. Only the CPT baseline evaluates losses.
    pub lambda: f64,
}

impl UtilityParams {
    pub fn new(alpha: f64, delta: f64, gamma: f64, phi: f64) -> Self {
        UtilityParams {
            alpha,
            delta,
            gamma,
            phi,
            lambda: 1.0,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.alpha > 0.0
            && self.delta > 0.0
            && self.gamma > 0.0
            && self.phi >= 0.0
            && self.lambda > 0.0
            && [self.alpha, self.delta, self.gamma, self.phi, self.lambda]
                .iter()
                .all(|v| v.is_finite())
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "utility parameters out of bounds: {self:?}"
            )))
        }
    }
}

impl Default for UtilityParams {
    /// Risk-neutral, undistorted, indifferent.
    fn default() -> Self {
        UtilityParams::new(1.0, 1.0, 1.0, 0.0)
    }
}

/// One switchable piece of the attraction factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// Framing term amplified by the time-pressure multiplier.
    TimeFrame,
    Memory,
    Need,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::TimeFrame, Component::Memory, Component::Need];

    pub fn as_str(self) -> &'static str {
        match self {
            Component::TimeFrame => "time_frame",
            Component::Memory => "memory",
            Component::Need => "need",
        }
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "time_frame" => Ok(Component::TimeFrame),
            "memory" => Ok(Component::Memory),
            "need" => Ok(Component::Need),
            other => Err(Error::Config(format!(
                "unknown attraction component `{other}` (expected time_frame, memory or need)"
            ))),
        }
    }
}

/// Set of enabled attraction components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Component>", into = "Vec<Component>")]
pub struct ComponentMask {
    pub time_frame: bool,
    pub memory: bool,
    pub need: bool,
}

impl ComponentMask {
    pub const NONE: ComponentMask = ComponentMask {
        time_frame: false,
        memory: false,
        need: false,
    };
    pub const ALL: ComponentMask = ComponentMask {
        time_frame: true,
        memory: true,
        need: true,
    };

    pub fn contains(&self, c: Component) -> bool {
        match c {
            Component::TimeFrame => self.time_frame,
            Component::Memory => self.memory,
            Component::Need => self.need,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.time_frame || self.memory || self.need)
    }

    pub fn components(&self) -> Vec<Component> {
        Component::ALL
            .into_iter()
            .filter(|c| self.contains(*c))
            .collect()
    }
}

impl From<Vec<Component>> for ComponentMask {
    fn from(list: Vec<Component>) -> Self {
        list.into_iter().collect()
    }
}

impl From<ComponentMask> for Vec<Component> {
    fn from(mask: ComponentMask) -> Self {
        mask.components()
    }
}

impl FromIterator<Component> for ComponentMask {
    fn from_iter<I: IntoIterator<Item = Component>>(iter: I) -> Self {
        let mut mask = ComponentMask::NONE;
        for c in iter {
            match c {
                Component::TimeFrame => mask.time_frame = true,
                Component::Memory => mask.memory = true,
                Component::Need => mask.need = true,
            }
        }
        mask
    }
}

impl FromStr for ComponentMask {
    type Err = Error;

    /// Comma-separated list, e.g. `time_frame,memory,need`; empty means none.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|part| !part.trim().is_empty())
            .map(Component::from_str)
            .collect()
    }
}

impl fmt::Display for ComponentMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.components().into_iter().map(Component::as_str).collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join("+"))
        }
    }
}

/// Attraction-factor parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttractionParams {
    /// Framing risk exponent, >= 0.
    pub c1: f64,
    /// Time-decay rate, >= 0.
    pub c2: f64,
    /// Memory weight, any sign.
    pub c3: f64,
    /// Need weight, any sign.
    pub c4: f64,
    /// tanh scale, >= 0.
    pub a: f64,
    pub mask: ComponentMask,
}

impl AttractionParams {
    /// All weights zero with the given components enabled.
    pub fn zero(mask: ComponentMask) -> Self {
        AttractionParams {
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            c4: 0.0,
            a: 0.0,
            mask,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.c1 >= 0.0
            && self.c2 >= 0.0
            && self.a >= 0.0
            && [self.c1, self.c2, self.c3, self.c4, self.a]
                .iter()
                .all(|v| v.is_finite())
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::DomainError(format!(
                "attraction parameters out of bounds: {self:?}"
            )))
        }
    }

    /// Sum of |c_k| over the enabled components; disabled weights have no
    /// effect on the model and are not counted.
    pub fn l1_weights(&self) -> f64 {
        let mut total = 0.0;
        if self.mask.time_frame {
            total += self.c1.abs() + self.c2.abs();
        }
        if self.mask.memory {
            total += self.c3.abs();
        }
        if self.mask.need {
            total += self.c4.abs();
        }
        total
    }
}

/// Which model a parameter set belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Gain-domain utility factor plus the masked attraction factor.
    Qdt(ComponentMask),
    /// Logit-CPT with the reference point at the gamble's expected value.
    Cpt,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Qdt(_) => "qdt",
            ModelKind::Cpt => "cpt",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Qdt(mask) => f.pad(&format!("qdt[{mask}]")),
            ModelKind::Cpt => f.pad("cpt"),
        }
    }
}

/// A complete parameter block as stored on disk. CPT parameter sets carry
/// no attraction block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub utility: UtilityParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attraction: Option<AttractionParams>,
}

impl ParamSet {
    pub fn qdt(utility: UtilityParams, attraction: AttractionParams) -> Self {
        ParamSet {
            utility,
            attraction: Some(attraction),
        }
    }

    pub fn cpt(utility: UtilityParams) -> Self {
        ParamSet {
            utility,
            attraction: None,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match &self.attraction {
            Some(ap) => ModelKind::Qdt(ap.mask),
            None => ModelKind::Cpt,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.utility.validate()?;
        if let Some(ap) = &self.attraction {
            ap.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_parses_and_prints() {
        let mask: ComponentMask = "time_frame,need".parse().unwrap();
        assert!(mask.time_frame && mask.need && !mask.memory);
        assert_eq!(mask.to_string(), "time_frame+need");
        assert_eq!("".parse::<ComponentMask>().unwrap(), ComponentMask::NONE);
        assert!("time,need".parse::<ComponentMask>().is_err());
    }

    #[test]
    fn param_json_follows_schema() {
        let set = ParamSet::qdt(
            UtilityParams::new(0.88, 1.0, 0.74, 0.5).with_lambda(2.25),
            AttractionParams {
                c1: 0.5,
                c2: 0.1,
                c3: -0.01,
                c4: 0.001,
                a: 0.1,
                mask: ComponentMask::ALL,
            },
        );
        let json = serde_json::to_value(set).unwrap();
        assert_eq!(json["utility"]["lambda"], 2.25);
        assert_eq!(
            json["attraction"]["mask"],
            serde_json::json!(["time_frame", "memory", "need"])
        );
        let back: ParamSet = serde_json::from_value(json).unwrap();
        assert_eq!(back, set);

        let cpt = serde_json::to_value(ParamSet::cpt(UtilityParams::default())).unwrap();
        assert!(cpt.get("attraction").is_none());
    }

    #[test]
    fn bounds() {
        assert!(UtilityParams::default().is_valid());
        assert!(!UtilityParams::new(0.0, 1.0, 1.0, 1.0).is_valid());
        assert!(!UtilityParams::new(1.0, 1.0, 1.0, -0.1).is_valid());
        assert!(!UtilityParams::default().with_lambda(0.0).is_valid());
        let mut ap = AttractionParams::zero(ComponentMask::ALL);
        assert!(ap.is_valid());
        ap.c3 = -5.0;
        assert!(ap.is_valid());
        ap.c2 = -0.1;
        assert!(!ap.is_valid());
    }

    #[test]
    fn l1_counts_enabled_weights_only() {
        let ap = AttractionParams {
            c1: 1.0,
            c2: 2.0,
            c3: -3.0,
            c4: 4.0,
            a: 9.0,
            mask: "memory".parse().unwrap(),
        };
        assert_eq!(ap.l1_weights(), 3.0);
        assert_eq!(AttractionParams { mask: ComponentMask::ALL, ..ap }.l1_weights(), 10.0);
    }
}
