//! Power value function, Prelec-II weighting and the logit choice rule.

use super::UtilityParams;
use crate::error::{Error, Result};

/// Probabilities below this are clamped before weighting.
pub const MIN_WEIGHT_PROB: f64 = 1e-9;

/// `x^alpha` for gains, `-lambda * (-x)^alpha` for losses.
pub fn value_fn(x: f64, params: &UtilityParams) -> f64 {
    if x >= 0.0 {
        x.powf(params.alpha)
    } else {
        -params.lambda * (-x).powf(params.alpha)
    }
}

/// Prelec-II weight `exp(-delta * (-ln p)^gamma)`.
pub fn prelec_weight(p: f64, params: &UtilityParams) -> f64 {
    let p = p.clamp(MIN_WEIGHT_PROB, 1.0);
    (-params.delta * (-p.ln()).powf(params.gamma)).exp()
}

/// Gain-domain utility of a two-outcome option paying `amount_hi` with
/// probability `p_hi` and `amount_lo` otherwise. A sure amount is
/// `(amount, 1, 0)`.
pub fn option_utility_gain(
    amount_hi: f64,
    p_hi: f64,
    amount_lo: f64,
    params: &UtilityParams,
) -> Result<f64> {
    if amount_hi < 0.0 || amount_lo < 0.0 {
        return Err(Error::DomainError(format!(
            "gain-domain utility needs non-negative amounts, got {amount_hi} and {amount_lo}"
        )));
    }
    Ok(gain_utility(amount_hi, p_hi, amount_lo, params))
}

pub(crate) fn gain_utility(amount_hi: f64, p_hi: f64, amount_lo: f64, params: &UtilityParams) -> f64 {
    let w = prelec_weight(p_hi, params);
    w * value_fn(amount_hi, params) + (1.0 - w) * value_fn(amount_lo, params)
}

/// Logit utility factors `(f_gamble, f_sure)` with
/// `f_gamble = 1 / (1 + exp(phi * (u_sure - u_gamble)))`.
///
/// The smaller factor is evaluated directly from a non-positive exponent and
/// the larger is its complement, so neither overflows and both stay in
/// [0, 1].
pub fn utility_factors(u_gamble: f64, u_sure: f64, params: &UtilityParams) -> (f64, f64) {
    let z = params.phi * (u_sure - u_gamble);
    if z >= 0.0 {
        let e = (-z).exp();
        let f_gamble = e / (1.0 + e);
        (f_gamble, 1.0 - f_gamble)
    } else {
        let e = z.exp();
        let f_sure = e / (1.0 + e);
        (1.0 - f_sure, f_sure)
    }
}
