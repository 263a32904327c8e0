//! Empirical error model of the crossing interpolator.
//!
//! Sup error in dB relative to `A_s`, as a polynomial in the shift bound
//! `δ/T` and the half-window `P`. Fitted for `BT = 0.7` only; any other
//! `BT` is reported as an extrapolation.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The only bandwidth-time product the fit was made for.
pub const FIT_BANDWIDTH_TIME: f64 = 0.7;

const C0: f64 = 4.12106;
const C_D: f64 = 66.6044;
const C_DD: f64 = -9.35838;
const C_P: f64 = -8.30873;
const C_DP: f64 = 3.13419;
const C_DDP: f64 = -0.125803;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorFitInput<R> {
    /// `δ/T`, in `[0, 1/2)`.
    pub delta_over_t: R,
    pub half_window: usize,
    pub bandwidth_time: R,
}

impl<R: Real> ErrorFitInput<R> {
    /// Input at the fitted `BT = 0.7`.
    pub fn new(delta_over_t: R, half_window: usize) -> Result<Self> {
        Self::with_bandwidth_time(delta_over_t, half_window, R::lit(FIT_BANDWIDTH_TIME))
    }

    pub fn with_bandwidth_time(delta_over_t: R, half_window: usize, bandwidth_time: R) -> Result<Self> {
        if !(delta_over_t >= R::zero() && delta_over_t < R::lit(0.5)) {
            return Err(Error::invalid(format!("δ/T = {delta_over_t} outside [0, 1/2)")));
        }
        Ok(ErrorFitInput {
            delta_over_t,
            half_window,
            bandwidth_time,
        })
    }

    /// True when `BT` differs from the fitted value.
    pub fn is_extrapolation(&self) -> bool {
        (self.bandwidth_time - R::lit(FIT_BANDWIDTH_TIME)).abs() > R::tol(1e-12)
    }
}

/// Predicted sup error in dB.
pub fn predict_error_db<R: Real>(input: &ErrorFitInput<R>) -> R {
    let d = input.delta_over_t;
    let p = R::from_usize(input.half_window).unwrap();
    R::lit(C0) + R::lit(C_D) * d + R::lit(C_DD) * d * d + error_fit_slope_db(d) * p
}

/// Change of the predicted error per unit increase of `P`, in dB.
pub fn error_fit_slope_db<R: Real>(delta_over_t: R) -> R {
    let d = delta_over_t;
    R::lit(C_P) + R::lit(C_DP) * d + R::lit(C_DDP) * d * d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(d: f64, p: usize) -> f64 {
        predict_error_db(&ErrorFitInput::new(d, p).unwrap())
    }

    #[test]
    fn constant_term() {
        assert!((at(0.0, 0) - 4.12106).abs() < 1e-12);
    }

    #[test]
    fn anchor_values() {
        // term-by-term sums evaluated independently with exact decimals
        assert!((at(0.25, 10) - (-55.143_190_625)).abs() < 1e-9);
        assert!((at(0.25, 16) - (-100.341_461_75)).abs() < 1e-9);
        assert!(at(0.25, 10) < -55.0);
        assert!(at(0.25, 16) < -100.0);
    }

    #[test]
    fn slope_matches_finite_difference() {
        for &d in &[0.0, 0.1, 0.2323, 0.36] {
            let s = at(d, 11) - at(d, 10);
            assert!((s - error_fit_slope_db(d)).abs() < 1e-10);
        }
        assert!((error_fit_slope_db(0.0f64) - (-8.30873)).abs() < 1e-15);
    }

    #[test]
    fn extrapolation_flag_and_domain() {
        assert!(!ErrorFitInput::new(0.2, 8).unwrap().is_extrapolation());
        assert!(ErrorFitInput::with_bandwidth_time(0.2, 8, 0.5).unwrap().is_extrapolation());
        assert!(ErrorFitInput::new(0.5, 8).is_err());
        assert!(ErrorFitInput::new(-0.01, 8).is_err());
    }
}
