//! Reconstruction of a band-limited signal from nonuniform samples and, in
//! particular, from its sine-wave crossings.
//!
//! The interpolator applies Lagrange interpolation to `z(t)·γ(t)`, where `γ`
//! is a fixed weight built from a Kaiser-Bessel window, and divides the
//! result by `γ(t)`. With `2P+1` nodes the error decays like
//! `exp(-π(1 - BT)P)`.
//!
//! In [`window_w`] the square root `√(t² - T_w²)` is never formed as a
//! complex number: inside `|t| < T_w` it is taken as the imaginary value
//! `j·√(T_w² - t²)` and the sinc becomes a hyperbolic sine.

mod error_fit;
mod lagrange;
mod reconstruct;
mod weight;

pub use error_fit::{error_fit_slope_db, predict_error_db, ErrorFitInput, FIT_BANDWIDTH_TIME};
pub use lagrange::{lagrange_nonuniform, lagrange_weighted, NodeSet};
pub use reconstruct::{grid_decompose, reconstruct_at, resample_grid, GridDecomposition, Reconstructor};
pub use weight::{gamma, window_w};

use crate::error::{Error, Result};
use crate::scalar::{sinc_imag, Real};

/// Largest supported half-window. Intermediate products scale like
/// `C(2P, P)`, which stays comfortably inside `f64` range up to here.
pub const MAX_HALF_WINDOW: usize = 60;

/// Parameters shared by the weight function and the reconstructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpConfig<R> {
    bandwidth: R,
    semi_period: R,
    half_window: usize,
    amplitude: R,
    /// `sinc(j·B_w·T_w)`
    window_denominator: R,
}

impl<R: Real> InterpConfig<R> {
    /// `B` two-sided bandwidth, `T` semi-period, `P` half-window and `A` the
    /// probe amplitude the crossings were taken with.
    pub fn new(bandwidth: R, semi_period: R, half_window: usize, amplitude: R) -> Result<Self> {
        if !(semi_period > R::zero()) || !semi_period.is_finite() {
            return Err(Error::invalid("semi-period must be positive"));
        }
        if !(bandwidth > R::zero()) {
            return Err(Error::invalid("bandwidth must be positive"));
        }
        if !(bandwidth * semi_period < R::one()) {
            return Err(Error::invalid(format!(
                "B·T = {} must be strictly below 1",
                bandwidth * semi_period
            )));
        }
        if half_window == 0 || half_window > MAX_HALF_WINDOW {
            return Err(Error::invalid(format!(
                "half-window P must lie in 1..={MAX_HALF_WINDOW}, got {half_window}"
            )));
        }
        if !(amplitude > R::zero()) {
            return Err(Error::invalid("probe amplitude must be positive"));
        }
        let bw_tw = (R::one() - bandwidth * semi_period) * R::from_usize(half_window).unwrap();
        Ok(InterpConfig {
            bandwidth,
            semi_period,
            half_window,
            amplitude,
            window_denominator: sinc_imag(bw_tw),
        })
    }

    /// Config from the product `B·T` rather than `B`.
    pub fn from_bt(bt: R, semi_period: R, half_window: usize, amplitude: R) -> Result<Self> {
        Self::new(bt / semi_period, semi_period, half_window, amplitude)
    }

    pub fn bandwidth(&self) -> R {
        self.bandwidth
    }

    pub fn semi_period(&self) -> R {
        self.semi_period
    }

    pub fn half_window(&self) -> usize {
        self.half_window
    }

    pub fn amplitude(&self) -> R {
        self.amplitude
    }

    pub fn bandwidth_time(&self) -> R {
        self.bandwidth * self.semi_period
    }

    /// `B_w = 1/T - B`.
    pub fn window_bandwidth(&self) -> R {
        R::one() / self.semi_period - self.bandwidth
    }

    /// `T_w = P·T`.
    pub fn window_halfwidth(&self) -> R {
        R::from_usize(self.half_window).unwrap() * self.semi_period
    }

    /// Same config with another half-window.
    pub fn with_half_window(&self, half_window: usize) -> Result<Self> {
        Self::new(self.bandwidth, self.semi_period, half_window, self.amplitude)
    }

    /// `B_w·T`, the window bandwidth in units of `1/T`.
    pub(crate) fn window_bandwidth_norm(&self) -> R {
        R::one() - self.bandwidth * self.semi_period
    }

    pub(crate) fn window_denominator(&self) -> R {
        self.window_denominator
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_window_constants() {
        let c = InterpConfig::new(0.7f64, 1.0, 10, 1.1).unwrap();
        assert!((c.window_bandwidth() - 0.3).abs() < 1e-15);
        assert_eq!(c.window_halfwidth(), 10.0);
        let c = InterpConfig::from_bt(0.7f64, 2.0, 3, 1.1).unwrap();
        assert!((c.bandwidth() - 0.35).abs() < 1e-15);
        assert!((c.window_bandwidth() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(InterpConfig::new(1.0f64, 1.0, 4, 1.0).is_err());
        assert!(InterpConfig::new(0.7f64, 1.0, 0, 1.0).is_err());
        assert!(InterpConfig::new(0.7f64, 1.0, MAX_HALF_WINDOW + 1, 1.0).is_err());
        assert!(InterpConfig::new(0.7f64, -1.0, 4, 1.0).is_err());
        assert!(InterpConfig::new(0.7f64, 1.0, 4, 0.0).is_err());
    }
}
