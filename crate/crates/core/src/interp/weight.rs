//! Kaiser-Bessel time window and the Lagrange weight function built on it.

use super::InterpConfig;
use crate::error::{Error, Result};
use crate::scalar::{sinc, sinc_imag, Real};

/// Time-domain Kaiser-Bessel window
/// `w(t) = sinc(B_w·√(t² - T_w²)) / sinc(j·B_w·T_w)`.
///
/// For `|t| < T_w` the square root is imaginary and the numerator is taken
/// as `sinh(πa)/(πa)` with `a = B_w·√(T_w² - t²)`; for `|t| ≥ T_w` the
/// ordinary real sinc is used. The two branches meet at `|t| = T_w` where
/// both equal one. `w(0) = 1`.
pub fn window_w<R: Real>(t: R, config: &InterpConfig<R>) -> R {
    window_norm(t / config.semi_period(), config)
}

/// Window evaluated at `x = t/T`.
pub(crate) fn window_norm<R: Real>(x: R, config: &InterpConfig<R>) -> R {
    let bw = config.window_bandwidth_norm();
    let p = R::from_usize(config.half_window()).unwrap();
    let ax = x.abs();
    // (|x| - P)(|x| + P) avoids cancellation near the branch point
    let gap = (ax - p) * (ax + p);
    let num = if gap < R::zero() {
        sinc_imag(bw * (-gap).sqrt())
    } else {
        sinc(bw * gap.sqrt())
    };
    num / config.window_denominator()
}

/// Weight function
/// `γ(t) = (-1)^P/(P!)² · w(t)·L_o(t)/sin(πt/T)`, `L_o(t) = ∏_{|p|≤P}(t - pT)`.
///
/// The zeros of `sin(πt/T)` at `t = pT`, `|p| ≤ P`, cancel against `L_o` and
/// return the analytic limit. `γ(0) = T^{2P+1}/π`. Points within `1e-9·T` of
/// a sine zero with `|p| > P` are genuine poles and give a domain error.
pub fn gamma<R: Real>(t: R, config: &InterpConfig<R>) -> Result<R> {
    let scale = config.semi_period().powi(2 * config.half_window() as i32 + 1) / R::PI();
    Ok(gamma_normalized(t / config.semi_period(), config)? * scale)
}

/// `γ(xT)·π/T^{2P+1}`, so that the value at `x = 0` is exactly one.
///
/// Uses `γ = w · T^{2P+1}/π · ∏_{p=1..P}(1 - x²/p²) / sinc(x)`. Near an
/// integer `q` with `1 ≤ |q| ≤ P` the vanishing factor is rewritten with
/// `h = |x| - q` as `(1 - x²/q²)/sinc(x) = (-1)^{q+1}(2q + h)|x|/q² / sinc(h)`.
pub(crate) fn gamma_normalized<R: Real>(x: R, config: &InterpConfig<R>) -> Result<R> {
    let half_window = config.half_window();
    let ax = x.abs();
    let q_real = ax.round();
    let q = q_real.to_usize().unwrap_or(usize::MAX);
    let h = ax - q_real;
    let w = window_norm(x, config);
    if q == 0 {
        let prod = (1..=half_window).fold(R::one(), |acc, p| {
            let r = ax / R::from_usize(p).unwrap();
            acc * (R::one() - r * r)
        });
        return Ok(w * prod / sinc(x));
    }
    if q > half_window {
        if h.abs() < R::tol(1e-9) {
            return Err(Error::Domain(format!(
                "γ has a pole at t = {}·T (|p| > P = {half_window})",
                q_real * x.signum()
            )));
        }
        let prod = (1..=half_window).fold(R::one(), |acc, p| {
            let r = ax / R::from_usize(p).unwrap();
            acc * (R::one() - r * r)
        });
        return Ok(w * prod / sinc(ax));
    }
    let prod = (1..=half_window)
        .filter(|&p| p != q)
        .fold(R::one(), |acc, p| {
            let r = ax / R::from_usize(p).unwrap();
            acc * (R::one() - r * r)
        });
    let sign = if q % 2 == 0 { -R::one() } else { R::one() };
    let two_q = R::lit(2.0) * q_real;
    let removed = sign * (two_q + h) * ax / (q_real * q_real) / sinc(h);
    Ok(w * prod * removed)
}
