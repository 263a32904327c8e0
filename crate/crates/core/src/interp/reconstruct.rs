//! Reconstruction from sine-wave crossings.
//!
//! For `t = nT + u` the window uses the `2P+1` crossings `n-P ..= n+P` at
//! local positions `pT + δ_{n+p}`, with known values
//! `A(-1)^{n+p} sin(πδ_{n+p}/T)`. The weighted Lagrange sum is evaluated in
//! barycentric form
//!
//! ```text
//! ŝ(nT+u) = Σ_p b_p f_p /(u - τ_p)  /  ( γ(u) · Σ_p b_p /(u - τ_p) )
//! ```
//!
//! where `f_p = s(τ_p)·γ(τ_p)` and `b_p = 1/∏_{q≠p}(τ_p - τ_q)`. The
//! barycentric weights depend only on the crossing window, so
//! [`Reconstructor`] precomputes them for a whole range of windows by a
//! sliding `O(P)` update. Each evaluation then costs `O(P)`.

use super::weight::{gamma_normalized, window_norm};
use super::InterpConfig;
use crate::crossings::CrossingSequence;
use crate::error::{Error, Result};
use crate::scalar::{alt_sign, sin_pi, sinc, Real};

/// Unique split `t = nT + u` with `-T/2 ≤ u < T/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDecomposition<R> {
    pub n: i64,
    pub u: R,
}

/// `n = ⌊t/T + 1/2⌋`, `u = t - nT`, nudged so that `u` always lands in
/// `[-T/2, T/2)` despite rounding.
pub fn grid_decompose<R: Real>(t: R, semi_period: R) -> GridDecomposition<R> {
    let half = R::lit(0.5);
    let mut n = (t / semi_period + half).floor().to_i64().expect("instant within i64 grid range");
    let mut u = t - R::from_int(n) * semi_period;
    let half_t = semi_period * half;
    if u >= half_t {
        n += 1;
        u = t - R::from_int(n) * semi_period;
    } else if u < -half_t {
        n -= 1;
        u = t - R::from_int(n) * semi_period;
    }
    GridDecomposition { n, u }
}

/// Node-proximity guard for the `0/0` case, as a fraction of `T`.
const NODE_GUARD: f64 = 1e-12;

/// Precomputed crossing windows for `O(P)` reconstruction.
///
/// Immutable once built; safe to share across threads.
#[derive(Debug, Clone)]
pub struct Reconstructor<R> {
    config: InterpConfig<R>,
    /// First and last window centre `n` with precomputed weights.
    center_lo: i64,
    center_hi: i64,
    /// `δ_m/T` for `m ∈ [center_lo - P, center_hi + P]`.
    shifts: Vec<R>,
    /// `A(-1)^m sin(πδ_m/T)` for the same indices.
    values: Vec<R>,
    /// Per window, `2P+1` barycentric weights `b_p` (scaled).
    bary: Vec<R>,
    /// Per window, `b_p · s(τ_p) · γ(τ_p)`.
    bary_values: Vec<R>,
}

impl<R: Real> Reconstructor<R> {
    /// Windows for every centre with full coverage in `crossings`.
    pub fn new(crossings: &CrossingSequence<R>, config: &InterpConfig<R>) -> Result<Self> {
        let p = config.half_window() as i64;
        let lo = crossings.n_first() + p;
        let hi = crossings.n_last() - p;
        if hi < lo {
            return Err(Error::Coverage {
                grid_index: None,
                missing_lo: crossings.n_last() + 1,
                missing_hi: crossings.n_first() + 2 * p,
                have_lo: crossings.n_first(),
                have_hi: crossings.n_last(),
            });
        }
        Self::for_centers(crossings, config, (lo, hi))
    }

    /// Windows for centres `n ∈ [lo, hi]` only.
    pub fn for_centers(
        crossings: &CrossingSequence<R>,
        config: &InterpConfig<R>,
        centers: (i64, i64),
    ) -> Result<Self> {
        check_config(crossings, config)?;
        let (center_lo, center_hi) = centers;
        if center_hi < center_lo {
            return Err(Error::invalid("empty window range"));
        }
        let p = config.half_window() as i64;
        crossings.require(center_lo - p, center_hi + p)?;

        let t_s = crossings.semi_period();
        let amp = crossings.amplitude();
        let first = center_lo - p;
        let count = (center_hi + p - first + 1) as usize;
        let shifts: Vec<R> = (0..count)
            .map(|i| crossings.delta(first + i as i64).unwrap() / t_s)
            .collect();
        let values: Vec<R> = shifts
            .iter()
            .enumerate()
            .map(|(i, &x)| amp * alt_sign::<R>(first + i as i64) * sin_pi(x))
            .collect();

        let width = 2 * p as usize + 1;
        let windows = (center_hi - center_lo + 1) as usize;
        let mut me = Reconstructor {
            config: *config,
            center_lo,
            center_hi,
            shifts,
            values,
            bary: Vec::with_capacity(windows * width),
            bary_values: Vec::with_capacity(windows * width),
        };
        me.build_windows();
        Ok(me)
    }

    fn build_windows(&mut self) {
        let p = self.config.half_window();
        let pi = p as i64;
        let width = 2 * p + 1;
        let windows = (self.center_hi - self.center_lo + 1) as usize;
        // Every factor is divided by c = (P!)^{1/P}: weights then range over
        // [1/C(2P,P), 1] instead of [1/(2P)!, 1/(P!)²], and the node products
        // below absorb the 1/(P!)² of the weight function.
        let log_fact: f64 = (1..=p).map(|k| (k as f64).ln()).sum();
        let scale = R::lit((log_fact / p as f64).exp());
        let refresh = width;
        let shifts = &self.shifts;

        // (τ_a - τ_b)/(cT) for absolute local indices a, b
        let diff = |a: usize, b: usize| (R::from_int(a as i64 - b as i64) + shifts[a] - shifts[b]) / scale;
        // ∏_{k ∈ [p-P, p+P], k ≠ 0} (k + η)/c, the weight function's
        // polynomial factor at τ = pT + ηT with its zero at k = 0 removed
        let node_product = |pos: i64, eta: R| {
            ((pos - pi)..=(pos + pi))
                .filter(|&k| k != 0)
                .fold(R::one(), |acc, k| acc * (R::from_int(k) + eta) / scale)
        };

        let mut weights = vec![R::zero(); width];
        let mut products = vec![R::zero(); width];
        for w in 0..windows {
            // `w` is also the index in `shifts` of the node at p = -P
            if w % refresh == 0 {
                for j in 0..width {
                    let a = w + j;
                    let prod = (0..width).filter(|&k| k != j).fold(R::one(), |acc, k| acc * diff(a, w + k));
                    weights[j] = R::one() / prod;
                    products[j] = node_product(j as i64 - pi, shifts[a]);
                }
            } else {
                let out = w - 1;
                let incoming = w + width - 1;
                weights.rotate_left(1);
                products.rotate_left(1);
                for j in 0..width - 1 {
                    let a = w + j;
                    weights[j] = weights[j] * diff(a, out) / diff(a, incoming);
                    // position drops from j-P+1 to j-P: the factor at k = j+1
                    // leaves and k = j-2P enters
                    let pos = j as i64 - pi;
                    let eta = shifts[a];
                    products[j] = products[j] * (R::from_int(pos - pi) + eta) / (R::from_int(pos + 1 + pi) + eta);
                }
                let prod = (0..width - 1).fold(R::one(), |acc, k| acc * diff(incoming, w + k));
                weights[width - 1] = R::one() / prod;
                products[width - 1] = node_product(pi, shifts[incoming]);
            }
            for j in 0..width {
                let a = w + j;
                let pos = j as i64 - pi;
                let eta = shifts[a];
                let local = R::from_int(pos) + eta;
                let g = alt_sign::<R>(pi + pos) * window_norm(local, &self.config) * products[j] / sinc(eta);
                self.bary.push(weights[j]);
                self.bary_values.push(weights[j] * self.values[a] * g);
            }
        }
    }

    pub fn config(&self) -> &InterpConfig<R> {
        &self.config
    }

    /// Range of window centres this reconstructor can serve.
    pub fn centers(&self) -> (i64, i64) {
        (self.center_lo, self.center_hi)
    }

    /// Range of instants `[lo, hi)` this reconstructor can serve.
    pub fn time_range(&self) -> (R, R) {
        let t_s = self.config.semi_period();
        let half = R::lit(0.5);
        (
            (R::from_int(self.center_lo) - half) * t_s,
            (R::from_int(self.center_hi) + half) * t_s,
        )
    }

    /// Reconstructed value at `t`.
    pub fn reconstruct_at(&self, t: R) -> Result<R> {
        let GridDecomposition { n, u } = grid_decompose(t, self.config.semi_period());
        self.reconstruct_local(n, u)
    }

    /// Reconstructed value at `nT + u`, `u ∈ [-T/2, T/2)`.
    pub fn reconstruct_local(&self, n: i64, u: R) -> Result<R> {
        if n < self.center_lo || n > self.center_hi {
            let p = self.config.half_window() as i64;
            let have_lo = self.center_lo - p;
            let have_hi = self.center_hi + p;
            let (missing_lo, missing_hi) = if n < self.center_lo {
                (n - p, (n + p).min(have_lo - 1))
            } else {
                ((n - p).max(have_hi + 1), n + p)
            };
            return Err(Error::Coverage {
                grid_index: None,
                missing_lo,
                missing_hi,
                have_lo,
                have_hi,
            });
        }
        let p = self.config.half_window();
        let width = 2 * p + 1;
        let w = (n - self.center_lo) as usize;
        let x = u / self.config.semi_period();
        let bary = &self.bary[w * width..(w + 1) * width];
        let bary_values = &self.bary_values[w * width..(w + 1) * width];
        let guard = R::tol(NODE_GUARD);
        let mut num = R::zero();
        let mut den = R::zero();
        for j in 0..width {
            let local = R::from_int(j as i64 - p as i64) + self.shifts[w + j];
            let gap = x - local;
            if gap.abs() < guard {
                return Ok(self.values[w + j]);
            }
            num = num + bary_values[j] / gap;
            den = den + bary[j] / gap;
        }
        Ok(num / (gamma_normalized(x, &self.config)? * den))
    }
}

fn check_config<R: Real>(crossings: &CrossingSequence<R>, config: &InterpConfig<R>) -> Result<()> {
    let t_s = crossings.semi_period();
    if (config.semi_period() - t_s).abs() > t_s * R::tol(1e-12) {
        return Err(Error::invalid(format!(
            "config T = {} does not match crossing T = {}",
            config.semi_period(),
            t_s
        )));
    }
    let a = crossings.amplitude();
    if (config.amplitude() - a).abs() > a * R::tol(1e-12) {
        return Err(Error::invalid(format!(
            "config A = {} does not match crossing A = {}",
            config.amplitude(),
            a
        )));
    }
    Ok(())
}

/// One-shot reconstruction at `t` from the window around `t`.
///
/// Builds the single window it needs; use [`Reconstructor`] for many
/// evaluations.
pub fn reconstruct_at<R: Real>(
    crossings: &CrossingSequence<R>,
    config: &InterpConfig<R>,
    t: R,
) -> Result<R> {
    let GridDecomposition { n, u } = grid_decompose(t, config.semi_period());
    Reconstructor::for_centers(crossings, config, (n, n))?.reconstruct_local(n, u)
}

/// Samples `ŝ(n1·T1)` for every `n1 ∈ [lo, hi]`.
pub fn resample_grid<R: Real>(
    crossings: &CrossingSequence<R>,
    config: &InterpConfig<R>,
    spacing: R,
    n1_range: (i64, i64),
) -> Result<Vec<R>> {
    if !(spacing > R::zero()) || !spacing.is_finite() {
        return Err(Error::invalid("grid spacing must be positive"));
    }
    let (lo, hi) = n1_range;
    if hi < lo {
        return Err(Error::invalid("empty output range"));
    }
    let t_s = config.semi_period();
    let p = config.half_window() as i64;
    let decomposed: Vec<GridDecomposition<R>> = (lo..=hi)
        .map(|n1| grid_decompose(R::from_int(n1) * spacing, t_s))
        .collect();
    let n_lo = decomposed.first().unwrap().n;
    let n_hi = decomposed.last().unwrap().n;
    if let Some((i, d)) = decomposed
        .iter()
        .enumerate()
        .find(|(_, d)| crossings.require(d.n - p, d.n + p).is_err())
    {
        let err = crossings.require(d.n - p, d.n + p).unwrap_err();
        return Err(err.at_grid_index(lo + i as i64));
    }
    let rec = Reconstructor::for_centers(crossings, config, (n_lo, n_hi))?;
    decomposed
        .iter()
        .enumerate()
        .map(|(i, d)| {
            rec.reconstruct_local(d.n, d.u)
                .map_err(|e| e.at_grid_index(lo + i as i64))
        })
        .collect()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn decomposition_is_canonical(t in -1e6f64..1e6, period in 0.01f64..10.0) {
            let d = grid_decompose(t, period);
            prop_assert!(d.u >= -period / 2.0 && d.u < period / 2.0);
            let back = d.n as f64 * period + d.u;
            prop_assert!((back - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(period));
        }
    }
}
