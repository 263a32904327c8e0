//! Band-limited test signals: raised-cosine BPSK, truncated sinc series and
//! sums of both, plus supremum and power estimation over an interval.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{alt_sign, cos_pi, sin_pi, sinc, Real};

/// Anything that can be evaluated as a real band-limited signal.
///
/// `bandwidth` is the two-sided bandwidth `B` (spectrum inside `[-B/2, B/2]`)
/// and `sup_bound` the declared bound on `|s(t)|`.
pub trait Bandlimited<R: Real> {
    fn eval(&self, t: R) -> R;
    fn bandwidth(&self) -> R;
    fn sup_bound(&self) -> R;
}

/// Random ±1 symbols drawn from a seeded ChaCha stream.
pub fn random_symbols<R: Real>(count: usize, seed: u64) -> Vec<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| if rng.random::<bool>() { R::one() } else { -R::one() })
        .collect()
}

/// Raised-cosine pulse with roll-off `beta`, time `d` in symbol periods.
///
/// The removable singularities at `d = ±1/(2·beta)` go through the exact
/// rewrite `cos(πy/2)/(1-y²) = (π/2)·sinc(e/2)/(2+e)` with `e = |y| - 1`.
pub fn raised_cosine<R: Real>(d: R, beta: R) -> R {
    sinc(d) * raised_cosine_taper(d, beta)
}

fn raised_cosine_taper<R: Real>(d: R, beta: R) -> R {
    let y = R::lit(2.0) * beta * d;
    let denom = R::one() - y * y;
    if denom.abs() < R::lit(1e-2) {
        let e = y.abs() - R::one();
        R::FRAC_PI_2() * sinc(e / R::lit(2.0)) / (R::lit(2.0) + e)
    } else {
        cos_pi(beta * d) / denom
    }
}

/// Parameters of a raised-cosine BPSK signal.
#[derive(Debug, Clone, PartialEq)]
pub struct BpskParams<R> {
    /// ±1 amplitudes, symbol `k` centred at `start + k·symbol_period`.
    pub symbols: Vec<R>,
    /// Roll-off factor in `(0, 1]`.
    pub rolloff: R,
    pub symbol_period: R,
    /// Seed the symbols were drawn with, if they were auto-generated.
    pub seed: Option<u64>,
    /// Amplitude factor applied to the pulse train. [`make_bpsk`] sets it so
    /// that the peak is one.
    pub scale: R,
    pub start: R,
    /// Optional pulse truncation, half-length in symbol periods. `None`
    /// keeps every pulse untruncated, so the signal stays exactly
    /// band-limited.
    pub truncation: Option<R>,
}

impl<R: Real> BpskParams<R> {
    pub fn new(symbols: Vec<R>, rolloff: R, symbol_period: R) -> Self {
        BpskParams {
            symbols,
            rolloff,
            symbol_period,
            seed: None,
            scale: R::one(),
            start: R::zero(),
            truncation: None,
        }
    }

    /// `count` random symbols from `seed`.
    pub fn random(count: usize, rolloff: R, symbol_period: R, seed: u64) -> Self {
        let mut p = Self::new(random_symbols(count, seed), rolloff, symbol_period);
        p.seed = Some(seed);
        p
    }

    pub fn with_start(mut self, start: R) -> Self {
        self.start = start;
        self
    }

    pub fn with_truncation(mut self, half_length: Option<R>) -> Self {
        self.truncation = half_length;
        self
    }

    /// Two-sided bandwidth `(1 + rolloff) / symbol_period`.
    pub fn bandwidth(&self) -> R {
        (R::one() + self.rolloff) / self.symbol_period
    }

    fn validate(&self) -> Result<()> {
        if self.symbols.is_empty() {
            return Err(Error::invalid("BPSK needs at least one symbol"));
        }
        if !(self.rolloff > R::zero() && self.rolloff <= R::one()) {
            return Err(Error::invalid(format!(
                "roll-off must lie in (0, 1], got {}",
                self.rolloff
            )));
        }
        if !(self.symbol_period > R::zero()) || !self.symbol_period.is_finite() {
            return Err(Error::invalid("symbol period must be positive"));
        }
        if let Some(l) = self.truncation {
            if !(l > R::zero()) {
                return Err(Error::invalid("pulse truncation must be positive"));
            }
        }
        Ok(())
    }
}

/// Parameters of a truncated sinc series `Σ c_k sinc(rate·t - (origin + k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SincSeriesParams<R> {
    pub coefficients: Vec<R>,
    /// Samples per second; equals the bandwidth `B`.
    pub rate: R,
    pub origin_index: i64,
}

#[derive(Debug, Clone)]
struct BpskSignal<R> {
    params: BpskParams<R>,
    /// `a_k (-1)^k cos(πβk)` and `a_k (-1)^k sin(πβk)`.
    cos_terms: Vec<R>,
    sin_terms: Vec<R>,
}

impl<R: Real> BpskSignal<R> {
    fn new(params: BpskParams<R>) -> Self {
        let beta = params.rolloff;
        let (cos_terms, sin_terms) = params
            .symbols
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                let kr = R::from_usize(k).unwrap();
                let sa = a * alt_sign::<R>(k as i64);
                (sa * cos_pi(beta * kr), sa * sin_pi(beta * kr))
            })
            .unzip();
        BpskSignal {
            params,
            cos_terms,
            sin_terms,
        }
    }

    fn eval_unscaled(&self, t: R) -> R {
        let p = &self.params;
        let beta = p.rolloff;
        let x = (t - p.start) / p.symbol_period;
        let count = p.symbols.len();
        let (lo, hi) = match p.truncation {
            Some(l) => {
                let lo = (x - l).ceil().max(R::zero());
                let hi = (x + l).floor();
                if hi < lo {
                    return R::zero();
                }
                let hi = hi.to_usize().unwrap_or(0).min(count - 1);
                (lo.to_usize().unwrap_or(count), hi)
            }
            None => (0, count - 1),
        };
        if lo > hi {
            return R::zero();
        }
        let sx = sin_pi(x);
        let cbx = cos_pi(beta * x);
        let sbx = sin_pi(beta * x);
        let four_b2 = R::lit(4.0) * beta * beta;
        let near_zero = R::lit(0.5);
        let near_pole = R::lit(0.05);
        let mut acc = R::zero();
        for k in lo..=hi {
            let d = x - R::from_usize(k).unwrap();
            let denom = R::one() - four_b2 * d * d;
            if d.abs() < near_zero || denom.abs() < near_pole {
                acc = acc + p.symbols[k] * raised_cosine(d, beta);
            } else {
                let num = cbx * self.cos_terms[k] + sbx * self.sin_terms[k];
                acc = acc + sx * num / (R::PI() * d * denom);
            }
        }
        acc
    }

    fn eval(&self, t: R) -> R {
        self.params.scale * self.eval_unscaled(t)
    }

    fn support(&self) -> (R, R) {
        let p = &self.params;
        let pad = R::lit(4.0) * p.symbol_period;
        let last = R::from_usize(p.symbols.len() - 1).unwrap();
        (p.start - pad, p.start + last * p.symbol_period + pad)
    }
}

#[derive(Debug, Clone)]
struct SincSeries<R> {
    params: SincSeriesParams<R>,
    /// `c_k (-1)^(origin + k)`
    signed: Vec<R>,
}

impl<R: Real> SincSeries<R> {
    fn new(params: SincSeriesParams<R>) -> Self {
        let signed = params
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, &c)| c * alt_sign::<R>(params.origin_index + k as i64))
            .collect();
        SincSeries { params, signed }
    }

    fn eval(&self, t: R) -> R {
        let x = self.params.rate * t;
        let sx = sin_pi(x);
        let origin = R::from_int(self.params.origin_index);
        let near = R::lit(1e-3);
        let mut acc = R::zero();
        for (k, (&c, &sc)) in self
            .params
            .coefficients
            .iter()
            .zip(self.signed.iter())
            .enumerate()
        {
            let d = x - (origin + R::from_usize(k).unwrap());
            if d.abs() < near {
                acc = acc + c * sinc(d);
            } else {
                acc = acc + sc * sx / (R::PI() * d);
            }
        }
        acc
    }

    fn support(&self) -> (R, R) {
        let p = &self.params;
        let first = R::from_int(p.origin_index);
        let last = first + R::from_usize(p.coefficients.len().max(1) - 1).unwrap();
        let pad = R::lit(4.0);
        ((first - pad) / p.rate, (last + pad) / p.rate)
    }
}

#[derive(Debug, Clone)]
enum Payload<R> {
    Bpsk(BpskSignal<R>),
    SincSeries(SincSeries<R>),
    Sum(Vec<BandlimitedSignal<R>>),
}

/// Which representation a [`BandlimitedSignal`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Bpsk,
    SincSeries,
    Sum,
}

/// Immutable band-limited signal with a declared bandwidth and supremum
/// bound.
#[derive(Debug, Clone)]
pub struct BandlimitedSignal<R> {
    bandwidth: R,
    sup_bound: R,
    payload: Payload<R>,
}

impl<R: Real> BandlimitedSignal<R> {
    /// Identically zero signal with bandwidth `B`.
    pub fn zero(bandwidth: R) -> Self {
        BandlimitedSignal {
            bandwidth,
            sup_bound: R::zero(),
            payload: Payload::SincSeries(SincSeries::new(SincSeriesParams {
                coefficients: vec![R::zero()],
                rate: bandwidth,
                origin_index: 0,
            })),
        }
    }

    /// Sinc series with an explicit supremum bound.
    pub fn sinc_series(params: SincSeriesParams<R>, sup_bound: R) -> Result<Self> {
        if !(params.rate > R::zero()) || !params.rate.is_finite() {
            return Err(Error::invalid("sinc-series rate must be positive"));
        }
        if params.coefficients.is_empty() {
            return Err(Error::invalid("sinc series needs at least one coefficient"));
        }
        Ok(BandlimitedSignal {
            bandwidth: params.rate,
            sup_bound,
            payload: Payload::SincSeries(SincSeries::new(params)),
        })
    }

    /// Sinc series whose supremum bound is estimated over its support.
    pub fn sinc_series_estimated(params: SincSeriesParams<R>) -> Result<Self> {
        let mut s = Self::sinc_series(params, R::zero())?;
        let (t0, t1) = s.support();
        s.sup_bound = estimate_sup(&s, (t0, t1), 16)?;
        Ok(s)
    }

    /// BPSK signal with the given params taken as-is (no peak normalization).
    pub fn bpsk_raw(params: BpskParams<R>, sup_bound: R) -> Result<Self> {
        params.validate()?;
        Ok(BandlimitedSignal {
            bandwidth: params.bandwidth(),
            sup_bound,
            payload: Payload::Bpsk(BpskSignal::new(params)),
        })
    }

    /// Sum of signals. Bandwidth is the widest part's; the supremum bound is
    /// estimated over the union of supports.
    pub fn sum(parts: Vec<Self>) -> Result<Self> {
        let mut s = Self::sum_with_bound(parts, R::zero())?;
        let support = s.support();
        s.sup_bound = estimate_sup(&s, support, 16)?;
        Ok(s)
    }

    pub fn sum_with_bound(parts: Vec<Self>, sup_bound: R) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("sum of zero signals"));
        }
        let bandwidth = parts
            .iter()
            .map(|p| p.bandwidth)
            .fold(R::zero(), |a, b| a.max(b));
        Ok(BandlimitedSignal {
            bandwidth,
            sup_bound,
            payload: Payload::Sum(parts),
        })
    }

    /// Copy scaled by `factor` (amplitude and bound).
    pub fn scaled(&self, factor: R) -> Self {
        let payload = match &self.payload {
            Payload::Bpsk(b) => {
                let mut params = b.params.clone();
                params.scale = params.scale * factor;
                Payload::Bpsk(BpskSignal::new(params))
            }
            Payload::SincSeries(s) => {
                let mut params = s.params.clone();
                for c in params.coefficients.iter_mut() {
                    *c = *c * factor;
                }
                Payload::SincSeries(SincSeries::new(params))
            }
            Payload::Sum(parts) => Payload::Sum(parts.iter().map(|p| p.scaled(factor)).collect()),
        };
        BandlimitedSignal {
            bandwidth: self.bandwidth,
            sup_bound: self.sup_bound * factor.abs(),
            payload,
        }
    }

    pub fn eval(&self, t: R) -> R {
        match &self.payload {
            Payload::Bpsk(b) => b.eval(t),
            Payload::SincSeries(s) => s.eval(t),
            Payload::Sum(parts) => parts.iter().map(|p| p.eval(t)).sum(),
        }
    }

    pub fn kind(&self) -> SignalKind {
        match self.payload {
            Payload::Bpsk(_) => SignalKind::Bpsk,
            Payload::SincSeries(_) => SignalKind::SincSeries,
            Payload::Sum(_) => SignalKind::Sum,
        }
    }

    pub fn bandwidth(&self) -> R {
        self.bandwidth
    }

    pub fn sup_bound(&self) -> R {
        self.sup_bound
    }

    /// Interval outside of which the signal is only a decaying tail.
    pub fn support(&self) -> (R, R) {
        match &self.payload {
            Payload::Bpsk(b) => b.support(),
            Payload::SincSeries(s) => s.support(),
            Payload::Sum(parts) => parts.iter().map(|p| p.support()).fold(
                (R::infinity(), R::neg_infinity()),
                |(a, b), (c, d)| (a.min(c), b.max(d)),
            ),
        }
    }

    pub fn bpsk_params(&self) -> Option<&BpskParams<R>> {
        match &self.payload {
            Payload::Bpsk(b) => Some(&b.params),
            _ => None,
        }
    }

    pub fn sinc_series_params(&self) -> Option<&SincSeriesParams<R>> {
        match &self.payload {
            Payload::SincSeries(s) => Some(&s.params),
            _ => None,
        }
    }

    pub fn parts(&self) -> Option<&[BandlimitedSignal<R>]> {
        match &self.payload {
            Payload::Sum(p) => Some(p),
            _ => None,
        }
    }
}

impl<R: Real> Bandlimited<R> for BandlimitedSignal<R> {
    fn eval(&self, t: R) -> R {
        BandlimitedSignal::eval(self, t)
    }
    fn bandwidth(&self) -> R {
        self.bandwidth
    }
    fn sup_bound(&self) -> R {
        self.sup_bound
    }
}

/// Peak-normalized raised-cosine BPSK signal.
///
/// The pulse train is scaled so that its supremum (estimated over the
/// support) is one; `A_s = 1` and `B = (1 + rolloff)/symbol_period`.
pub fn make_bpsk<R: Real>(mut params: BpskParams<R>) -> Result<BandlimitedSignal<R>> {
    params.validate()?;
    params.scale = R::one();
    let raw = BandlimitedSignal::bpsk_raw(params.clone(), R::zero())?;
    let support = raw.support();
    let peak = estimate_sup(&raw, support, 32)?;
    if !(peak > R::zero()) {
        return Err(Error::invalid("BPSK pulse train has zero peak"));
    }
    params.scale = R::one() / peak;
    BandlimitedSignal::bpsk_raw(params, R::one())
}

/// Band-limited Gaussian noise as a sinc series at rate `B`.
///
/// Coefficients are i.i.d. standard normal draws, then rescaled so that the
/// mean power over `interval` equals `target_power`. A zero target yields the
/// zero signal.
pub fn make_bandlimited_noise<R: Real>(
    bandwidth: R,
    target_power: R,
    interval: (R, R),
    seed: u64,
) -> Result<BandlimitedSignal<R>> {
    if !(bandwidth > R::zero()) {
        return Err(Error::invalid("noise bandwidth must be positive"));
    }
    if target_power < R::zero() || !target_power.is_finite() {
        return Err(Error::invalid("target power must be non-negative"));
    }
    let (t0, t1) = interval;
    if !(t1 > t0) {
        return Err(Error::invalid("empty noise interval"));
    }
    let m0 = (bandwidth * t0).floor().to_i64().unwrap();
    let m1 = (bandwidth * t1).ceil().to_i64().unwrap();
    let count = (m1 - m0 + 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<R> = (0..count)
        .map(|_| R::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let params = SincSeriesParams {
        coefficients: draws,
        rate: bandwidth,
        origin_index: m0,
    };
    if target_power == R::zero() {
        let zeroed = SincSeriesParams {
            coefficients: vec![R::zero(); count],
            ..params
        };
        return BandlimitedSignal::sinc_series(zeroed, R::zero());
    }
    let unit = BandlimitedSignal::sinc_series(params, R::zero())?;
    let power = mean_power(&unit, interval, 16)?;
    let scaled = unit.scaled((target_power / power).sqrt());
    let support = scaled.support();
    let mut out = scaled;
    out.sup_bound = estimate_sup(&out, support, 16)?;
    Ok(out)
}

/// Mean power `(1/|I|)∫ s² dt` by the trapezoidal rule with
/// `density` points per `1/B`.
pub fn mean_power<R: Real, S: Bandlimited<R> + ?Sized>(
    signal: &S,
    interval: (R, R),
    density: usize,
) -> Result<R> {
    let (t0, t1) = interval;
    if !(t1 > t0) {
        return Err(Error::invalid("empty power interval"));
    }
    let step_target = R::one() / (signal.bandwidth() * R::from_usize(density.max(1)).unwrap());
    let segments = ((t1 - t0) / step_target).ceil().to_usize().unwrap().max(1);
    let h = (t1 - t0) / R::from_usize(segments).unwrap();
    let mut acc = R::zero();
    for i in 0..=segments {
        let t = t0 + h * R::from_usize(i).unwrap();
        let v = signal.eval(t);
        let w = if i == 0 || i == segments {
            R::lit(0.5)
        } else {
            R::one()
        };
        acc = acc + w * v * v;
    }
    Ok(acc * h / (t1 - t0))
}

/// Supremum of `|s(t)|` over `interval`.
///
/// Evaluates a grid with `grid_density` points per `1/B`, then refines the
/// largest local maxima by golden-section ascent within one grid step. The
/// result is never below the grid maximum.
pub fn estimate_sup<R: Real, S: Bandlimited<R> + ?Sized>(
    signal: &S,
    interval: (R, R),
    grid_density: usize,
) -> Result<R> {
    let (t0, t1) = interval;
    if !(t1 > t0) {
        return Err(Error::invalid("empty supremum interval"));
    }
    if grid_density < 8 {
        return Err(Error::invalid("grid density must be at least 8 per 1/B"));
    }
    let step_target = R::one() / (signal.bandwidth() * R::from_usize(grid_density).unwrap());
    let segments = ((t1 - t0) / step_target).ceil().to_usize().unwrap().max(1);
    let h = (t1 - t0) / R::from_usize(segments).unwrap();
    let at = |i: usize| t0 + h * R::from_usize(i).unwrap();
    let values: Vec<R> = (0..=segments).map(|i| signal.eval(at(i)).abs()).collect();

    let mut peaks: Vec<usize> = (0..=segments)
        .filter(|&i| {
            let left = i == 0 || values[i - 1] <= values[i];
            let right = i == segments || values[i + 1] <= values[i];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    peaks.truncate(8);

    let mut best = values.iter().copied().fold(R::zero(), R::max);
    for i in peaks {
        let lo = (at(i) - h).max(t0);
        let hi = (at(i) + h).min(t1);
        let v = golden_max(|t| signal.eval(t).abs(), lo, hi, h * R::tol(1e-10));
        best = best.max(v);
    }
    Ok(best)
}

fn golden_max<R: Real>(f: impl Fn(R) -> R, mut a: R, mut b: R, tol: R) -> R {
    let ratio = (R::lit(5.0).sqrt() - R::one()) / R::lit(2.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = f(a).max(f(b)).max(fc).max(fd);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
            best = best.max(fd);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_sinc(rate: f64) -> BandlimitedSignal<f64> {
        BandlimitedSignal::sinc_series(
            SincSeriesParams {
                coefficients: vec![1.0],
                rate,
                origin_index: 0,
            },
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_signal_evaluates_to_zero() {
        let z = BandlimitedSignal::<f64>::zero(0.7);
        for &t in &[-3.0, 0.0, 0.25, 17.5] {
            assert_eq!(z.eval(t), 0.0);
        }
        assert_eq!(estimate_sup(&z, (-5.0, 5.0), 8).unwrap(), 0.0);
    }

    #[test]
    fn sinc_series_values() {
        let b = 0.7;
        let s = unit_sinc(b);
        assert_eq!(s.eval(0.0), 1.0);
        // sinc(1/2) = 2/π
        assert!((s.eval(1.0 / (2.0 * b)) - 0.636_619_772_367_581_3).abs() < 1e-15);
        let sup = estimate_sup(&s, (-10.0 / b, 10.0 / b), 8).unwrap();
        assert!((sup - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sinc_series_reproduces_coefficients_at_sample_instants() {
        let coeffs = vec![0.3, -1.2, 0.7, 2.0, -0.1, 0.0, 0.9];
        let b = 0.7;
        let s = BandlimitedSignal::sinc_series(
            SincSeriesParams {
                coefficients: coeffs.clone(),
                rate: b,
                origin_index: -3,
            },
            3.0,
        )
        .unwrap();
        for (k, &c) in coeffs.iter().enumerate() {
            let n = -3 + k as i64;
            assert!((s.eval(n as f64 / b) - c).abs() < 1e-14, "index {n}");
        }
    }

    #[test]
    fn raised_cosine_singularity_matches_analytic_limit() {
        // (β/2)·sin(π/(2β)) = 0.1 for β = 0.2 (extended-precision limit).
        let beta = 0.2f64;
        let d0 = 1.0 / (2.0 * beta);
        assert!((raised_cosine(d0, beta) - 0.1).abs() < 1e-15);
        assert!((raised_cosine(-d0, beta) - 0.1).abs() < 1e-15);
        // Continuity across both sides of the series branch.
        for &h in &[1e-9, 1e-6, 1e-3, 2e-2] {
            let direct = |d: f64| {
                (std::f64::consts::PI * d).sin() / (std::f64::consts::PI * d)
                    * (std::f64::consts::PI * beta * d).cos()
                    / (1.0 - (2.0 * beta * d).powi(2))
            };
            let d = d0 + h;
            let tol = if h <= 1e-6 { 1e-6 } else { 1e-12 };
            assert!((raised_cosine(d, beta) - direct(d)).abs() < tol, "h={h}");
        }
    }

    #[test]
    fn single_symbol_bpsk_is_the_pulse() {
        let p = BpskParams::new(vec![1.0f64], 0.2, 1.0);
        let s = make_bpsk(p).unwrap();
        assert!((s.eval(0.0) - 1.0).abs() < 1e-12);
        let d0 = 1.0 / (2.0 * 0.2);
        assert!((s.eval(d0) - 0.1).abs() < 1e-12);
        assert!((s.eval(-d0) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn empty_symbols_rejected() {
        let p = BpskParams::<f64>::new(vec![], 0.2, 1.0);
        assert!(matches!(make_bpsk(p), Err(Error::InvalidArgument(_))));
        let p = BpskParams::<f64>::new(vec![1.0; 8], 0.0, 1.0);
        assert!(make_bpsk(p).is_err());
    }

    #[test]
    fn bpsk_bandwidth_and_peak() {
        // BT = 0.7 with T = 1 and roll-off 0.2
        let ts = 1.2f64 / 0.7;
        let s = make_bpsk(BpskParams::random(64, 0.2, ts, 11)).unwrap();
        assert!((s.bandwidth() - 0.7).abs() < 1e-14);
        assert_eq!(s.sup_bound(), 1.0);
        let (t0, t1) = s.support();
        let n = 40_000;
        let grid_max = (0..=n)
            .map(|i| s.eval(t0 + (t1 - t0) * i as f64 / n as f64).abs())
            .fold(0.0, f64::max);
        assert!((grid_max - 1.0).abs() < 1e-6, "grid max {grid_max}");
        assert!(grid_max <= 1.0 + 1e-12);
    }

    #[test]
    fn fast_bpsk_path_matches_direct_pulse_sum() {
        let ts = 1.2 / 0.7;
        let params = BpskParams::random(40, 0.2, ts, 5).with_start(-3.0);
        let s = BandlimitedSignal::bpsk_raw(params.clone(), 1.0).unwrap();
        for i in 0..500 {
            let t = -20.0 + i as f64 * 0.173;
            let direct: f64 = params
                .symbols
                .iter()
                .enumerate()
                .map(|(k, &a)| a * raised_cosine((t + 3.0) / ts - k as f64, 0.2))
                .sum();
            assert!((s.eval(t) - direct).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn truncated_bpsk_only_sums_nearby_symbols() {
        let ts = 1.0;
        let params = BpskParams::random(50, 0.5, ts, 2).with_truncation(Some(4.0));
        let s = BandlimitedSignal::bpsk_raw(params.clone(), 1.0).unwrap();
        let t = 20.3;
        let direct: f64 = (17..=24)
            .map(|k| params.symbols[k] * raised_cosine(t - k as f64, 0.5))
            .sum();
        assert!((s.eval(t) - direct).abs() < 1e-13);
        assert_eq!(s.eval(-10.0), 0.0);
    }

    #[test]
    fn random_symbols_are_deterministic() {
        let a: Vec<f64> = random_symbols(100, 42);
        let b: Vec<f64> = random_symbols(100, 42);
        assert_eq!(a, b);
        assert!(a.iter().all(|&x| x == 1.0 || x == -1.0));
        let c: Vec<f64> = random_symbols(100, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_is_deterministic_and_hits_target_power() {
        let a = make_bandlimited_noise(1.0, 1.0, (0.0, 4095.0), 9).unwrap();
        let b = make_bandlimited_noise(1.0, 1.0, (0.0, 4095.0), 9).unwrap();
        assert_eq!(
            a.sinc_series_params().unwrap().coefficients,
            b.sinc_series_params().unwrap().coefficients
        );
        // Independent midpoint-rule integration over the central interval.
        let (t0, t1) = (512.0, 3584.0);
        let n = 200_000;
        let h = (t1 - t0) / n as f64;
        let power: f64 = (0..n)
            .map(|i| a.eval(t0 + (i as f64 + 0.5) * h).powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((0.95..=1.05).contains(&power), "power {power}");
        assert!(a.sup_bound() > 2.0);
    }

    #[test]
    fn zero_power_noise_is_zero() {
        let z = make_bandlimited_noise(1.0, 0.0, (0.0, 100.0), 1).unwrap();
        assert_eq!(z.eval(3.3), 0.0);
        assert_eq!(z.sup_bound(), 0.0);
        assert!(make_bandlimited_noise(1.0, -1.0, (0.0, 100.0), 1).is_err());
    }

    #[test]
    fn estimate_sup_rejects_bad_input() {
        let s = unit_sinc(1.0);
        assert!(estimate_sup(&s, (1.0, 1.0), 8).is_err());
        assert!(estimate_sup(&s, (0.0, 1.0), 4).is_err());
    }

    #[test]
    fn sum_combines_parts() {
        let a = unit_sinc(0.5);
        let b = a.scaled(-0.5);
        let s = BandlimitedSignal::sum(vec![a.clone(), b]).unwrap();
        assert_eq!(s.kind(), SignalKind::Sum);
        assert!((s.eval(0.0) - 0.5).abs() < 1e-15);
        assert!((s.sup_bound() - 0.5).abs() < 1e-12);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn estimate_sup_not_below_grid_max(seed in 0u64..1000, shift in -2.0f64..2.0) {
            let noise = make_bandlimited_noise(1.0, 1.0, (0.0, 40.0), seed).unwrap();
            let interval = (shift, 30.0 + shift);
            let sup = estimate_sup(&noise, interval, 8).unwrap();
            let n = 30 * 8;
            let h = (interval.1 - interval.0) / n as f64;
            let grid_max = (0..=n)
                .map(|i| noise.eval(interval.0 + h * i as f64).abs())
                .fold(0.0, f64::max);
            prop_assert!(sup >= grid_max);
        }
    }
}
