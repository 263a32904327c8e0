//! Crossing-only converter model.
//!
//! The converter subtracts a probe `A·sin(πt/T)` from the input and reports,
//! for each integer `n`, the shift `δ_n` of the unique residual zero
//! `t_n = nT + δ_n` inside the rectangle around `nT`. With `A > A_s` and
//! `BT < 1` every shift obeys `|δ_n| ≤ (T/π)·arcsin(A_s/A) < T/2`.
//!
//! Only the strict regime `BT < 1` is supported; the critical rate `BT = 1`,
//! where neighbouring zeros may coincide at `nT + T/2`, is rejected.

use crate::error::{Error, Result};
use crate::roots::bisect_then_brent;
use crate::scalar::{alt_sign, sin_pi, Real};
use crate::siggen::Bandlimited;

/// Reference sine wave `A·sin(πt/T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineProbe<R> {
    pub amplitude: R,
    /// Semi-period `T`, the average crossing spacing.
    pub semi_period: R,
}

impl<R: Real> SineProbe<R> {
    pub fn new(amplitude: R, semi_period: R) -> Result<Self> {
        if !(semi_period > R::zero()) || !semi_period.is_finite() {
            return Err(Error::invalid("probe semi-period must be positive"));
        }
        if !(amplitude > R::zero()) || !amplitude.is_finite() {
            return Err(Error::invalid("probe amplitude must be positive and finite"));
        }
        Ok(SineProbe {
            amplitude,
            semi_period,
        })
    }

    /// Checks `A > A_s` and `B·T < 1` against a target signal.
    pub fn check_against(&self, sup_bound: R, bandwidth: R) -> Result<()> {
        if !(self.amplitude > sup_bound) {
            return Err(Error::invalid(format!(
                "probe amplitude {} must exceed the signal bound {}",
                self.amplitude, sup_bound
            )));
        }
        let bt = bandwidth * self.semi_period;
        if !(bt < R::one()) {
            return Err(Error::invalid(format!(
                "B·T = {bt} must be strictly below 1"
            )));
        }
        Ok(())
    }

    /// Half-width `(T/π)·arcsin(A_s/A)` of the rectangles.
    pub fn shift_bound(&self, sup_bound: R) -> R {
        self.semi_period / R::PI() * (sup_bound / self.amplitude).min(R::one()).asin()
    }

    #[inline]
    pub fn eval(&self, t: R) -> R {
        self.amplitude * sin_pi(t / self.semi_period)
    }
}

/// `s(t) - A·sin(πt/T)`.
pub fn residual<R: Real, S: Bandlimited<R> + ?Sized>(signal: &S, probe: &SineProbe<R>, t: R) -> R {
    signal.eval(t) - probe.eval(t)
}

/// Residual at `nT + u`, with the probe term reduced exactly to
/// `A(-1)^n sin(πu/T)`.
#[inline]
fn residual_local<R: Real, S: Bandlimited<R> + ?Sized>(
    signal: &S,
    probe: &SineProbe<R>,
    n: i64,
    u: R,
) -> R {
    let t = R::from_int(n) * probe.semi_period + u;
    signal.eval(t) - probe.amplitude * alt_sign::<R>(n) * sin_pi(u / probe.semi_period)
}

/// Converter output: one shift per contiguous index starting at `n_first`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSequence<R> {
    semi_period: R,
    amplitude: R,
    n_first: i64,
    deltas: Vec<R>,
}

impl<R: Real> CrossingSequence<R> {
    /// Builds a sequence from recorded shifts. Every `|δ_n|` must be below
    /// `T/2`.
    pub fn new(semi_period: R, amplitude: R, n_first: i64, deltas: Vec<R>) -> Result<Self> {
        SineProbe::new(amplitude, semi_period)?;
        let half = semi_period / R::lit(2.0);
        if let Some((i, d)) = deltas
            .iter()
            .enumerate()
            .find(|(_, d)| !(d.abs() < half))
        {
            return Err(Error::invalid(format!(
                "shift at n={} is {d}, outside (-T/2, T/2)",
                n_first + i as i64
            )));
        }
        Ok(CrossingSequence {
            semi_period,
            amplitude,
            n_first,
            deltas,
        })
    }

    pub fn semi_period(&self) -> R {
        self.semi_period
    }

    pub fn amplitude(&self) -> R {
        self.amplitude
    }

    pub fn probe(&self) -> SineProbe<R> {
        SineProbe {
            amplitude: self.amplitude,
            semi_period: self.semi_period,
        }
    }

    pub fn n_first(&self) -> i64 {
        self.n_first
    }

    /// Last covered index (inclusive). Equals `n_first - 1` when empty.
    pub fn n_last(&self) -> i64 {
        self.n_first + self.deltas.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn deltas(&self) -> &[R] {
        &self.deltas
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.n_first && n <= self.n_last()
    }

    pub fn delta(&self, n: i64) -> Option<R> {
        if self.contains(n) {
            Some(self.deltas[(n - self.n_first) as usize])
        } else {
            None
        }
    }

    /// Crossing instant `nT + δ_n`.
    pub fn instant(&self, n: i64) -> Option<R> {
        self.delta(n)
            .map(|d| R::from_int(n) * self.semi_period + d)
    }

    /// Signal value at the crossing, `A(-1)^n sin(πδ_n/T)`.
    pub fn value(&self, n: i64) -> Option<R> {
        self.delta(n)
            .map(|d| self.amplitude * alt_sign::<R>(n) * sin_pi(d / self.semi_period))
    }

    /// Iterates `(n, δ_n)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, R)> + '_ {
        self.deltas
            .iter()
            .enumerate()
            .map(move |(i, &d)| (self.n_first + i as i64, d))
    }

    /// Errors unless every index in `[lo, hi]` is covered.
    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        let have_lo = self.n_first;
        let have_hi = self.n_last();
        let coverage = |missing_lo, missing_hi| Error::Coverage {
            grid_index: None,
            missing_lo,
            missing_hi,
            have_lo,
            have_hi,
        };
        if self.is_empty() {
            return Err(coverage(lo, hi));
        }
        if lo < have_lo {
            return Err(coverage(lo, hi.min(have_lo - 1)));
        }
        if hi > have_hi {
            return Err(coverage(lo.max(have_hi + 1), hi));
        }
        Ok(())
    }
}

/// Root-finder tolerances, as fractions of `T`.
const COARSE_WIDTH: f64 = 1e-3;
const STEP_TOL: f64 = 1e-13;

/// Detects the crossing in every rectangle `n ∈ [n_lo, n_hi]`.
///
/// The bracket `[nT - T/2, nT + T/2]` always holds a sign change because
/// the residual there is `s ∓ A(-1)^n` and `|s| ≤ A_s < A`. Each bracket is
/// bisected to `1e-3·T` and then polished with Brent steps to `1e-13·T`.
pub fn detect<R: Real, S: Bandlimited<R> + ?Sized>(
    signal: &S,
    probe: &SineProbe<R>,
    n_range: (i64, i64),
) -> Result<CrossingSequence<R>> {
    probe.check_against(signal.sup_bound(), signal.bandwidth())?;
    let (n_lo, n_hi) = n_range;
    if n_hi < n_lo {
        return Err(Error::invalid(format!("empty index range [{n_lo}, {n_hi}]")));
    }
    let t = probe.semi_period;
    let half = t / R::lit(2.0);
    let coarse = t * R::tol(COARSE_WIDTH);
    let tol = t * R::tol(STEP_TOL);
    let deltas = (n_lo..=n_hi)
        .map(|n| {
            let f = |u: R| residual_local(signal, probe, n, u);
            let f_lo = f(-half);
            let f_hi = f(half);
            // residual(nT ± T/2) has sign ∓(-1)^n unless A_s is mis-declared
            if !(f_lo.signum() != f_hi.signum() && f_lo != R::zero() && f_hi != R::zero()) {
                return Err(Error::DetectionFailure { n });
            }
            bisect_then_brent(f, -half, half, f_lo, f_hi, coarse, tol)
                .map_err(|_| Error::DetectionFailure { n })
        })
        .collect::<Result<Vec<R>>>()?;
    CrossingSequence::new(t, probe.amplitude, n_lo, deltas)
}

/// Outcome of [`verify_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<R> {
    pub max_abs_shift: R,
    /// `(T/π)·arcsin(A_s/A)`.
    pub bound: R,
    pub pass: bool,
    /// Crossings sitting on the rectangle edge, `|δ_n| ≥ bound - tol`.
    pub boundary_ties: usize,
}

/// Compares the detected shifts against `(T/π)·arcsin(A_s/A)`.
///
/// Passes iff `max |δ_n| ≤ bound + 1e-12·T`. Shifts that reach the bound
/// (possible when `|s|` attains `A_s`) are accepted and counted as ties.
pub fn verify_bound<R: Real>(crossings: &CrossingSequence<R>, sup_bound: R) -> BoundReport<R> {
    let bound = crossings.probe().shift_bound(sup_bound);
    let tol = crossings.semi_period() * R::tol(1e-12);
    let max_abs_shift = crossings
        .deltas()
        .iter()
        .map(|d| d.abs())
        .fold(R::zero(), R::max);
    let boundary_ties = crossings
        .deltas()
        .iter()
        .filter(|d| d.abs() >= bound - tol)
        .count();
    BoundReport {
        max_abs_shift,
        bound,
        pass: max_abs_shift <= bound + tol,
        boundary_ties,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siggen::{make_bpsk, BandlimitedSignal, BpskParams};

    struct Constant(f64);

    impl Bandlimited<f64> for Constant {
        fn eval(&self, _t: f64) -> f64 {
            self.0
        }
        fn bandwidth(&self) -> f64 {
            0.5
        }
        fn sup_bound(&self) -> f64 {
            self.0.abs()
        }
    }

    fn fig1_bpsk() -> BandlimitedSignal<f64> {
        let ts = 1.2 / 0.7;
        make_bpsk(BpskParams::random(48, 0.2, ts, 2010).with_start(-10.0)).unwrap()
    }

    #[test]
    fn residual_of_zero_signal() {
        let z = BandlimitedSignal::<f64>::zero(0.7);
        let probe = SineProbe::new(2.0, 1.0).unwrap();
        assert_eq!(residual(&z, &probe, 0.5), -2.0);
        for n in -3..4 {
            assert!(residual(&z, &probe, n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_signal_crossings_sit_on_grid() {
        let z = BandlimitedSignal::<f64>::zero(0.7);
        let probe = SineProbe::new(1.0, 1.0).unwrap();
        let c = detect(&z, &probe, (0, 9)).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.deltas().iter().all(|&d| d.abs() < 1e-13));
        let r = verify_bound(&c, 0.0);
        assert!(r.pass);
        assert!(r.max_abs_shift < 1e-13);
    }

    #[test]
    fn constant_signal_crossings_alternate() {
        let s = Constant(0.5);
        let probe = SineProbe::new(1.0, 1.0).unwrap();
        let c = detect(&s, &probe, (-4, 7)).unwrap();
        for (n, d) in c.iter() {
            let expect = if n.rem_euclid(2) == 0 { 1.0 / 6.0 } else { -1.0 / 6.0 };
            assert!((d - expect).abs() < 1e-12, "n={n} d={d}");
        }
        let r = verify_bound(&c, 0.5);
        assert!(r.pass);
        assert!((r.bound - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(r.boundary_ties, c.len());
    }

    #[test]
    fn bpsk_crossings_confined_to_rectangles() {
        let s = fig1_bpsk();
        let probe = SineProbe::new(1.1, 1.0).unwrap();
        let c = detect(&s, &probe, (0, 60)).unwrap();
        assert_eq!(c.len(), 61);
        let r = verify_bound(&c, 1.0);
        assert!(r.pass, "{r:?}");
        // (1/π)·arcsin(1/1.1)
        assert!((r.bound - 0.363_222_348_174_127_2).abs() < 1e-15);
        for n in 0..=60 {
            let t = c.instant(n).unwrap();
            assert!(residual(&s, &probe, t).abs() < 1e-12 * 1.1);
            let expect = s.eval(t);
            assert!((c.value(n).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_bound_large_amplitude() {
        let probe = SineProbe::new(16.0f64, 1.0).unwrap();
        let b = probe.shift_bound(1.0);
        assert!((b - 0.019_907_342_769_288_74).abs() < 1e-15);
    }

    #[test]
    fn invalid_probes_rejected() {
        let s = fig1_bpsk();
        let low = SineProbe::new(0.9, 1.0).unwrap();
        assert!(matches!(detect(&s, &low, (0, 3)), Err(Error::InvalidArgument(_))));
        let critical = SineProbe::new(1.1, 1.0 / 0.7).unwrap();
        assert!(matches!(detect(&s, &critical, (0, 3)), Err(Error::InvalidArgument(_))));
        assert!(SineProbe::new(1.0, 0.0).is_err());
        assert!(SineProbe::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn misdeclared_bound_surfaces_as_detection_failure() {
        let s = Constant(0.5);
        struct Lying;
        impl Bandlimited<f64> for Lying {
            fn eval(&self, t: f64) -> f64 {
                if t > 2.4 && t < 2.6 { 5.0 } else { 0.0 }
            }
            fn bandwidth(&self) -> f64 {
                0.5
            }
            fn sup_bound(&self) -> f64 {
                0.1
            }
        }
        let probe = SineProbe::new(1.0, 1.0).unwrap();
        assert!(detect(&s, &probe, (0, 2)).is_ok());
        match detect(&Lying, &probe, (0, 5)) {
            Err(Error::DetectionFailure { n }) => assert_eq!(n, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coverage_reporting() {
        let c = CrossingSequence::new(1.0, 1.0, 5, vec![0.0; 10]).unwrap();
        assert_eq!(c.n_last(), 14);
        assert!(c.require(5, 14).is_ok());
        match c.require(2, 8) {
            Err(Error::Coverage { missing_lo, missing_hi, .. }) => {
                assert_eq!((missing_lo, missing_hi), (2, 4))
            }
            other => panic!("{other:?}"),
        }
        match c.require(12, 20) {
            Err(Error::Coverage { missing_lo, missing_hi, .. }) => {
                assert_eq!((missing_lo, missing_hi), (15, 20))
            }
            other => panic!("{other:?}"),
        }
        assert!(CrossingSequence::new(1.0, 1.0, 0, vec![0.5]).is_err());
    }

    #[test]
    fn single_precision_detection() {
        let z = BandlimitedSignal::<f32>::zero(0.7);
        let probe = SineProbe::new(1.0f32, 1.0).unwrap();
        let c = detect(&z, &probe, (0, 4)).unwrap();
        assert!(c.deltas().iter().all(|d| d.abs() < 1e-5));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::siggen::make_bandlimited_noise;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn one_crossing_per_rectangle_and_bounded(seed in 0u64..10_000, amp in 1.05f64..8.0) {
            let noise = make_bandlimited_noise(0.6, 0.3, (-10.0, 60.0), seed).unwrap();
            let probe = SineProbe::new(amp * noise.sup_bound(), 1.0).unwrap();
            let c = detect(&noise, &probe, (0, 50)).unwrap();
            prop_assert_eq!(c.len(), 51);
            let bound = probe.shift_bound(noise.sup_bound());
            for (n, d) in c.iter() {
                prop_assert!(d.abs() <= bound + 1e-12);
                let t = c.instant(n).unwrap();
                prop_assert!(residual(&noise, &probe, t).abs() <= 1e-12 * probe.amplitude);
            }
            // crossing instants strictly increasing
            for w in c.deltas().windows(2) {
                prop_assert!(1.0 + w[1] - w[0] > 0.0);
            }
        }
    }
}
