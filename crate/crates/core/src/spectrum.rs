//! Amplitude spectra of uniform sample sequences, either acquired directly
//! or resampled from crossings.

use crate::crossings::CrossingSequence;
use crate::error::{Error, Result};
use crate::interp::{resample_grid, InterpConfig};
use crate::scalar::Real;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// dB value reported for zero (or vanishing) amplitudes.
pub const DB_FLOOR: f64 = -400.0;

/// Optional taper applied before the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Taper {
    #[default]
    None,
    Hann,
}

/// One-sided amplitude spectrum, `N/2 + 1` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult<R> {
    pub bin_freqs: Vec<R>,
    /// `20·log10(|X_k| / max|X|)`, floored at [`DB_FLOOR`].
    pub amplitude_db: Vec<R>,
    pub n: usize,
    pub spacing: R,
    /// Unnormalized DFT bins `X_k`, `k = 0 ..= N/2`.
    pub bins: Vec<Complex<R>>,
    /// All samples were zero; every `amplitude_db` entry is the floor.
    pub degenerate: bool,
}

impl<R: Real> SpectrumResult<R> {
    pub fn peak_amplitude(&self) -> R {
        self.bins.iter().map(|c| c.norm()).fold(R::zero(), R::max)
    }
}

/// `X_k = Σ_n x_n e^{-2πjkn/N}` for all `k`.
pub fn fft_full<R: Real>(samples: &[R]) -> Vec<Complex<R>> {
    let mut buf: Vec<Complex<R>> = samples.iter().map(|&x| Complex::new(x, R::zero())).collect();
    if buf.is_empty() {
        return buf;
    }
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

fn to_db<R: Real>(amp: R, reference: R) -> R {
    let floor = R::lit(DB_FLOOR);
    if !(reference > R::zero()) {
        return floor;
    }
    let db = R::lit(20.0) * (amp / reference).log10();
    if db.is_finite() {
        db.max(floor)
    } else {
        floor
    }
}

pub fn amplitude_spectrum<R: Real>(samples: &[R], spacing: R) -> Result<SpectrumResult<R>> {
    amplitude_spectrum_tapered(samples, spacing, Taper::None)
}

pub fn amplitude_spectrum_tapered<R: Real>(
    samples: &[R],
    spacing: R,
    taper: Taper,
) -> Result<SpectrumResult<R>> {
    if samples.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if !(spacing > R::zero()) || !spacing.is_finite() {
        return Err(Error::invalid("sample spacing must be positive"));
    }
    let n = samples.len();
    let tapered: Vec<R> = match taper {
        Taper::None => samples.to_vec(),
        Taper::Hann => {
            let nr = R::from_usize(n).unwrap();
            samples
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let c = (R::TAU() * R::from_usize(i).unwrap() / nr).cos();
                    x * R::lit(0.5) * (R::one() - c)
                })
                .collect()
        }
    };
    let mut bins = fft_full(&tapered);
    bins.truncate(n / 2 + 1);
    let peak = bins.iter().map(|c| c.norm()).fold(R::zero(), R::max);
    let degenerate = !(peak > R::zero());
    let amplitude_db = bins.iter().map(|c| to_db(c.norm(), peak)).collect();
    let df = R::one() / (R::from_usize(n).unwrap() * spacing);
    let bin_freqs = (0..bins.len()).map(|k| R::from_usize(k).unwrap() * df).collect();
    Ok(SpectrumResult {
        bin_freqs,
        amplitude_db,
        n,
        spacing,
        bins,
        degenerate,
    })
}

/// Spectrum of `N` reconstructed samples `ŝ(n1·T1)`, `n1 = 0 .. N-1`.
pub fn spectrum_from_crossings<R: Real>(
    crossings: &CrossingSequence<R>,
    config: &InterpConfig<R>,
    n: usize,
    spacing: R,
) -> Result<SpectrumResult<R>> {
    if n < 2 {
        return Err(Error::invalid("need at least 2 output samples"));
    }
    let samples = resample_grid(crossings, config, spacing, (0, n as i64 - 1))?;
    amplitude_spectrum(&samples, spacing)
}

/// `20·log10(|A_k - B_k| / max|A|)` per bin.
pub fn spectrum_diff<R: Real>(a: &SpectrumResult<R>, b: &SpectrumResult<R>) -> Result<Vec<R>> {
    if a.n != b.n || a.bins.len() != b.bins.len() {
        return Err(Error::invalid(format!(
            "transform lengths differ: {} vs {}",
            a.n, b.n
        )));
    }
    if (a.spacing - b.spacing).abs() > a.spacing * R::tol(1e-12) {
        return Err(Error::invalid(format!(
            "grid spacings differ: {} vs {}",
            a.spacing, b.spacing
        )));
    }
    let peak = a.peak_amplitude();
    Ok(a
        .bins
        .iter()
        .zip(&b.bins)
        .map(|(x, y)| to_db((x - y).norm(), peak))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct_dft(x: &[f64]) -> Vec<Complex<f64>> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let ph = -2.0 * std::f64::consts::PI * ((k * i) % n) as f64 / n as f64;
                        Complex::new(v * ph.cos(), v * ph.sin())
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn dc_impulse() {
        let s = amplitude_spectrum(&vec![1.0f64; 1024], 1.0).unwrap();
        assert_eq!(s.amplitude_db.len(), 513);
        assert_eq!(s.amplitude_db[0], 0.0);
        assert!(s.amplitude_db[1..].iter().all(|&d| d <= -250.0));
        assert!(!s.degenerate);
    }

    #[test]
    fn tone_on_bin_center() {
        let n = 1024;
        let k0 = 37;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * (k0 * i) as f64 / n as f64).sin())
            .collect();
        let s = amplitude_spectrum(&x, 0.5).unwrap();
        let (kmax, &dmax) = s
            .amplitude_db
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert_eq!(kmax, k0);
        assert_eq!(dmax, 0.0);
        assert!((s.bin_freqs[k0] - k0 as f64 / (n as f64 * 0.5)).abs() < 1e-15);
    }

    #[test]
    fn fft_matches_direct_dft_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [2usize, 3, 7, 16, 31, 64] {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let fast = fft_full(&x);
            let slow = direct_dft(&x);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() <= 1e-10, "N={n}");
            }
            let energy_t: f64 = x.iter().map(|v| v * v).sum();
            let energy_f: f64 = fast.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
            assert!(((energy_f - energy_t) / energy_t).abs() < 1e-10);
        }
    }

    #[test]
    fn odd_length_bin_count() {
        let s = amplitude_spectrum(&[1.0f64, 2.0, 3.0, 4.0, 5.0], 1.0).unwrap();
        assert_eq!(s.bins.len(), 3);
        assert_eq!(s.bin_freqs.len(), 3);
    }

    #[test]
    fn degenerate_zero_input() {
        let s = amplitude_spectrum(&vec![0.0f64; 64], 1.0).unwrap();
        assert!(s.degenerate);
        assert!(s.amplitude_db.iter().all(|&d| d == DB_FLOOR));
    }

    #[test]
    fn diff_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<f64> = (0..128).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = amplitude_spectrum(&x, 1.0).unwrap();
        let same = spectrum_diff(&a, &a).unwrap();
        assert!(same.iter().all(|&d| d == DB_FLOOR));
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let b = amplitude_spectrum(&x2, 1.0).unwrap();
        let d = spectrum_diff(&a, &b).unwrap();
        for (u, v) in d.iter().zip(&a.amplitude_db) {
            assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(amplitude_spectrum::<f64>(&[], 1.0).is_err());
        assert!(amplitude_spectrum(&[1.0f64], 1.0).is_err());
        assert!(amplitude_spectrum(&[1.0f64, 2.0], 0.0).is_err());
        let a = amplitude_spectrum(&[1.0f64; 8], 1.0).unwrap();
        let b = amplitude_spectrum(&[1.0f64; 16], 1.0).unwrap();
        let c = amplitude_spectrum(&[1.0f64; 8], 0.5).unwrap();
        assert!(spectrum_diff(&a, &b).is_err());
        assert!(spectrum_diff(&a, &c).is_err());
    }

    #[test]
    fn hann_taper_concentrates_leakage() {
        let n = 256;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 20.5 * i as f64 / n as f64).cos())
            .collect();
        let plain = amplitude_spectrum(&x, 1.0).unwrap();
        let hann = amplitude_spectrum_tapered(&x, 1.0, Taper::Hann).unwrap();
        assert!(hann.amplitude_db[80] < plain.amplitude_db[80] - 40.0);
    }
}
