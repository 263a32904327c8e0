//! Signal, noise and crossing set-up shared by the experiments.

use super::config::{sub_seed, ExperimentConfig, STREAM_NOISE, STREAM_SIGNAL};
use crate::crossings::{detect, CrossingSequence, SineProbe};
use crate::error::{Error, Result};
use crate::interp::{grid_decompose, InterpConfig, Reconstructor};
use crate::siggen::{make_bandlimited_noise, make_bpsk, mean_power, BandlimitedSignal, BpskParams};
use crate::spectrum::DB_FLOOR;

/// Symbols beyond the generation interval on each side.
const SYMBOL_MARGIN: f64 = 6.0;

pub fn db(x: f64) -> f64 {
    if x > 0.0 {
        (20.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Peak-normalized BPSK realization `realization` of the configured setup.
pub fn make_signal(config: &ExperimentConfig, realization: u64) -> Result<BandlimitedSignal<f64>> {
    let ts = config.symbol_period();
    let (a, b) = config.generation_interval();
    let (count, start) = match config.symbols {
        Some(count) => {
            let centre = 0.5 * (config.interval().0 + config.interval().1);
            (count, centre - 0.5 * (count.max(1) - 1) as f64 * ts)
        }
        None => {
            let start = a - SYMBOL_MARGIN * ts;
            let count = ((b - a) / ts + 2.0 * SYMBOL_MARGIN).ceil() as usize + 1;
            (count, start)
        }
    };
    let seed = sub_seed(config.seed, STREAM_SIGNAL, realization);
    let params = BpskParams::random(count, config.rolloff, ts, seed)
        .with_start(start)
        .with_truncation(config.truncation);
    make_bpsk(params)
}

pub fn probe(config: &ExperimentConfig, amplitude: f64) -> Result<SineProbe<f64>> {
    SineProbe::new(amplitude, config.semi_period)
}

pub fn crossings_of(
    signal: &BandlimitedSignal<f64>,
    config: &ExperimentConfig,
    amplitude: f64,
) -> Result<CrossingSequence<f64>> {
    detect(signal, &probe(config, amplitude)?, config.crossing_range())
}

pub fn interp_config(config: &ExperimentConfig, half_window: usize, amplitude: f64) -> Result<InterpConfig<f64>> {
    InterpConfig::from_bt(config.bt, config.semi_period, half_window, amplitude)
}

/// Shift bound `δ/T` for a unit-peak signal.
pub fn shift_bound_over_t(amplitude: f64) -> f64 {
    (1.0 / amplitude).asin() / std::f64::consts::PI
}

/// Interval the time-domain sup error is measured over.
pub fn error_window(config: &ExperimentConfig, half_window: usize) -> (f64, f64) {
    let (a, b) = config.interval();
    if config.extended {
        (a, b)
    } else {
        let m = half_window as f64 * config.semi_period;
        (a + m, b - m)
    }
}

/// `dense_per_t` points per `T` over `I`, endpoints included.
pub fn dense_times(config: &ExperimentConfig) -> Vec<f64> {
    let d = config.dense_per_t;
    (0..=(config.n - 1) * d)
        .map(|i| i as f64 / d as f64 * config.semi_period)
        .collect()
}

/// Reconstructor for every window centre touched by `window`.
pub fn reconstructor_over(
    crossings: &CrossingSequence<f64>,
    cfg: &InterpConfig<f64>,
    window: (f64, f64),
) -> Result<Reconstructor<f64>> {
    let t_s = cfg.semi_period();
    let lo = grid_decompose(window.0, t_s).n;
    let hi = grid_decompose(window.1, t_s).n;
    Reconstructor::for_centers(crossings, cfg, (lo, hi))
}

/// `sup |s(t) - ŝ(t)|` over the dense points that fall in `window`.
pub fn sup_error(
    rec: &Reconstructor<f64>,
    times: &[f64],
    reference: &[f64],
    window: (f64, f64),
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (&t, &s) in times.iter().zip(reference) {
        if t < window.0 || t > window.1 {
            continue;
        }
        worst = worst.max((rec.reconstruct_at(t)? - s).abs());
    }
    Ok(worst)
}

/// Largest `|ŝ(t_m) - s(t_m)| / A` over every crossing a full reconstructor
/// can serve.
pub fn node_exactness(crossings: &CrossingSequence<f64>, cfg: &InterpConfig<f64>) -> Result<f64> {
    let rec = Reconstructor::new(crossings, cfg)?;
    let (lo, hi) = rec.centers();
    let amp = crossings.amplitude();
    let mut worst: f64 = 0.0;
    for m in lo..=hi {
        let t = crossings.instant(m).unwrap();
        let v = rec.reconstruct_at(t)?;
        worst = worst.max((v - crossings.value(m).unwrap()).abs() / amp);
    }
    Ok(worst)
}

/// Clean signal plus band-limited noise at a given SNR over `I`.
pub struct NoisyRealization {
    pub noise: BandlimitedSignal<f64>,
    pub sum: BandlimitedSignal<f64>,
    pub crossings: CrossingSequence<f64>,
    pub attempts: usize,
}

/// Adds noise of bandwidth `B` whose mean power over `I` is exactly
/// `P_s / 10^(snr/10)`, and detects the crossings of the sum. Draws with
/// `sup|s + w| ≥ A`, or whose crossings cannot be bracketed, are replaced by
/// the next sub-seed.
pub fn add_noise(
    clean: &BandlimitedSignal<f64>,
    config: &ExperimentConfig,
    snr_db: f64,
    amplitude: f64,
) -> Result<NoisyRealization> {
    let b = config.bandwidth();
    let interval = config.interval();
    let signal_power = mean_power(clean, interval, 16)?;
    let target = signal_power / 10f64.powf(snr_db / 10.0);
    let key = sub_seed(config.seed, STREAM_NOISE, snr_db.to_bits());
    let max_attempts = config.max_noise_retries + 1;
    for attempt in 0..max_attempts {
        let seed = sub_seed(key, STREAM_NOISE, attempt as u64);
        let raw = make_bandlimited_noise(b, 1.0, config.generation_interval(), seed)?;
        let power = mean_power(&raw, interval, 16)?;
        let noise = raw.scaled((target / power).sqrt());
        let sum = BandlimitedSignal::sum(vec![clean.clone(), noise.clone()])?;
        if sum.sup_bound() >= amplitude {
            continue;
        }
        match crossings_of(&sum, config, amplitude) {
            Ok(crossings) => {
                return Ok(NoisyRealization {
                    noise,
                    sum,
                    crossings,
                    attempts: attempt + 1,
                })
            }
            Err(Error::DetectionFailure { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoiseRetriesExhausted {
        attempts: max_attempts,
    })
}
