//! Timing of the resampling and spectral stages against `N`.

use super::config::ExperimentConfig;
use super::experiments::{fit_slope, open_csv};
use super::report::{Check, ExperimentReport};
use super::scenario::{crossings_of, interp_config, make_signal};
use crate::crossings::CrossingSequence;
use crate::error::Result;
use crate::interp::{resample_grid, InterpConfig};
use crate::spectrum::spectrum_from_crossings;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use std::hint::black_box;
use std::time::{Duration, Instant};

/// Default pulse half-length used when the config leaves the pulse exact;
/// timing does not depend on band-limitation and the exact train makes
/// signal set-up quadratic in `N`.
const BENCH_TRUNCATION: f64 = 12.0;

/// Each timed run repeats the operation until at least this long.
const MIN_RUN: Duration = Duration::from_millis(5);

/// Minimum over `repeats` runs of the time per call.
fn time_per_call(repeats: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    f()?;
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let mut calls = 0u32;
        let start = Instant::now();
        while start.elapsed() < MIN_RUN || calls == 0 {
            f()?;
            calls += 1;
        }
        best = best.min(start.elapsed().as_secs_f64() / calls as f64);
    }
    Ok(best)
}

fn time_resample(
    crossings: &CrossingSequence<f64>,
    cfg: &InterpConfig<f64>,
    n: usize,
    t_s: f64,
    repeats: usize,
) -> Result<f64> {
    time_per_call(repeats, || {
        black_box(resample_grid(crossings, cfg, t_s, (0, n as i64 - 1))?);
        Ok(())
    })
}

fn time_fft(n: usize, repeats: usize) -> Result<f64> {
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut buf: Vec<Complex<f64>> = (0..n).map(|i| Complex::new((i as f64).sin(), 0.0)).collect();
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    time_per_call(repeats, || {
        fft.process_with_scratch(&mut buf, &mut scratch);
        black_box(&buf);
        Ok(())
    })
}

pub fn run_bench(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(config);
    let a = config.a_list.first().copied().unwrap_or(1.5);
    let p = config.p_list.first().copied().unwrap_or(8);
    let t_s = config.semi_period;
    let mut rows = Vec::new();
    for &n in &config.bench_n {
        let mut c = config.clone();
        c.n = n;
        c.p_list = vec![p, 2 * p];
        if c.truncation.is_none() {
            c.truncation = Some(BENCH_TRUNCATION);
        }
        let s = make_signal(&c, 0)?;
        let crossings = crossings_of(&s, &c, a)?;
        let cfg = interp_config(&c, p, a)?;
        let cfg2 = interp_config(&c, 2 * p, a)?;
        let per_sample = time_resample(&crossings, &cfg, n, t_s, config.bench_repeats)? / n as f64;
        let per_sample_2p = time_resample(&crossings, &cfg2, n, t_s, config.bench_repeats)? / n as f64;
        let pipeline = time_per_call(config.bench_repeats, || {
            black_box(spectrum_from_crossings(&crossings, &cfg, n, t_s)?);
            Ok(())
        })?;
        let fft = time_fft(n, config.bench_repeats)?;
        rows.push((n, per_sample, per_sample_2p, pipeline, fft));
    }

    if let Some(mut w) = open_csv(
        config,
        &mut report,
        "bench.csv",
        &["N", "P", "resample_ns_per_sample", "resample_2p_ns_per_sample", "spectrum_pipeline_ns", "fft_ns"],
    )? {
        for &(n, r1, r2, sp, f) in &rows {
            w.row(&[n as f64, p as f64, r1 * 1e9, r2 * 1e9, sp * 1e9, f * 1e9])?;
        }
        w.finish()?;
    }
    report.measure(
        "rows",
        rows.iter()
            .map(|&(n, r1, r2, sp, f)| {
                serde_json::json!({
                    "N": n, "resample_ns_per_sample": r1 * 1e9, "resample_2p_ns_per_sample": r2 * 1e9,
                    "spectrum_pipeline_ns": sp * 1e9, "fft_ns": f * 1e9
                })
            })
            .collect::<Vec<_>>(),
    );
    if rows.len() < 2 {
        return Ok(report);
    }

    let spread = |v: &[f64]| {
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        hi / lo
    };
    let per_sample: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let flat = spread(&per_sample);
    report.check(Check::new(
        "bench.resample_flat",
        Some(9),
        "per-sample resampling time constant in N within 2x",
        flat <= 2.0,
        format!("max/min = {flat:.3}"),
    ));

    let doubling: Vec<f64> = rows.iter().map(|r| r.2 / r.1).collect();
    report.check(Check::new(
        "bench.p_doubling",
        None,
        "doubling P doubles per-sample time within 2x",
        doubling.iter().all(|&d| (1.0..=4.0).contains(&d)),
        format!("time ratios 2P/P: {doubling:.2?}"),
    ));

    let nlogn: Vec<f64> = rows
        .iter()
        .map(|&(n, _, _, sp, _)| sp / (n as f64 * (n as f64).log2()))
        .collect();
    let spread_nlogn = spread(&nlogn);
    report.check(Check::new(
        "bench.spectrum_nlogn",
        None,
        "spectrum pipeline time fits c·N·log N within 2x",
        spread_nlogn <= 2.0,
        format!("max/min of time/(N log N) = {spread_nlogn:.3}"),
    ));

    let log_n: Vec<f64> = rows.iter().map(|r| (r.0 as f64).ln()).collect();
    let log_t: Vec<f64> = rows.iter().map(|r| r.4.ln()).collect();
    let exponent = fit_slope(&log_n, &log_t);
    report.check(Check::new(
        "bench.fft_growth",
        None,
        "FFT time grows faster than N and slower than N²",
        exponent > 1.0 && exponent < 2.0,
        format!("log-log exponent {exponent:.3}"),
    ));
    report.measure("resample_spread", flat);
    report.measure("fft_exponent", exponent);
    Ok(report)
}
