//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use sinecross::harness::{criteria_summary, run_experiment, Check, Experiment, ExperimentConfig, ExperimentReport};
use sinecross::interp::{gamma, lagrange_weighted, window_w, InterpConfig, NodeSet};
use sinecross::spectrum::fft_full;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

const SEED: u64 = 1;

fn run(e: Experiment) -> ExperimentReport {
    let start = Instant::now();
    let report = run_experiment(&ExperimentConfig::new(e, SEED))
        .unwrap_or_else(|err| panic!("experiment {} failed to run: {err}", e.name()));
    eprintln!("  ran {} in {:.2}s", e.name(), start.elapsed().as_secs_f64());
    report
}

/// Degree-≤2P polynomials through jittered nodes, recovered with a unit
/// weight at 100 random points.
fn polynomial_reproduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t_s = 0.8;
    let mut worst: f64 = 0.0;
    for p in 1..=8usize {
        let shifts: Vec<f64> = (0..2 * p + 1).map(|_| rng.random_range(-0.45..0.45) * t_s).collect();
        let coeffs: Vec<f64> = (0..=2 * p).map(|_| rng.random_range(-1.0..1.0)).collect();
        let poly = |t: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        let half = p as i64;
        let tau: Vec<f64> = shifts
            .iter()
            .enumerate()
            .map(|(i, &eta)| (i as i64 - half) as f64 * t_s + eta)
            .collect();
        let values = tau.iter().map(|&t| poly(t)).collect();
        let nodes = NodeSet::new(t_s, tau, values).unwrap();
        let span = p as f64 * t_s;
        let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>() * span.max(1.0).powi(2 * p as i32);
        for _ in 0..100 {
            let t = rng.random_range(-span..span);
            let got = lagrange_weighted(&nodes, t, |_| Ok(1.0)).unwrap();
            worst = worst.max((got - poly(t)).abs() / scale);
        }
    }
    Check::new(
        "oracle.polynomial",
        Some(8),
        "unit-weight Lagrange reproduces degree-≤2P polynomials at 100 random points",
        worst <= 1e-13,
        format!("max scaled error {worst:.2e} over P = 1..8"),
    )
}

fn fft_vs_direct_dft() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for n in 1..=64usize {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = fft_full(&x);
        for (k, got) in fast.iter().enumerate() {
            let direct: Complex<f64> = x
                .iter()
                .enumerate()
                .map(|(m, &v)| {
                    let phase = -2.0 * PI * ((k * m) % n) as f64 / n as f64;
                    Complex::new(v * phase.cos(), v * phase.sin())
                })
                .sum();
            worst = worst.max((got - direct).norm());
        }
    }
    Check::new(
        "oracle.dft",
        Some(8),
        "FFT equals the direct DFT for N ≤ 64 within 1e-10",
        worst <= 1e-10,
        format!("max |ΔX| = {worst:.2e}"),
    )
}

/// `γ(0) = T^{2P+1}/π`, plus the literal product form at off-grid points.
fn gamma_at_origin() -> Check {
    let mut worst_origin: f64 = 0.0;
    let mut worst_literal: f64 = 0.0;
    for &t_s in &[0.5f64, 1.0, 1.3] {
        for p in 1..=8usize {
            let cfg = InterpConfig::from_bt(0.7, t_s, p, 1.5).unwrap();
            let expect = t_s.powi(2 * p as i32 + 1) / PI;
            worst_origin = worst_origin.max((gamma(0.0, &cfg).unwrap() - expect).abs() / expect);
            let fact: f64 = (1..=p).map(|k| k as f64).product();
            for &x in &[0.23, -1.61, 2.77] {
                let t = x * t_s;
                let lo: f64 = (-(p as i64)..=p as i64).map(|q| t - q as f64 * t_s).product();
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                let literal = sign / (fact * fact) * window_w(t, &cfg) * lo / (PI * t / t_s).sin();
                let got = gamma(t, &cfg).unwrap();
                worst_literal = worst_literal.max((got - literal).abs() / literal.abs());
            }
        }
    }
    Check::new(
        "oracle.gamma_origin",
        Some(8),
        "γ(0) equals T^{2P+1}/π within 1e-12 relative for P = 1..8",
        worst_origin <= 1e-12 && worst_literal <= 1e-10,
        format!("origin {worst_origin:.2e}, literal form {worst_literal:.2e}"),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut reports: Vec<ExperimentReport> = [
        Experiment::Fig6,
        Experiment::Fig1To3,
        Experiment::Fig5,
        Experiment::Fig8To9,
        Experiment::Bench,
    ]
    .into_iter()
    .map(run)
    .collect();

    let mut oracles = ExperimentReport::new(&ExperimentConfig::new(Experiment::Fig6, SEED));
    oracles.experiment = "oracles".into();
    oracles.checks = vec![polynomial_reproduction(), fft_vs_direct_dft(), gamma_at_origin()];
    reports.push(oracles);

    let summary = criteria_summary(&reports);
    let mut all = true;
    for (id, pass, checks) in &summary {
        all &= pass;
        let verdict = if *pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {id}");
        for c in checks.iter().filter(|c| !*pass || c.criterion == Some(8)) {
            println!("    {} {}: {}", if c.pass { "ok  " } else { "FAIL" }, c.id, c.detail);
        }
    }
    let others: Vec<&Check> = reports
        .iter()
        .flat_map(|r| r.checks.iter())
        .filter(|c| c.criterion.is_none() && !c.pass)
        .collect();
    for c in &others {
        println!("[FAIL] supporting check {}: {}", c.id, c.detail);
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        summary.iter().filter(|s| s.1).count(),
        summary.len(),
        start.elapsed().as_secs_f64()
    );
    if all && others.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
