use clap::{Parser, Subcommand, ValueEnum};
use sinecross::harness::{run_experiment, Experiment, ExperimentConfig};
use sinecross::interp::{grid_decompose, InterpConfig, Reconstructor};
use sinecross::io::{fmt_sig17, load_crossings, load_samples, read_signal, save_crossings, write_signal, CsvWriter};
use sinecross::siggen::{make_bandlimited_noise, make_bpsk, BpskParams};
use sinecross::spectrum::{amplitude_spectrum, spectrum_from_crossings, SpectrumResult};
use sinecross::{detect, Error, Result, SineProbe};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sinecross", version, about = "Band-limited signals from sine-wave crossings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalType {
    Bpsk,
    Noise,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Fig4,
    #[value(name = "fig1_3")]
    Fig1_3,
    Fig6,
    Fig5,
    Fig7,
    #[value(name = "fig8_9")]
    Fig8_9,
    Bench,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::Fig4 => Experiment::Fig4,
            ExperimentArg::Fig1_3 => Experiment::Fig1To3,
            ExperimentArg::Fig6 => Experiment::Fig6,
            ExperimentArg::Fig5 => Experiment::Fig5,
            ExperimentArg::Fig7 => Experiment::Fig7,
            ExperimentArg::Fig8_9 => Experiment::Fig8To9,
            ExperimentArg::Bench => Experiment::Bench,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a signal descriptor (JSON).
    GenSignal {
        #[arg(long = "type", value_enum)]
        kind: SignalType,
        /// Bandwidth-time product B·T.
        #[arg(long, default_value_t = 0.7)]
        bt: f64,
        /// Probe semi-period T the product refers to.
        #[arg(long, default_value_t = 1.0)]
        semiperiod: f64,
        /// BPSK symbol count; for noise, the span in units of 1/B.
        #[arg(long, default_value_t = 64)]
        symbols: usize,
        #[arg(long, default_value_t = 0.2)]
        rolloff: f64,
        /// Mean noise power over its span.
        #[arg(long, default_value_t = 1.0)]
        power: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect sine-wave crossings of a signal.
    Detect {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        amp: f64,
        #[arg(long)]
        semiperiod: f64,
        #[arg(long, allow_hyphen_values = true)]
        n_lo: i64,
        #[arg(long, allow_hyphen_values = true)]
        n_hi: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a signal on a uniform grid from a crossing file.
    Reconstruct {
        #[arg(long)]
        crossings: PathBuf,
        #[arg(long)]
        bt: f64,
        #[arg(long)]
        p: usize,
        /// `t0:dt:t1`, both ends included.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// One-sided amplitude spectrum, from samples or from crossings.
    Spectrum {
        #[arg(long, conflicts_with = "crossings")]
        samples: Option<PathBuf>,
        #[arg(long, requires_all = ["p", "n"])]
        crossings: Option<PathBuf>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// B·T for the crossings mode.
        #[arg(long, default_value_t = 0.7)]
        bt: f64,
        #[arg(long)]
        spacing: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment and write CSVs plus report.json.
    Experiment {
        #[arg(value_enum)]
        name: ExperimentArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bt: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_grid(spec: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Parse(format!("grid must be t0:dt:t1, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if !(v[1] > 0.0) || v[2] < v[0] {
        return Err(Error::InvalidArgument(format!("grid '{spec}' needs dt > 0 and t1 ≥ t0")));
    }
    Ok((v[0], v[1], v[2]))
}

fn write_spectrum(path: &PathBuf, s: &SpectrumResult<f64>) -> Result<()> {
    let mut w = CsvWriter::create(path)?;
    if s.degenerate {
        w.comment("degenerate: all samples are zero")?;
    }
    w.header(&["freq_hz", "amplitude_db"])?;
    for (f, d) in s.bin_freqs.iter().zip(&s.amplitude_db) {
        w.row(&[*f, *d])?;
    }
    w.finish()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::GenSignal {
            kind,
            bt,
            semiperiod,
            symbols,
            rolloff,
            power,
            seed,
            out,
        } => {
            if !(semiperiod > 0.0) {
                return Err(Error::InvalidArgument("semi-period must be positive".into()));
            }
            let b = bt / semiperiod;
            let signal = match kind {
                SignalType::Bpsk => {
                    let ts = (1.0 + rolloff) / b;
                    make_bpsk(BpskParams::random(symbols, rolloff, ts, seed))?
                }
                SignalType::Noise => make_bandlimited_noise(b, power, (0.0, symbols as f64 / b), seed)?,
            };
            write_signal(&out, &signal)?;
        }
        Command::Detect {
            signal,
            amp,
            semiperiod,
            n_lo,
            n_hi,
            out,
        } => {
            let s = read_signal(&signal)?;
            let c = detect(&s, &SineProbe::new(amp, semiperiod)?, (n_lo, n_hi))?;
            save_crossings(&out, &c)?;
        }
        Command::Reconstruct {
            crossings,
            bt,
            p,
            grid,
            out,
        } => {
            let c = load_crossings(&crossings)?;
            let cfg = InterpConfig::from_bt(bt, c.semi_period(), p, c.amplitude())?;
            let (t0, dt, t1) = parse_grid(&grid)?;
            let count = ((t1 - t0) / dt + 1e-9).floor() as usize + 1;
            let lo = grid_decompose(t0, c.semi_period()).n;
            let hi = grid_decompose(t0 + (count - 1) as f64 * dt, c.semi_period()).n;
            let rec = Reconstructor::for_centers(&c, &cfg, (lo, hi))?;
            let mut w = CsvWriter::create(&out)?;
            w.header(&["t", "value"])?;
            for i in 0..count {
                let t = t0 + i as f64 * dt;
                w.raw_row(&[fmt_sig17(t), fmt_sig17(rec.reconstruct_at(t)?)])?;
            }
            w.finish()?;
        }
        Command::Spectrum {
            samples,
            crossings,
            p,
            n,
            bt,
            spacing,
            out,
        } => {
            let spec = match (samples, crossings) {
                (Some(path), None) => amplitude_spectrum(&load_samples(&path)?, spacing)?,
                (None, Some(path)) => {
                    let c = load_crossings(&path)?;
                    let cfg = InterpConfig::from_bt(bt, c.semi_period(), p.unwrap(), c.amplitude())?;
                    spectrum_from_crossings(&c, &cfg, n.unwrap(), spacing)?
                }
                _ => return Err(Error::InvalidArgument("give exactly one of --samples or --crossings".into())),
            };
            write_spectrum(&out, &spec)?;
        }
        Command::Experiment { name, seed, n, bt, out } => {
            let mut config = ExperimentConfig::new(name.into(), seed);
            if let Some(n) = n {
                config.n = n;
            }
            if let Some(bt) = bt {
                config.bt = bt;
            }
            config.out_dir = Some(out.clone());
            let report = run_experiment(&config)?;
            for c in &report.checks {
                let tag = c.criterion.map(|k| format!(" (criterion {k})")).unwrap_or_default();
                println!(
                    "[{}] {}{tag}: {} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.description,
                    c.detail
                );
            }
            println!("wrote {} files to {}", report.files.len(), out.display());
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
