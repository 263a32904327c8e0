use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Experiment {
    #[serde(rename = "fig4")]
    Fig4,
    #[serde(rename = "fig1_3")]
    Fig1To3,
    #[serde(rename = "fig6")]
    Fig6,
    #[serde(rename = "fig5")]
    Fig5,
    #[serde(rename = "fig7")]
    Fig7,
    #[serde(rename = "fig8_9")]
    Fig8To9,
    #[serde(rename = "bench")]
    Bench,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Fig4,
        Experiment::Fig1To3,
        Experiment::Fig6,
        Experiment::Fig5,
        Experiment::Fig7,
        Experiment::Fig8To9,
        Experiment::Bench,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig4 => "fig4",
            Experiment::Fig1To3 => "fig1_3",
            Experiment::Fig6 => "fig6",
            Experiment::Fig5 => "fig5",
            Experiment::Fig7 => "fig7",
            Experiment::Fig8To9 => "fig8_9",
            Experiment::Bench => "bench",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment '{s}'")))
    }
}

/// Fully resolved experiment parameters. Time is measured in units of the
/// probe semi-period, `T = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// Grid length; the analysis interval is `I = [0, (N-1)T]`.
    pub n: usize,
    pub bt: f64,
    pub rolloff: f64,
    pub semi_period: f64,
    pub a_list: Vec<f64>,
    pub p_list: Vec<usize>,
    pub snr_list_db: Vec<f64>,
    /// Points per `T` of the grid the sup error is taken over.
    pub dense_per_t: usize,
    /// Generate signal and crossings `(P_max + 2)T` beyond `I` and measure
    /// errors over all of `I`. When off, only crossings inside `I` exist and
    /// errors are measured over `[PT, (N-1-P)T]`.
    pub extended: bool,
    /// Symbol count override; by default the pulse train covers the
    /// extended interval plus a margin.
    pub symbols: Option<usize>,
    /// Raised-cosine half-length in symbols; `None` keeps the exact pulse.
    pub truncation: Option<f64>,
    /// Random BPSK realizations for the crossing-confinement sweep.
    pub realizations: usize,
    pub bench_n: Vec<usize>,
    pub bench_repeats: usize,
    pub max_noise_retries: usize,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: u64) -> Self {
        let mut c = ExperimentConfig {
            experiment,
            seed,
            n: 1024,
            bt: 0.7,
            rolloff: 0.2,
            semi_period: 1.0,
            a_list: vec![1.1, 16.0],
            p_list: (2..=16).collect(),
            snr_list_db: Vec::new(),
            dense_per_t: 32,
            extended: true,
            symbols: None,
            truncation: None,
            realizations: 20,
            bench_n: vec![256, 1024, 4096, 16384],
            bench_repeats: 7,
            max_noise_retries: 16,
            out_dir: None,
        };
        match experiment {
            Experiment::Fig4 => {
                c.a_list = vec![];
                c.p_list = vec![];
            }
            Experiment::Fig1To3 => {
                c.a_list = vec![1.1, 3.0, 16.0];
                c.p_list = vec![2, 3];
            }
            Experiment::Fig6 => c.a_list = vec![1.1, 1.5, 16.0],
            Experiment::Fig5 | Experiment::Fig7 => {
                c.a_list = vec![3.0];
                c.p_list = vec![4, 9];
                c.snr_list_db = (0..=12).map(|k| 10.0 * k as f64).collect();
            }
            Experiment::Fig8To9 => {
                c.a_list = vec![1.5];
                c.p_list = vec![16];
                c.snr_list_db = vec![40.0];
            }
            Experiment::Bench => {
                c.a_list = vec![1.5];
                c.p_list = vec![8];
            }
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::invalid("N must be at least 8"));
        }
        if !(self.bt > 0.0 && self.bt < 1.0) {
            return Err(Error::invalid(format!("B·T = {} must lie in (0, 1)", self.bt)));
        }
        if !(self.rolloff > 0.0 && self.rolloff <= 1.0) {
            return Err(Error::invalid("roll-off must lie in (0, 1]"));
        }
        if !(self.semi_period > 0.0) {
            return Err(Error::invalid("semi-period must be positive"));
        }
        if self.dense_per_t == 0 {
            return Err(Error::invalid("dense grid needs at least one point per T"));
        }
        if self.a_list.iter().any(|&a| !(a > 1.0)) {
            return Err(Error::invalid("probe amplitudes must exceed the unit signal peak"));
        }
        if self.p_list.iter().any(|&p| p == 0) {
            return Err(Error::invalid("half-windows must be positive"));
        }
        Ok(())
    }

    pub fn bandwidth(&self) -> f64 {
        self.bt / self.semi_period
    }

    pub fn symbol_period(&self) -> f64 {
        (1.0 + self.rolloff) / self.bandwidth()
    }

    pub fn p_max(&self) -> usize {
        self.p_list.iter().copied().max().unwrap_or(1)
    }

    pub fn interval(&self) -> (f64, f64) {
        (0.0, (self.n - 1) as f64 * self.semi_period)
    }

    /// Crossing indices needed beyond `I` on each side.
    pub fn extension_crossings(&self) -> i64 {
        if self.extended {
            self.p_max() as i64 + 2
        } else {
            0
        }
    }

    /// Interval over which the signal is generated and crossings exist.
    pub fn generation_interval(&self) -> (f64, f64) {
        let ext = self.extension_crossings() as f64 * self.semi_period;
        let (a, b) = self.interval();
        (a - ext, b + ext)
    }

    pub fn crossing_range(&self) -> (i64, i64) {
        let e = self.extension_crossings();
        (-e, self.n as i64 - 1 + e)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Streams of the sub-seed split.
pub const STREAM_SIGNAL: u64 = 0x5349_474e;
pub const STREAM_NOISE: u64 = 0x4e4f_4953;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based seed split: the draw for `(stream, key)` does not depend on
/// which other keys are used.
pub fn sub_seed(master: u64, stream: u64, key: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ key)
}
