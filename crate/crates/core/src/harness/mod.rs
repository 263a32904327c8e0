//! Deterministic experiment driver: BPSK test signals, crossing detection,
//! reconstruction error sweeps, noisy sweeps, spectra and timing. Each run
//! yields an [`ExperimentReport`] with pass/fail checks and, given an output
//! directory, CSV files headed by the resolved config.

mod bench;
mod config;
mod experiments;
mod report;
mod scenario;

pub use bench::run_bench;
pub use config::{splitmix64, sub_seed, Experiment, ExperimentConfig, STREAM_NOISE, STREAM_SIGNAL};
pub use experiments::{
    departure_index, fit_slope, run_experiment, run_fig1_3, run_fig4, run_fig5_fig7, run_fig6, run_fig8_9,
};
pub use report::{criteria_summary, Check, ErrorReport, ExperimentReport, SnrRow, SupErrorRow};
pub use scenario::{
    add_noise, crossings_of, db, dense_times, error_window, interp_config, make_signal, node_exactness,
    shift_bound_over_t, sup_error, NoisyRealization,
};
