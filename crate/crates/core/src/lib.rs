//! Band-limited signal reconstruction from sine-wave crossings.
//!
//! A signal `s(t)` with two-sided bandwidth `B` and `|s| ≤ A_s` crosses the
//! probe `A·sin(πt/T)`, `A > A_s`, `BT < 1`, exactly once in every interval
//! `[nT - T/2, nT + T/2]`. The crossing shifts `δ_n` alone determine `s`:
//! [`interp`] rebuilds it at any instant with `2P + 1` crossings and an error
//! that decays exponentially in `P`.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); file I/O and
//! the experiment harness use `f64`.

pub mod crossings;
pub mod error;
pub mod harness;
pub mod interp;
pub mod io;
pub mod roots;
pub mod scalar;
pub mod siggen;
pub mod spectrum;

pub use crossings::{detect, residual, verify_bound, BoundReport, CrossingSequence, SineProbe};
pub use error::{Error, Result};
pub use interp::{
    gamma, grid_decompose, lagrange_nonuniform, predict_error_db, reconstruct_at, resample_grid, window_w,
    ErrorFitInput, GridDecomposition, InterpConfig, NodeSet, Reconstructor,
};
pub use scalar::Real;
pub use siggen::{
    estimate_sup, make_bandlimited_noise, make_bpsk, BandlimitedSignal, Bandlimited, BpskParams, SincSeriesParams,
};
pub use spectrum::{amplitude_spectrum, spectrum_diff, spectrum_from_crossings, SpectrumResult};

pub type Signal = BandlimitedSignal<f64>;
pub type Signal32 = BandlimitedSignal<f32>;
pub type Crossings = CrossingSequence<f64>;
pub type Crossings32 = CrossingSequence<f32>;
pub type Probe = SineProbe<f64>;
pub type Probe32 = SineProbe<f32>;
pub type Config = InterpConfig<f64>;
pub type Config32 = InterpConfig<f32>;
pub type Spectrum = SpectrumResult<f64>;
pub type Spectrum32 = SpectrumResult<f32>;
