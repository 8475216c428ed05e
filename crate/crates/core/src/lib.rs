//! Treat monitoring metrics as sampled signals.
//!
//! The crate estimates a metric's Nyquist rate from its power spectral
//! density, detects under-sampling by comparing spectra taken at two
//! non-integer-related rates, drives a probe/steady rate controller from those
//! two signals, and reconstructs down-sampled series with an ideal low-pass
//! filter (optionally re-applying the measurement quantization).
//!
//! Everything here is pure computation over owned values and builds without
//! `std`; file formats and the command-line tool live in `nyquist-monitor`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alias;
mod error;
pub mod fft;
pub mod report;
pub mod sampler;
pub mod series;
pub mod spectral;
pub mod synth;

pub use alias::{
    denoise_spectrum, detect_aliasing, plan_dual_rates, AliasVerdict, DetectorConfig,
    DualRatePlan,
};
pub use error::{Error, Result};
pub use report::{analyze_trace, AnalysisOptions, ReportSet, TraceReport};
pub use sampler::{
    run, step_window, total_cost, Mode, SamplerConfig, SamplerState, SamplingLog, SignalSource,
};
pub use series::{
    decimate, l2_distance, quantize, regularize, QuantizationSpec, RegularizeOptions, TimePoint,
    TimeSeries, UniformSeries,
};
pub use spectral::{
    dft, estimate_nyquist, inverse_dft, low_pass_reconstruct, reconstruct_with_quantization,
    spectral_flatness, total_energy, EstimateOptions, NyquistEstimate, Spectrum, Window,
};
pub use synth::{Component, SignalSpec};

pub use num_complex::Complex64;
