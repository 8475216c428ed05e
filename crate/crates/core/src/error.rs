use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// A value or timestamp was NaN or infinite.
    NonFinite { what: &'static str, index: usize },
    /// Timestamps must strictly increase.
    NonMonotone { index: usize },
    /// Regularization needs at least two points.
    EmptyTrace { points: usize },
    /// The largest gap in a trace exceeds the allowed multiple of the output interval.
    GapTooLarge { gap: f64, limit: f64 },
    InvalidRate { rate: f64 },
    InvalidQuantum { quantum: f64 },
    ShapeMismatch { left: (usize, f64), right: (usize, f64) },
    EmptySeries,
    /// The spectrum only carries a PSD and cannot be inverted.
    MissingCoefficients,
    TooShort { len: usize, min: usize },
    InvalidEnergyFraction { fraction: f64 },
    /// Mean-removed energy is below the noise floor; no positive rate is defined.
    DegenerateSignal,
    InvalidCutoff { cutoff: f64, max: f64 },
    InvalidTargetRate { target: f64, rate: f64 },
    IntegerRatio { ratio: f64 },
    InvalidPlan { f1: f64, f2: f64 },
    InvalidThreshold { threshold: f64 },
    /// The two series of a dual-rate pair do not cover the same time window.
    WindowMismatch { start_delta: f64, duration_ratio: f64 },
    RateMismatch { expected: f64, actual: f64 },
    ConfigViolation(String),
    HorizonTooShort { horizon: f64, window: f64 },
    AllTracesFailed { skipped: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite { what, index } => write!(f, "non-finite {what} at index {index}"),
            Error::NonMonotone { index } => {
                write!(f, "timestamps must strictly increase (index {index})")
            }
            Error::EmptyTrace { points } => {
                write!(f, "trace has {points} point(s), at least 2 are required")
            }
            Error::GapTooLarge { gap, limit } => {
                write!(f, "largest gap {gap}s exceeds the allowed {limit}s")
            }
            Error::InvalidRate { rate } => write!(f, "invalid sampling rate {rate} Hz"),
            Error::InvalidQuantum { quantum } => {
                write!(f, "quantization step must be positive, got {quantum}")
            }
            Error::ShapeMismatch { left, right } => write!(
                f,
                "series shapes differ: {} samples at {} Hz vs {} samples at {} Hz",
                left.0, left.1, right.0, right.1
            ),
            Error::EmptySeries => f.write_str("series has no samples"),
            Error::MissingCoefficients => {
                f.write_str("spectrum carries no complex coefficients and cannot be inverted")
            }
            Error::TooShort { len, min } => {
                write!(f, "series has {len} samples, at least {min} are required")
            }
            Error::InvalidEnergyFraction { fraction } => {
                write!(f, "energy fraction must lie in (0, 1), got {fraction}")
            }
            Error::DegenerateSignal => {
                f.write_str("signal has no energy above the noise floor once its mean is removed")
            }
            Error::InvalidCutoff { cutoff, max } => {
                write!(f, "cutoff {cutoff} Hz must lie in [0, {max}] Hz")
            }
            Error::InvalidTargetRate { target, rate } => write!(
                f,
                "target rate {target} Hz must be at least the input rate {rate} Hz"
            ),
            Error::IntegerRatio { ratio } => {
                write!(f, "dual-rate ratio {ratio} is an integer; rates must not divide")
            }
            Error::InvalidPlan { f1, f2 } => {
                write!(f, "dual-rate plan requires f1 > f2 > 0, got f1={f1} f2={f2}")
            }
            Error::InvalidThreshold { threshold } => {
                write!(f, "threshold must be non-negative, got {threshold}")
            }
            Error::WindowMismatch {
                start_delta,
                duration_ratio,
            } => write!(
                f,
                "series cover different windows (start offset {start_delta}s, duration ratio {duration_ratio})"
            ),
            Error::RateMismatch { expected, actual } => {
                write!(f, "expected a series at {expected} Hz, got {actual} Hz")
            }
            Error::ConfigViolation(msg) => write!(f, "configuration violation: {msg}"),
            Error::HorizonTooShort { horizon, window } => {
                write!(f, "horizon {horizon}s is shorter than the window {window}s")
            }
            Error::AllTracesFailed { skipped } => {
                write!(f, "all {skipped} trace(s) failed to analyze")
            }
        }
    }
}

impl core::error::Error for Error {}
