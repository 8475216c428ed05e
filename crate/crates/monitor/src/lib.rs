//! File formats, batch analysis and exports around `nyquist-core`.
//!
//! The `nyquist` binary in this crate wires these into subcommands.

mod batch;
mod error;
pub mod export;
pub mod specfile;
pub mod trace;

pub use batch::{analyze_all, analyze_file, batch_report};
pub use error::{Error, Result};
pub use specfile::{format_spec, parse_spec};
pub use trace::{format_trace, load_trace, parse_trace, write_trace, Trace};
