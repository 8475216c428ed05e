use std::path::{Path, PathBuf};

use nyquist_core::report::Skipped;
use nyquist_core::{analyze_trace, AnalysisOptions, ReportSet, TraceReport};
use rayon::prelude::*;

use crate::error::Result;
use crate::trace::load_trace;

pub fn analyze_file(path: &Path, opts: &AnalysisOptions) -> Result<TraceReport> {
    let trace = load_trace(path)?;
    Ok(analyze_trace(&trace.series, &trace.device_id, opts)?)
}

/// Analyzes every trace in parallel, in sorted path order. Files that fail
/// to load or analyze come back as [`Skipped`] entries.
pub fn analyze_all(paths: &[PathBuf], opts: &AnalysisOptions) -> (Vec<TraceReport>, Vec<Skipped>) {
    let mut sorted = paths.to_vec();
    sorted.sort();
    sorted.dedup();
    let outcomes: Vec<_> = sorted
        .par_iter()
        .map(|p| (p, analyze_file(p, opts)))
        .collect();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for (path, outcome) in outcomes {
        match outcome {
            Ok(r) => reports.push(r),
            Err(e) => skipped.push(Skipped {
                source: path.display().to_string(),
                reason: e.to_string(),
            }),
        }
    }
    (reports, skipped)
}

/// [`analyze_all`] aggregated into a [`ReportSet`]; fails only when no trace
/// succeeded.
pub fn batch_report(paths: &[PathBuf], opts: &AnalysisOptions) -> Result<ReportSet> {
    let (reports, skipped) = analyze_all(paths, opts);
    Ok(ReportSet::from_reports(reports, skipped)?)
}
