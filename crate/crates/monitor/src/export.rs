//! Plot-ready CSV tables and the JSON report.

use std::io::Write;
use std::path::Path;

use nyquist_core::report::{CdfPoint, FiveNumber, MetricSummary};
use nyquist_core::{NyquistEstimate, ReportSet, SamplingLog, Spectrum, TimePoint, TraceReport};
use serde::Serialize;

use crate::error::{Error, Result};

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn table<I>(comments: &[String], header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut head = String::new();
    for c in comments {
        head.push_str("# ");
        head.push_str(c);
        head.push('\n');
    }
    let mut w = csv::Writer::from_writer(head.into_bytes());
    // Writing to memory only fails on invalid UTF-8, which never reaches here.
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn estimate_cell(e: Option<NyquistEstimate>) -> String {
    e.map_or(String::new(), |e| e.to_sentinel().to_string())
}

/// One-sided PSD, bins 0 through N/2.
pub fn spectrum_csv(s: &Spectrum) -> String {
    let rows = s
        .one_sided()
        .into_iter()
        .enumerate()
        .map(|(k, p)| vec![s.frequency(k).to_string(), p.to_string()]);
    table(&[], &["frequency_hz", "psd"], rows)
}

/// One row per window; an aliased estimate is written as -1 and cells the
/// controller had nothing for are left empty. The configuration is echoed
/// in leading comments.
pub fn sampling_log_csv(log: &SamplingLog) -> String {
    let c = &log.config;
    let comments = vec![
        format!("window = {}", c.window),
        format!("step = {}", c.step),
        format!("horizon = {}", log.horizon),
        format!("initial_rate = {}", c.initial_rate),
        format!("min_rate = {}", c.min_rate),
        format!("max_rate = {}", c.max_rate),
        format!("probe_factor = {}", c.probe_factor),
        format!("headroom = {}", c.headroom),
        format!("decrease_patience = {}", c.decrease_patience),
        format!("memory_depth = {}", c.memory_depth),
        format!("dual_ratio = {}", c.dual_ratio),
        format!("alias_threshold = {}", c.alias_threshold),
        format!("noise_floor = {}", c.noise_floor),
        format!("energy_fraction = {}", c.energy_fraction),
    ];
    let rows = log.records.iter().map(|r| {
        let d = &r.decision;
        vec![
            r.window_start.to_string(),
            d.mode.to_string(),
            d.rate_used.to_string(),
            d.next_rate.to_string(),
            estimate_cell(d.estimate),
            d.verdict.map_or(String::new(), |v| v.aliased.to_string()),
            d.verdict.map_or(String::new(), |v| v.discrepancy.to_string()),
        ]
    });
    table(
        &comments,
        &[
            "window_start",
            "mode",
            "rate_hz",
            "next_rate_hz",
            "nyquist_estimate_hz",
            "aliased",
            "discrepancy",
        ],
        rows,
    )
}

pub fn samples_csv(samples: &[TimePoint]) -> String {
    let rows = samples
        .iter()
        .map(|p| vec![p.timestamp.to_string(), p.value.to_string()]);
    table(&[], &["timestamp", "value"], rows)
}

/// Empirical CDF of oversampling ratios; aliased traces sit at -1.
pub fn ratio_cdf_csv(points: &[CdfPoint]) -> String {
    let rows = points
        .iter()
        .map(|p| vec![p.value.to_string(), p.fraction.to_string()]);
    table(&[], &["ratio", "cdf_fraction"], rows)
}

/// Nyquist-rate five-number summary per metric. Metrics whose traces were
/// all aliased have empty cells.
pub fn metric_summary_csv(metrics: &[MetricSummary]) -> String {
    let rows = metrics.iter().map(|m| {
        let mut row = vec![m.metric.clone()];
        match m.nyquist {
            Some(f) => row.extend([f.min, f.q1, f.median, f.q3, f.max].map(|v| v.to_string())),
            None => row.extend(std::iter::repeat(String::new()).take(5)),
        }
        row
    });
    table(&[], &["metric", "min", "q1", "median", "q3", "max"], rows)
}

/// One row per analyzed trace, -1 marking aliased estimates and ratios.
pub fn traces_csv(reports: &[TraceReport]) -> String {
    let rows = reports.iter().map(|r| {
        vec![
            r.metric_name.clone(),
            r.device_id.clone(),
            r.actual_rate.to_string(),
            r.nyquist.to_sentinel().to_string(),
            r.ratio_or_sentinel().to_string(),
            r.samples_analyzed.to_string(),
        ]
    });
    table(
        &[],
        &[
            "metric",
            "device",
            "actual_rate_hz",
            "nyquist_hz",
            "oversampling_ratio",
            "samples",
        ],
        rows,
    )
}

/// Per-window estimates of every windowed trace.
pub fn windows_csv(reports: &[TraceReport]) -> String {
    let rows = reports.iter().flat_map(|r| {
        r.windows.iter().map(move |w| {
            vec![
                r.metric_name.clone(),
                r.device_id.clone(),
                w.start.to_string(),
                w.nyquist.to_sentinel().to_string(),
            ]
        })
    });
    table(&[], &["metric", "device", "window_start", "nyquist_hz"], rows)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    traces: Vec<JsonTrace<'a>>,
    skipped: Vec<JsonSkipped<'a>>,
    distributions: JsonDistributions<'a>,
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    metric: &'a str,
    device: &'a str,
    unit: &'a str,
    actual_rate_hz: f64,
    aliased: bool,
    /// -1 when aliased.
    nyquist_hz: f64,
    /// -1 when aliased.
    oversampling_ratio: f64,
    samples_analyzed: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    windows: Vec<JsonWindow>,
}

#[derive(Serialize)]
struct JsonWindow {
    start: f64,
    nyquist_hz: f64,
}

#[derive(Serialize)]
struct JsonSkipped<'a> {
    source: &'a str,
    reason: &'a str,
}

#[derive(Serialize)]
struct JsonDistributions<'a> {
    ratio_cdf: Vec<JsonCdf>,
    metrics: Vec<JsonMetric<'a>>,
}

#[derive(Serialize)]
struct JsonCdf {
    ratio: f64,
    cdf_fraction: f64,
}

#[derive(Serialize)]
struct JsonMetric<'a> {
    metric: &'a str,
    traces: usize,
    aliased: usize,
    nyquist_hz: Option<JsonFiveNumber>,
    ratio_cdf: Vec<JsonCdf>,
}

#[derive(Serialize)]
struct JsonFiveNumber {
    min: f64,
    q1: f64,
    median: f64,
    q3: f64,
    max: f64,
}

impl From<FiveNumber> for JsonFiveNumber {
    fn from(f: FiveNumber) -> Self {
        Self {
            min: f.min,
            q1: f.q1,
            median: f.median,
            q3: f.q3,
            max: f.max,
        }
    }
}

fn cdf(points: &[CdfPoint]) -> Vec<JsonCdf> {
    points
        .iter()
        .map(|p| JsonCdf {
            ratio: p.value,
            cdf_fraction: p.fraction,
        })
        .collect()
}

pub fn report_json(set: &ReportSet) -> String {
    let traces = set
        .reports
        .iter()
        .map(|r| JsonTrace {
            metric: &r.metric_name,
            device: &r.device_id,
            unit: &r.unit,
            actual_rate_hz: r.actual_rate,
            aliased: r.nyquist.is_aliased(),
            nyquist_hz: r.nyquist.to_sentinel(),
            oversampling_ratio: r.ratio_or_sentinel(),
            samples_analyzed: r.samples_analyzed,
            windows: r
                .windows
                .iter()
                .map(|w| JsonWindow {
                    start: w.start,
                    nyquist_hz: w.nyquist.to_sentinel(),
                })
                .collect(),
        })
        .collect();
    let skipped = set
        .skipped
        .iter()
        .map(|s| JsonSkipped {
            source: &s.source,
            reason: &s.reason,
        })
        .collect();
    let metrics = set
        .metrics
        .iter()
        .map(|m| JsonMetric {
            metric: &m.metric,
            traces: m.traces,
            aliased: m.aliased,
            nyquist_hz: m.nyquist.map(Into::into),
            ratio_cdf: cdf(&m.ratio_cdf),
        })
        .collect();
    let doc = JsonReport {
        traces,
        skipped,
        distributions: JsonDistributions {
            ratio_cdf: cdf(&set.ratio_cdf),
            metrics,
        },
    };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}
