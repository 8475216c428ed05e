//! Trace files.
//!
//! A trace is UTF-8 CSV with a `timestamp,value` header, timestamps in
//! seconds and strictly increasing. Lines starting with `#` are comments;
//! those above the header may carry metadata as `key: value`:
//!
//! ```text
//! # metric: cpu_util
//! # device: rack3-host17
//! # unit: percent
//! timestamp,value
//! 0,12.5
//! 60,13
//! ```

use std::path::Path;

use nyquist_core::{TimePoint, TimeSeries};

use crate::error::{Error, Result};
use crate::export::write_atomic;

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub series: TimeSeries,
    pub device_id: String,
}

#[derive(Default)]
struct Metadata {
    metric: Option<String>,
    device: Option<String>,
    unit: Option<String>,
}

fn leading_metadata(text: &str) -> Metadata {
    let mut meta = Metadata::default();
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            continue;
        }
        let Some(comment) = line.strip_prefix('#') else {
            break;
        };
        let Some((key, value)) = comment.split_once(':') else {
            continue;
        };
        let value = Some(value.trim().to_string());
        match key.trim().to_ascii_lowercase().as_str() {
            "metric" => meta.metric = value,
            "device" => meta.device = value,
            "unit" => meta.unit = value,
            _ => {}
        }
    }
    meta
}

/// Parses trace text. `origin` names the source in diagnostics. Missing
/// metric and device names come back empty.
pub fn parse_trace(text: &str, origin: &str) -> Result<Trace> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let meta = leading_metadata(text);
    let mut header_seen = false;
    let mut points = Vec::new();
    let mut last: Option<f64> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if !header_seen {
            if fields != ["timestamp", "value"] {
                return Err(Error::parse(origin, line, "expected header `timestamp,value`"));
            }
            header_seen = true;
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(
                origin,
                line,
                format!("expected 2 fields, found {}", fields.len()),
            ));
        }
        let number = |field: &str, what: &str| -> Result<f64> {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::parse(
                    origin,
                    line,
                    format!("{what} `{field}` is not a finite number"),
                )),
            }
        };
        let timestamp = number(fields[0], "timestamp")?;
        let value = number(fields[1], "value")?;
        if last.is_some_and(|prev| timestamp <= prev) {
            return Err(Error::NonMonotoneTimestamps {
                origin: origin.into(),
                line,
            });
        }
        last = Some(timestamp);
        points.push(TimePoint::new(timestamp, value));
    }
    if points.is_empty() {
        return Err(Error::EmptyFile {
            origin: origin.into(),
        });
    }
    let series = TimeSeries::new(
        meta.metric.unwrap_or_default(),
        meta.unit.unwrap_or_default(),
        points,
    )?;
    Ok(Trace {
        series,
        device_id: meta.device.unwrap_or_default(),
    })
}

/// Reads a trace file. A missing metric or device name defaults to the file
/// stem.
pub fn load_trace(path: &Path) -> Result<Trace> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let trace = parse_trace(&text, &path.display().to_string())?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let Trace { series, device_id } = trace;
    let series = if series.metric_name().is_empty() {
        TimeSeries::new(stem.clone(), series.unit(), series.points().to_vec())?
    } else {
        series
    };
    let device_id = if device_id.is_empty() { stem } else { device_id };
    Ok(Trace { series, device_id })
}

pub fn format_trace(series: &TimeSeries, device_id: &str) -> String {
    let mut out = String::new();
    for (key, value) in [
        ("metric", series.metric_name()),
        ("device", device_id),
        ("unit", series.unit()),
    ] {
        if !value.is_empty() {
            out.push_str(&format!("# {key}: {value}\n"));
        }
    }
    out.push_str("timestamp,value\n");
    for p in series.points() {
        out.push_str(&format!("{},{}\n", p.timestamp, p.value));
    }
    out
}

pub fn write_trace(path: &Path, series: &TimeSeries, device_id: &str) -> Result<()> {
    write_atomic(path, format_trace(series, device_id).as_bytes())
}
