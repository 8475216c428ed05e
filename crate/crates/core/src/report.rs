//! Per-trace Nyquist analysis and fleet-level summaries.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::series::{regularize, RegularizeOptions, TimeSeries, UniformSeries};
use crate::spectral::{estimate_from_values, EstimateOptions, NyquistEstimate};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub energy_fraction: f64,
    /// `(length, step)` in seconds for moving-window analysis; `None`
    /// analyzes the whole trace at once.
    pub window: Option<(f64, f64)>,
    pub max_gap_multiple: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            energy_fraction: 0.99,
            window: None,
            max_gap_multiple: RegularizeOptions::default().max_gap_multiple,
        }
    }
}

impl AnalysisOptions {
    /// Six-hour windows every five minutes.
    pub const DEFAULT_WINDOW: (f64, f64) = (21_600.0, 300.0);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowEstimate {
    pub start: f64,
    pub nyquist: NyquistEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub metric_name: String,
    pub device_id: String,
    pub unit: String,
    /// Reciprocal of the median inter-sample gap.
    pub actual_rate: f64,
    /// Whole-trace estimate, or the largest window estimate when windowed.
    pub nyquist: NyquistEstimate,
    /// `actual_rate / nyquist`; `None` when aliased.
    pub oversampling_ratio: Option<f64>,
    pub samples_analyzed: usize,
    pub windows: Vec<WindowEstimate>,
}

impl TraceReport {
    /// The ratio with aliased traces mapped to `-1`.
    pub fn ratio_or_sentinel(&self) -> f64 {
        self.oversampling_ratio
            .unwrap_or(NyquistEstimate::ALIASED_SENTINEL)
    }
}

pub fn analyze_trace(ts: &TimeSeries, device_id: &str, opts: &AnalysisOptions) -> Result<TraceReport> {
    const MIN_POINTS: usize = 8;
    if ts.len() < MIN_POINTS {
        return Err(Error::TooShort {
            len: ts.len(),
            min: MIN_POINTS,
        });
    }
    let gap = ts.median_gap().ok_or(Error::EmptyTrace { points: ts.len() })?;
    let actual_rate = 1.0 / gap;
    let us = regularize(
        ts,
        actual_rate,
        &RegularizeOptions {
            max_gap_multiple: opts.max_gap_multiple,
        },
    )?;
    let est_opts = EstimateOptions::with_fraction(opts.energy_fraction);

    let (nyquist, windows) = match opts.window {
        None => (estimate_from_values(us.values(), actual_rate, &est_opts)?, Vec::new()),
        Some((length, step)) => {
            let windows = window_estimates(&us, length, step, &est_opts)?;
            (headline(&windows)?, windows)
        }
    };
    let oversampling_ratio = nyquist.rate().map(|r| actual_rate / r);
    Ok(TraceReport {
        metric_name: ts.metric_name().into(),
        device_id: device_id.into(),
        unit: ts.unit().into(),
        actual_rate,
        nyquist,
        oversampling_ratio,
        samples_analyzed: us.len(),
        windows,
    })
}

fn window_estimates(
    us: &UniformSeries,
    length: f64,
    step: f64,
    opts: &EstimateOptions,
) -> Result<Vec<WindowEstimate>> {
    if !(length.is_finite() && length > 0.0 && step.is_finite() && step > 0.0) {
        return Err(Error::ConfigViolation(alloc::format!(
            "analysis window ({length}, {step}) must be positive"
        )));
    }
    let rate = us.rate();
    let n = us.len();
    let width = (libm::round(length * rate) as usize).clamp(1, n);
    let stride = (libm::round(step * rate) as usize).max(1);
    let mut out = Vec::new();
    let mut first = 0;
    while first + width <= n {
        let values = &us.values()[first..first + width];
        let nyquist = match estimate_from_values(values, rate, opts) {
            Ok(e) => e,
            Err(Error::DegenerateSignal) => NyquistEstimate::Rate(0.0),
            Err(e) => return Err(e),
        };
        out.push(WindowEstimate {
            start: us.time_at(first),
            nyquist,
        });
        first += stride;
    }
    Ok(out)
}

fn headline(windows: &[WindowEstimate]) -> Result<NyquistEstimate> {
    let mut best = 0.0f64;
    for w in windows {
        match w.nyquist {
            NyquistEstimate::Aliased => return Ok(NyquistEstimate::Aliased),
            NyquistEstimate::Rate(r) => best = best.max(r),
        }
    }
    if best > 0.0 {
        Ok(NyquistEstimate::Rate(best))
    } else {
        Err(Error::DegenerateSignal)
    }
}

/// Minimum, quartiles and maximum, quartiles interpolated linearly between
/// order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl FiveNumber {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            min: v[0],
            q1: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q3: quantile_sorted(&v, 0.75),
            max: v[v.len() - 1],
        })
    }
}

fn quantile_sorted(v: &[f64], p: f64) -> f64 {
    let pos = p * (v.len() - 1) as f64;
    let lo = libm::floor(pos) as usize;
    let hi = (lo + 1).min(v.len() - 1);
    let frac = pos - lo as f64;
    v[lo] + (v[hi] - v[lo]) * frac
}

/// Fraction of values at or below `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfPoint {
    pub value: f64,
    pub fraction: f64,
}

/// Empirical CDF with one point per distinct value.
pub fn cdf_points(values: &[f64]) -> Vec<CdfPoint> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut out: Vec<CdfPoint> = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        let fraction = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.value == x => last.fraction = fraction,
            _ => out.push(CdfPoint { value: x, fraction }),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSummary {
    pub metric: String,
    pub traces: usize,
    pub aliased: usize,
    /// Over the traces with a Nyquist rate.
    pub nyquist: Option<FiveNumber>,
    /// Oversampling ratios, aliased traces at `-1`.
    pub ratio_cdf: Vec<CdfPoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub source: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSet {
    pub reports: Vec<TraceReport>,
    pub skipped: Vec<Skipped>,
    /// Sorted by metric name.
    pub metrics: Vec<MetricSummary>,
    /// Across all traces, aliased at `-1`.
    pub ratio_cdf: Vec<CdfPoint>,
}

impl ReportSet {
    /// Aggregates finished reports. Fails only when nothing succeeded.
    pub fn from_reports(reports: Vec<TraceReport>, skipped: Vec<Skipped>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::AllTracesFailed {
                skipped: skipped.len(),
            });
        }
        let mut by_metric: BTreeMap<&str, Vec<&TraceReport>> = BTreeMap::new();
        for r in &reports {
            by_metric.entry(&r.metric_name).or_default().push(r);
        }
        let metrics = by_metric
            .into_iter()
            .map(|(metric, rs)| {
                let rates: Vec<f64> = rs.iter().filter_map(|r| r.nyquist.rate()).collect();
                let ratios: Vec<f64> = rs.iter().map(|r| r.ratio_or_sentinel()).collect();
                MetricSummary {
                    metric: metric.into(),
                    traces: rs.len(),
                    aliased: rs.len() - rates.len(),
                    nyquist: FiveNumber::of(&rates),
                    ratio_cdf: cdf_points(&ratios),
                }
            })
            .collect();
        let all: Vec<f64> = reports.iter().map(|r| r.ratio_or_sentinel()).collect();
        Ok(Self {
            ratio_cdf: cdf_points(&all),
            reports,
            skipped,
            metrics,
        })
    }
}
