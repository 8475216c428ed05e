//! Raw and uniformly sampled time series, plus the resampling and
//! quantization operations that move between them.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// One measurement: seconds since the epoch and the metric value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub timestamp: f64,
    pub value: f64,
}

impl TimePoint {
    pub fn new(timestamp: f64, value: f64) -> Self {
        Self { timestamp, value }
    }
}

/// A possibly irregular trace of one metric on one device.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    metric_name: String,
    unit: String,
    points: Vec<TimePoint>,
}

impl TimeSeries {
    /// Builds a trace, rejecting non-finite samples and timestamps that do
    /// not strictly increase.
    pub fn new(
        metric_name: impl Into<String>,
        unit: impl Into<String>,
        points: Vec<TimePoint>,
    ) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.timestamp.is_finite() {
                return Err(Error::NonFinite {
                    what: "timestamp",
                    index: i,
                });
            }
            if !p.value.is_finite() {
                return Err(Error::NonFinite {
                    what: "value",
                    index: i,
                });
            }
            if i > 0 && p.timestamp <= points[i - 1].timestamp {
                return Err(Error::NonMonotone { index: i });
            }
        }
        Ok(Self {
            metric_name: metric_name.into(),
            unit: unit.into(),
            points,
        })
    }

    pub fn metric_name(&self) -> &str {
        &self.metric_name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn points(&self) -> &[TimePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Median of the inter-sample gaps, in seconds. `None` for fewer than two points.
    pub fn median_gap(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let mut gaps: Vec<f64> = self
            .points
            .windows(2)
            .map(|w| w[1].timestamp - w[0].timestamp)
            .collect();
        gaps.sort_by(f64::total_cmp);
        let n = gaps.len();
        Some(if n % 2 == 1 {
            gaps[n / 2]
        } else {
            0.5 * (gaps[n / 2 - 1] + gaps[n / 2])
        })
    }

    /// Largest inter-sample gap, in seconds.
    pub fn max_gap(&self) -> Option<f64> {
        self.points
            .windows(2)
            .map(|w| w[1].timestamp - w[0].timestamp)
            .reduce(f64::max)
    }
}

/// Regularly spaced samples; sample `i` sits at `start_time + i / rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    metric_name: String,
    unit: String,
    start_time: f64,
    rate: f64,
    values: Vec<f64>,
}

impl UniformSeries {
    pub fn new(
        metric_name: impl Into<String>,
        unit: impl Into<String>,
        start_time: f64,
        rate: f64,
        values: Vec<f64>,
    ) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidRate { rate });
        }
        if !start_time.is_finite() {
            return Err(Error::NonFinite {
                what: "start time",
                index: 0,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "value",
                index,
            });
        }
        Ok(Self {
            metric_name: metric_name.into(),
            unit: unit.into(),
            start_time,
            rate,
            values,
        })
    }

    /// An unlabeled series starting at t = 0.
    pub fn from_values(rate: f64, values: Vec<f64>) -> Result<Self> {
        Self::new("", "", 0.0, rate, values)
    }

    pub fn metric_name(&self) -> &str {
        &self.metric_name
    }

    pub fn unit(&self) -> &str {
        &self.unit
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.start_time + i as f64 / self.rate
    }

    /// `len / rate`, the span covered when each sample owns one interval.
    pub fn duration(&self) -> f64 {
        self.values.len() as f64 / self.rate
    }

    /// Same labels and start time, new rate and values.
    pub fn with_values(&self, rate: f64, values: Vec<f64>) -> Result<Self> {
        Self::new(
            self.metric_name.clone(),
            self.unit.clone(),
            self.start_time,
            rate,
            values,
        )
    }

    /// Copies labels from `other`.
    pub fn labeled_like(mut self, other: &UniformSeries) -> Self {
        self.metric_name = other.metric_name.clone();
        self.unit = other.unit.clone();
        self.start_time = other.start_time;
        self
    }

    /// Converts back into a raw trace.
    pub fn to_time_series(&self) -> TimeSeries {
        let points = (0..self.len())
            .map(|i| TimePoint::new(self.time_at(i), self.values[i]))
            .collect();
        TimeSeries {
            metric_name: self.metric_name.clone(),
            unit: self.unit.clone(),
            points,
        }
    }
}

/// A uniform quantization grid: `origin + k * quantum`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationSpec {
    quantum: f64,
    origin: f64,
}

impl QuantizationSpec {
    pub fn new(quantum: f64) -> Result<Self> {
        Self::with_origin(quantum, 0.0)
    }

    pub fn with_origin(quantum: f64, origin: f64) -> Result<Self> {
        if !(quantum.is_finite() && quantum > 0.0) {
            return Err(Error::InvalidQuantum { quantum });
        }
        if !origin.is_finite() {
            return Err(Error::NonFinite {
                what: "quantization origin",
                index: 0,
            });
        }
        Ok(Self { quantum, origin })
    }

    pub fn quantum(&self) -> f64 {
        self.quantum
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Rounds one value to the grid, ties away from zero.
    pub fn apply(&self, value: f64) -> f64 {
        self.origin + self.quantum * libm::round((value - self.origin) / self.quantum)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizeOptions {
    /// Largest tolerated input gap, in units of the output interval.
    pub max_gap_multiple: f64,
}

impl Default for RegularizeOptions {
    fn default() -> Self {
        Self {
            max_gap_multiple: 10.0,
        }
    }
}

// Slack for float noise when counting how many grid instants fit in a span.
const GRID_EPS: f64 = 1e-9;

/// Nearest-neighbor resampling of an irregular trace onto a uniform grid.
///
/// The output starts at the first timestamp and covers every grid instant up
/// to the last one. An output instant equidistant from two inputs takes the
/// earlier input.
pub fn regularize(ts: &TimeSeries, rate: f64, opts: &RegularizeOptions) -> Result<UniformSeries> {
    let pts = ts.points();
    if pts.len() < 2 {
        return Err(Error::EmptyTrace { points: pts.len() });
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::InvalidRate { rate });
    }
    let limit = opts.max_gap_multiple / rate;
    let gap = ts.max_gap().unwrap_or(0.0);
    if gap > limit {
        return Err(Error::GapTooLarge { gap, limit });
    }

    let first = pts[0].timestamp;
    let span = pts[pts.len() - 1].timestamp - first;
    let count = libm::floor(span * rate + GRID_EPS) as usize + 1;
    let mut values = Vec::with_capacity(count);
    let mut p = 0;
    for k in 0..count {
        let t = first + k as f64 / rate;
        while p + 1 < pts.len() && pts[p + 1].timestamp <= t {
            p += 1;
        }
        let pick = if p + 1 < pts.len() {
            let before = t - pts[p].timestamp;
            let after = pts[p + 1].timestamp - t;
            if before <= after {
                p
            } else {
                p + 1
            }
        } else {
            p
        };
        values.push(pts[pick].value);
    }
    UniformSeries::new(ts.metric_name(), ts.unit(), first, rate, values)
}

/// Keeps the input sample nearest to each instant of a slower grid.
///
/// No anti-alias filter is applied: the result is what a poller running at
/// `target_rate` would have recorded. An instant exactly halfway between two
/// inputs takes the later one.
pub fn decimate(us: &UniformSeries, target_rate: f64) -> Result<UniformSeries> {
    if !(target_rate.is_finite() && target_rate > 0.0) || target_rate > us.rate() {
        return Err(Error::InvalidRate { rate: target_rate });
    }
    if target_rate == us.rate() || us.is_empty() {
        return Ok(us.clone());
    }
    let n = us.len();
    let step = us.rate() / target_rate;
    let count = libm::floor((n - 1) as f64 / step + GRID_EPS) as usize + 1;
    let values = (0..count)
        .map(|k| {
            let pos = k as f64 * step;
            let mut idx = libm::round(pos);
            // Snap float noise around exact halves so ties resolve consistently.
            if libm::fabs(pos - libm::floor(pos) - 0.5) < GRID_EPS {
                idx = libm::ceil(pos);
            }
            us.values()[(idx as usize).min(n - 1)]
        })
        .collect();
    us.with_values(target_rate, values)
}

/// Rounds every value to the grid of `q`.
pub fn quantize(us: &UniformSeries, q: &QuantizationSpec) -> UniformSeries {
    let values = us.values().iter().map(|&v| q.apply(v)).collect();
    UniformSeries {
        values,
        ..us.clone()
    }
}

/// Euclidean distance between two series of equal rate and length.
pub fn l2_distance(a: &UniformSeries, b: &UniformSeries) -> Result<f64> {
    let same_rate = libm::fabs(a.rate() - b.rate()) <= 1e-12 * a.rate().max(b.rate());
    if !same_rate || a.len() != b.len() {
        return Err(Error::ShapeMismatch {
            left: (a.len(), a.rate()),
            right: (b.len(), b.rate()),
        });
    }
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(libm::sqrt(sum))
}
