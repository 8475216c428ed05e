//! Closed-loop sampling-rate controller.
//!
//! Every window is collected twice, at the current rate `r` and at
//! `dual_ratio * r`. If the two spectra disagree (or the fast stream already
//! needs its whole band) the controller is in probe mode and multiplies the
//! rate. Otherwise it is steady: the rate tracks `headroom` times the
//! Nyquist estimate, rising at once and falling only after
//! `decrease_patience` consecutive windows ask for less.
//!
//! Rates the controller has stepped down from are remembered; when aliasing
//! shows up again, the probe jumps straight to the lowest remembered rate
//! above the current one instead of doubling its way there.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::alias::{detect_aliasing, plan_dual_rates, AliasVerdict, DetectorConfig, DualRatePlan};
use crate::series::{TimePoint, UniformSeries};
use crate::spectral::{estimate_nyquist, EstimateOptions, NyquistEstimate};
use crate::{Error, Result};

/// Something that can be measured at any instant.
pub trait SignalSource {
    fn query(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64> SignalSource for F {
    fn query(&self, t: f64) -> f64 {
        self(t)
    }
}

/// Fewer samples than this in the slow stream and the window is skipped.
pub const MIN_WINDOW_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    /// Moving-window length in seconds.
    pub window: f64,
    /// Window advance in seconds.
    pub step: f64,
    pub probe_factor: f64,
    pub headroom: f64,
    pub decrease_patience: usize,
    pub memory_depth: usize,
    pub initial_rate: f64,
    pub min_rate: f64,
    pub max_rate: f64,
    pub dual_ratio: f64,
    pub alias_threshold: f64,
    /// Per-sample noise amplitude handed to the alias detector.
    pub noise_floor: f64,
    pub energy_fraction: f64,
}

impl SamplerConfig {
    /// Six-hour windows advanced every five minutes, doubling probes,
    /// 20% headroom.
    pub fn new(initial_rate: f64, min_rate: f64, max_rate: f64) -> Self {
        Self {
            window: 21_600.0,
            step: 300.0,
            probe_factor: 2.0,
            headroom: 1.2,
            decrease_patience: 3,
            memory_depth: 8,
            initial_rate,
            min_rate,
            max_rate,
            dual_ratio: 1.5,
            alias_threshold: 0.1,
            noise_floor: 0.0,
            energy_fraction: 0.99,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ConfigViolation(msg));
        if !(self.window.is_finite() && self.window > 0.0) {
            return fail(format!("window must be positive, got {}", self.window));
        }
        if !(self.step.is_finite() && self.step > 0.0 && self.step <= self.window) {
            return fail(format!(
                "step must lie in (0, window={}], got {}",
                self.window, self.step
            ));
        }
        if !(self.probe_factor.is_finite() && self.probe_factor > 1.0) {
            return fail(format!("probe factor must exceed 1, got {}", self.probe_factor));
        }
        if !(self.headroom.is_finite() && self.headroom >= 1.0) {
            return fail(format!("headroom must be at least 1, got {}", self.headroom));
        }
        if self.decrease_patience == 0 {
            return fail("decrease patience must be at least 1".into());
        }
        let rates_ok = self.min_rate.is_finite()
            && self.max_rate.is_finite()
            && self.min_rate > 0.0
            && self.min_rate <= self.initial_rate
            && self.initial_rate <= self.max_rate;
        if !rates_ok {
            return fail(format!(
                "need 0 < min_rate <= initial_rate <= max_rate, got {} / {} / {}",
                self.min_rate, self.initial_rate, self.max_rate
            ));
        }
        plan_dual_rates(1.0, self.dual_ratio)?;
        self.detector().validate()?;
        if !(self.energy_fraction > 0.0 && self.energy_fraction < 1.0) {
            return Err(Error::InvalidEnergyFraction {
                fraction: self.energy_fraction,
            });
        }
        Ok(())
    }

    pub fn detector(&self) -> DetectorConfig {
        DetectorConfig {
            threshold: self.alias_threshold,
            noise_floor: self.noise_floor,
            ..DetectorConfig::default()
        }
    }

    fn estimate_options(&self) -> EstimateOptions {
        EstimateOptions::with_fraction(self.energy_fraction)
    }

    fn clamp(&self, rate: f64) -> f64 {
        rate.max(self.min_rate).min(self.max_rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Probe,
    Steady,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Probe => "probe",
            Mode::Steady => "steady",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerState {
    pub mode: Mode,
    pub current_rate: f64,
    /// Nyquist rates of levels the controller stepped down from, oldest first.
    pub remembered_max: Vec<f64>,
    /// Consecutive windows whose target sat below the current rate.
    pub windows_below: usize,
    /// Highest estimate in the current run of below-target windows.
    below_peak: f64,
    /// Highest estimate seen since the rate last changed.
    level_peak: f64,
}

impl SamplerState {
    pub fn new(config: &SamplerConfig) -> Self {
        Self {
            mode: Mode::Probe,
            current_rate: config.initial_rate,
            remembered_max: Vec::new(),
            windows_below: 0,
            below_peak: 0.0,
            level_peak: 0.0,
        }
    }

    fn set_rate(&mut self, rate: f64) {
        if rate != self.current_rate {
            self.current_rate = rate;
            self.level_peak = 0.0;
        }
        self.windows_below = 0;
        self.below_peak = 0.0;
    }

    fn remember(&mut self, nyquist: f64, depth: usize) {
        if depth == 0 || nyquist <= 0.0 {
            return;
        }
        self.remembered_max
            .retain(|&r| libm::fabs(r - nyquist) > 1e-9 * nyquist);
        self.remembered_max.push(nyquist);
        if self.remembered_max.len() > depth {
            let excess = self.remembered_max.len() - depth;
            self.remembered_max.drain(..excess);
        }
    }
}

/// One window collected at both rates of the dual plan.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWindow {
    /// Sampled at `dual_ratio * rate`.
    pub fast: UniformSeries,
    /// Sampled at `rate`.
    pub slow: UniformSeries,
}

impl DualWindow {
    /// Samples `source` on the grids `i / f` that fall in `[start, start + duration)`.
    /// Grids are anchored at t = 0, so consecutive windows at one rate share points.
    pub fn collect<S: SignalSource + ?Sized>(
        source: &S,
        start: f64,
        duration: f64,
        rate: f64,
        dual_ratio: f64,
    ) -> Result<Self> {
        Ok(Self {
            fast: sample_grid(source, start, duration, rate * dual_ratio)?,
            slow: sample_grid(source, start, duration, rate)?,
        })
    }
}

fn sample_grid<S: SignalSource + ?Sized>(
    source: &S,
    start: f64,
    duration: f64,
    rate: f64,
) -> Result<UniformSeries> {
    let first = libm::ceil(start * rate - 1e-9).max(0.0);
    let end = libm::ceil((start + duration) * rate - 1e-9);
    let n = (end - first).max(0.0) as usize;
    let values = (0..n)
        .map(|i| source.query((first + i as f64) / rate))
        .collect();
    UniformSeries::new("", "", first / rate, rate, values)
}

/// What the controller did with one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub mode: Mode,
    pub rate_used: f64,
    pub next_rate: f64,
    /// `None` when the window was too short to analyze.
    pub estimate: Option<NyquistEstimate>,
    pub verdict: Option<AliasVerdict>,
}

/// Advances the controller by one window.
pub fn step_window(
    state: &SamplerState,
    window: &DualWindow,
    config: &SamplerConfig,
) -> Result<(SamplerState, Decision)> {
    let rate = state.current_rate;
    let same = |a: f64, b: f64| libm::fabs(a - b) <= 1e-9 * b;
    if !same(window.slow.rate(), rate) || !same(window.fast.rate(), rate * config.dual_ratio) {
        return Err(Error::ConfigViolation(format!(
            "window sampled at {} / {} Hz, controller expects {} / {} Hz",
            window.slow.rate(),
            window.fast.rate(),
            rate,
            rate * config.dual_ratio
        )));
    }

    let mut next = state.clone();
    let hold = |next: SamplerState| {
        let decision = Decision {
            mode: next.mode,
            rate_used: rate,
            next_rate: rate,
            estimate: None,
            verdict: None,
        };
        Ok((next, decision))
    };
    if window.slow.len() < MIN_WINDOW_SAMPLES {
        return hold(next);
    }

    let plan = DualRatePlan::new(window.fast.rate(), window.slow.rate())?;
    let verdict = match detect_aliasing(&window.fast, &window.slow, &plan, &config.detector()) {
        Ok(v) => v,
        Err(Error::WindowMismatch { .. }) => return hold(next),
        Err(e) => return Err(e),
    };
    let estimate = match estimate_nyquist(&window.fast, &config.estimate_options()) {
        Ok(e) => e,
        Err(Error::DegenerateSignal) => NyquistEstimate::Rate(0.0),
        Err(e) => return Err(e),
    };

    match estimate {
        NyquistEstimate::Rate(nyquist) if !verdict.aliased => steady(&mut next, nyquist, config),
        _ => probe(&mut next, config),
    }
    let decision = Decision {
        mode: next.mode,
        rate_used: rate,
        next_rate: next.current_rate,
        estimate: Some(estimate),
        verdict: Some(verdict),
    };
    Ok((next, decision))
}

fn probe(state: &mut SamplerState, config: &SamplerConfig) {
    state.mode = Mode::Probe;
    let rate = state.current_rate;
    let recalled = state
        .remembered_max
        .iter()
        .map(|&n| n * config.headroom)
        .filter(|&r| r > rate * (1.0 + 1e-9))
        .fold(f64::INFINITY, f64::min);
    let next = if recalled.is_finite() {
        recalled
    } else {
        rate * config.probe_factor
    };
    state.set_rate(next.min(config.max_rate));
}

fn steady(state: &mut SamplerState, nyquist: f64, config: &SamplerConfig) {
    state.mode = Mode::Steady;
    state.level_peak = state.level_peak.max(nyquist);
    let rate = state.current_rate;
    let target = config.headroom * nyquist;
    if target > rate * (1.0 + 1e-9) {
        state.set_rate(config.clamp(target));
    } else if target < rate * (1.0 - 1e-9) {
        state.windows_below += 1;
        state.below_peak = state.below_peak.max(nyquist);
        if state.windows_below >= config.decrease_patience {
            let lowered = config.clamp(config.headroom * state.below_peak);
            let left_behind = state.level_peak;
            if lowered < rate {
                state.remember(left_behind, config.memory_depth);
            }
            state.set_rate(lowered);
        }
    } else {
        state.windows_below = 0;
        state.below_peak = 0.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRecord {
    pub window_start: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingLog {
    pub config: SamplerConfig,
    pub horizon: f64,
    pub records: Vec<WindowRecord>,
    /// Every distinct sample taken, by time.
    pub samples: Vec<TimePoint>,
}

impl SamplingLog {
    /// End of the last analyzed window.
    pub fn covered_span(&self) -> f64 {
        self.records
            .last()
            .map_or(0.0, |r| r.window_start + self.config.window)
    }

    pub fn final_rate(&self) -> Option<f64> {
        self.records.last().map(|r| r.decision.next_rate)
    }
}

/// Runs the controller over `[0, horizon)`, one window every `config.step`.
pub fn run<S: SignalSource + ?Sized>(
    source: &S,
    config: &SamplerConfig,
    horizon: f64,
) -> Result<SamplingLog> {
    config.validate()?;
    if !(horizon.is_finite() && horizon >= config.window) {
        return Err(Error::HorizonTooShort {
            horizon,
            window: config.window,
        });
    }
    let mut state = SamplerState::new(config);
    let mut records = Vec::new();
    let mut samples = Vec::new();
    let mut k = 0usize;
    loop {
        let start = k as f64 * config.step;
        if start + config.window > horizon * (1.0 + 1e-12) {
            break;
        }
        let window = DualWindow::collect(
            source,
            start,
            config.window,
            state.current_rate,
            config.dual_ratio,
        )?;
        for s in [&window.fast, &window.slow] {
            samples.extend(
                s.values()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| TimePoint::new(s.time_at(i), v)),
            );
        }
        let (next, decision) = step_window(&state, &window, config)?;
        records.push(WindowRecord {
            window_start: start,
            decision,
        });
        state = next;
        k += 1;
    }
    samples.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
    samples.dedup_by(|b, a| libm::fabs(b.timestamp - a.timestamp) <= 1e-12 * libm::fabs(a.timestamp) + 1e-15);
    Ok(SamplingLog {
        config: *config,
        horizon,
        records,
        samples,
    })
}

/// Samples taken, counting both streams once per distinct instant.
pub fn total_cost(log: &SamplingLog) -> usize {
    log.samples.len()
}

/// Samples a fixed-rate poller takes on `[0, span)`.
pub fn fixed_rate_cost(rate: f64, span: f64) -> usize {
    libm::ceil(rate * span - 1e-9).max(0.0) as usize
}
