//! Aliasing detection from two samplings of the same signal.
//!
//! A signal sampled at `f1` and at a lower `f2`, with `f1 / f2` not an
//! integer, has matching spectra below `f2 / 2` unless something above that
//! band folds into the slower stream. The detector compares the two
//! one-sided spectra on that band.

use alloc::vec::Vec;

use crate::series::UniformSeries;
use crate::spectral::{spectrum_of, Spectrum, Window};
use crate::{Error, Result};

/// Rates of the fast (`f1`) and slow (`f2`) streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualRatePlan {
    f1: f64,
    f2: f64,
}

const INTEGER_TOLERANCE: f64 = 1e-9;

fn near_integer(x: f64) -> bool {
    libm::fabs(x - libm::round(x)) <= INTEGER_TOLERANCE * x.max(1.0)
}

impl DualRatePlan {
    pub fn new(f1: f64, f2: f64) -> Result<Self> {
        if !(f2.is_finite() && f1.is_finite() && f2 > 0.0 && f1 > f2) {
            return Err(Error::InvalidPlan { f1, f2 });
        }
        let ratio = f1 / f2;
        if near_integer(ratio) {
            return Err(Error::IntegerRatio { ratio });
        }
        Ok(Self { f1, f2 })
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn f2(&self) -> f64 {
        self.f2
    }

    pub fn ratio(&self) -> f64 {
        self.f1 / self.f2
    }
}

/// `f2 = base_rate`, `f1 = ratio * base_rate`.
pub fn plan_dual_rates(base_rate: f64, ratio: f64) -> Result<DualRatePlan> {
    if !(base_rate.is_finite() && base_rate > 0.0) {
        return Err(Error::InvalidRate { rate: base_rate });
    }
    if ratio.is_finite() && near_integer(ratio) {
        return Err(Error::IntegerRatio { ratio });
    }
    if !(ratio.is_finite() && ratio > 1.0) {
        return Err(Error::InvalidPlan {
            f1: ratio * base_rate,
            f2: base_rate,
        });
    }
    DualRatePlan::new(ratio * base_rate, base_rate)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AliasVerdict {
    pub aliased: bool,
    pub discrepancy: f64,
    /// The slow stream's band `(0, f2 / 2)` in Hz.
    pub compared_band: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// Discrepancy above which the pair is declared aliased.
    pub threshold: f64,
    /// Per-sample amplitude treated as noise. Bins of an N-point PSD below
    /// `noise_floor^2 * sum(w^2)` over the taper `w` (the expected power of
    /// white noise with this RMS)
    /// are dropped before comparison. Zero disables denoising.
    pub noise_floor: f64,
    /// Taper applied to both streams before transforming. Hann keeps the
    /// leakage of tones that do not complete whole periods in the window
    /// local, so the two spectra can be compared bin by bin.
    pub window: Window,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            threshold: 0.1,
            noise_floor: 0.0,
            window: Window::Hann,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(Error::InvalidThreshold {
                threshold: self.threshold,
            });
        }
        if !(self.noise_floor.is_finite() && self.noise_floor >= 0.0) {
            return Err(Error::InvalidThreshold {
                threshold: self.noise_floor,
            });
        }
        Ok(())
    }
}

/// Zeroes every bin whose PSD is below `amplitude_threshold^2`.
pub fn denoise_spectrum(s: &Spectrum, amplitude_threshold: f64) -> Result<Spectrum> {
    if !(amplitude_threshold.is_finite() && amplitude_threshold >= 0.0) {
        return Err(Error::InvalidThreshold {
            threshold: amplitude_threshold,
        });
    }
    Ok(s.zero_below(amplitude_threshold * amplitude_threshold))
}

/// Where a tone at `frequency` lands when sampled at `rate`:
/// the smallest `|frequency - k * rate|` over integers `k`.
pub fn alias_frequency(frequency: f64, rate: f64) -> f64 {
    let k = libm::round(frequency / rate);
    libm::fabs(frequency - k * rate)
}

/// Compares the spectra of `s1` (at `plan.f1`) and `s2` (at `plan.f2`).
///
/// Both series are first trimmed to a common span so their transforms share
/// one frequency grid (when the rate ratio is a simple fraction). Each is
/// then mean-removed, tapered and transformed; after denoising, its one-sided
/// bin energies are normalized to unit total. Below f2/2 the fast spectrum is
/// read at the slow stream's bin frequencies (interpolating linearly if the
/// grids differ); above f2/2 the slow stream has no bins, so the fast
/// stream's energy there counts against it in full. The discrepancy is the
/// L2 distance between the square roots of the two normalized energy
/// profiles, so it lies in `[0, sqrt 2]`. Comparing magnitudes rather than
/// raw energies keeps a folded tone visible even when it carries a modest
/// share of the total.
pub fn detect_aliasing(
    s1: &UniformSeries,
    s2: &UniformSeries,
    plan: &DualRatePlan,
    config: &DetectorConfig,
) -> Result<AliasVerdict> {
    config.validate()?;
    check_rate(plan.f1, s1.rate())?;
    check_rate(plan.f2, s2.rate())?;
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::EmptySeries);
    }
    let start_delta = libm::fabs(s1.start_time() - s2.start_time());
    let duration_ratio = s1.duration() / s2.duration();
    // Up to one slow sample interval of disagreement, or 1% of the span,
    // comes from rounding each stream to whole samples.
    let slack = (1.0 / plan.f2).max(0.01 * s2.duration()) * (1.0 + 1e-9);
    if start_delta > slack || libm::fabs(s1.duration() - s2.duration()) > slack {
        return Err(Error::WindowMismatch {
            start_delta,
            duration_ratio,
        });
    }

    let (n1, n2) = common_span(s1.len(), s2.len(), plan.ratio()).unwrap_or((s1.len(), s2.len()));
    let fast = normalized_profile(&s1.values()[..n1], s1.rate(), config)?;
    let slow = normalized_profile(&s2.values()[..n2], s2.rate(), config)?;
    let fast_width = s1.rate() / n1 as f64;
    let slow_width = s2.rate() / n2 as f64;

    // An even-length slow stream has a bin exactly at f2/2 where a tone's
    // tapered lobe meets its own mirror image; the fast stream has no such
    // bin, so it is left out.
    let end = if n2 % 2 == 0 { slow.len() - 1 } else { slow.len() };
    let mut sum = 0.0;
    for (j, b) in slow.iter().enumerate().take(end).skip(1) {
        let mut x = j as f64 * slow_width / fast_width;
        if libm::fabs(x - libm::round(x)) < 1e-9 {
            x = libm::round(x);
        }
        let a = interpolate(&fast, x);
        let d = libm::sqrt(a) - libm::sqrt(*b);
        sum += d * d;
    }
    // Above f2/2 the slow stream has nothing to show, so whatever the fast
    // stream holds there is mismatch. Bins within a main-lobe width of the
    // edge are skipped: a tapered tone just below f2/2 spills into them.
    let edge = plan.f2 / 2.0 + EDGE_GUARD_BINS * fast_width.max(slow_width);
    let first_above = libm::ceil(edge / fast_width + 1e-9) as usize;
    sum += fast.iter().skip(first_above).sum::<f64>();
    let discrepancy = libm::sqrt(sum);
    Ok(AliasVerdict {
        aliased: discrepancy > config.threshold,
        discrepancy,
        compared_band: (0.0, plan.f2 / 2.0),
    })
}

// Half the main-lobe width of the Hann taper, in bins.
const EDGE_GUARD_BINS: f64 = 2.0;

/// Sample counts `(n1, n2)` no larger than the inputs with `n1 / f1 == n2 / f2`
/// exactly, so both transforms share one frequency grid. Needs the rate ratio
/// to be a fraction `p / q` with a small denominator.
fn common_span(len1: usize, len2: usize, ratio: f64) -> Option<(usize, usize)> {
    const MAX_DENOMINATOR: usize = 64;
    let q = (1..=MAX_DENOMINATOR).find(|&q| {
        let pq = ratio * q as f64;
        libm::fabs(pq - libm::round(pq)) <= 1e-9 * pq
    })?;
    let p = libm::round(ratio * q as f64) as usize;
    let k = (len2 / q).min(len1 / p);
    let (n1, n2) = (k * p, k * q);
    (n2 >= 8 && 2 * n2 >= len2).then_some((n1, n2))
}

fn check_rate(expected: f64, actual: f64) -> Result<()> {
    if libm::fabs(expected - actual) > 1e-9 * expected {
        return Err(Error::RateMismatch { expected, actual });
    }
    Ok(())
}

// One-sided bin energies (index = bin, 0 kept at zero) summing to 1, or all
// zero when nothing survives denoising.
fn normalized_profile(values: &[f64], rate: f64, config: &DetectorConfig) -> Result<Vec<f64>> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let taper = config.window.coefficients(n);
    let centered: Vec<f64> = values
        .iter()
        .zip(&taper)
        .map(|(v, w)| (v - mean) * w)
        .collect();
    let spectrum = spectrum_of(&centered, rate)?;
    let power: f64 = taper.iter().map(|w| w * w).sum();
    let spectrum = denoise_spectrum(&spectrum, config.noise_floor * libm::sqrt(power))?;
    let mut folded = spectrum.one_sided();
    folded[0] = 0.0;
    let total: f64 = folded.iter().sum();
    if total > 0.0 {
        for e in &mut folded {
            *e /= total;
        }
    }
    Ok(folded)
}

// Linear interpolation at fractional index `x`; zero past the last bin.
fn interpolate(profile: &[f64], x: f64) -> f64 {
    let last = profile.len() - 1;
    if x >= last as f64 {
        return if x - last as f64 <= 1e-9 { profile[last] } else { 0.0 };
    }
    let i = libm::floor(x) as usize;
    let frac = x - i as f64;
    profile[i] * (1.0 - frac) + profile[i + 1] * frac
}
