//! Deterministic synthetic signals with known spectra.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sampler::SignalSource;
use crate::series::UniformSeries;
use crate::{Error, Result};

/// `amplitude * sin(2 pi frequency t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    pub frequency: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl Component {
    pub const fn new(frequency: f64, amplitude: f64, phase: f64) -> Self {
        Self {
            frequency,
            amplitude,
            phase,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        self.amplitude * libm::sin(2.0 * PI * self.frequency * t + self.phase)
    }
}

/// From `time` on, `components` replace whatever set was active before.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeEvent {
    pub time: f64,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignalSpec {
    pub components: Vec<Component>,
    pub offset: f64,
    /// Linear drift per second.
    pub trend: f64,
    /// Half-width of the uniform noise added to every query.
    pub noise_amplitude: f64,
    /// Sorted by time.
    pub change_events: Vec<ChangeEvent>,
    pub seed: u64,
}

/// Sampling interval of the temperature-like preset (one reading per 5 minutes).
pub const TEMPERATURE_RATE: f64 = 1.0 / 300.0;
/// Quantization step of the temperature-like preset, in degrees.
pub const TEMPERATURE_QUANTUM: f64 = 1.0;

impl SignalSpec {
    pub fn new(components: Vec<Component>) -> Self {
        Self {
            components,
            ..Self::default()
        }
    }

    /// Two unit sines at 400 and 440 Hz.
    pub fn fig3() -> Self {
        Self::new(alloc::vec![
            Component::new(400.0, 1.0, 0.0),
            Component::new(440.0, 1.0, 0.0),
        ])
    }

    /// A slow temperature-like signal for 5-minute sampling: a 45 degree
    /// offset with cosines at a quarter and a sixth of the sampling rate,
    /// plus noise well under half a degree. On the 5-minute grid the clean
    /// signal takes integer values, so a 1-degree quantizer returns it
    /// exactly and the quantized trace stays band-limited.
    pub fn temperature_like(seed: u64) -> Self {
        Self {
            components: alloc::vec![
                Component::new(TEMPERATURE_RATE / 4.0, 1.0, PI / 2.0),
                Component::new(TEMPERATURE_RATE / 6.0, 2.0, PI / 2.0),
            ],
            offset: 45.0,
            noise_amplitude: 0.2,
            seed,
            ..Self::default()
        }
    }

    pub fn with_noise(mut self, amplitude: f64, seed: u64) -> Self {
        self.noise_amplitude = amplitude;
        self.seed = seed;
        self
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_change(mut self, time: f64, components: Vec<Component>) -> Self {
        self.change_events.push(ChangeEvent { time, components });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let sets = core::iter::once(&self.components)
            .chain(self.change_events.iter().map(|e| &e.components));
        for set in sets {
            for c in set {
                if !(c.frequency.is_finite() && c.frequency >= 0.0) {
                    return Err(violation(format!("component frequency {}", c.frequency)));
                }
                if !(c.amplitude.is_finite() && c.amplitude >= 0.0) {
                    return Err(violation(format!("component amplitude {}", c.amplitude)));
                }
                if !c.phase.is_finite() {
                    return Err(violation(format!("component phase {}", c.phase)));
                }
            }
        }
        for (name, v) in [("offset", self.offset), ("trend", self.trend)] {
            if !v.is_finite() {
                return Err(violation(format!("{name} {v}")));
            }
        }
        if !(self.noise_amplitude.is_finite() && self.noise_amplitude >= 0.0) {
            return Err(violation(format!("noise amplitude {}", self.noise_amplitude)));
        }
        if self.change_events.iter().any(|e| !e.time.is_finite()) {
            return Err(violation("change event time must be finite".into()));
        }
        if self.change_events.windows(2).any(|w| w[0].time > w[1].time) {
            return Err(violation("change events must be sorted by time".into()));
        }
        Ok(())
    }

    /// The component set in force at `t`.
    pub fn active_components(&self, t: f64) -> &[Component] {
        self.change_events
            .iter()
            .rev()
            .find(|e| e.time <= t)
            .map_or(&self.components[..], |e| &e.components[..])
    }

    pub fn query(&self, t: f64) -> f64 {
        let mut v = self.offset + self.trend * t;
        for c in self.active_components(t) {
            v += c.eval(t);
        }
        if self.noise_amplitude > 0.0 {
            v += self.noise_at(t);
        }
        v
    }

    // One ChaCha stream per timestamp keeps noise a pure function of (seed, t).
    fn noise_at(&self, t: f64) -> f64 {
        let t = if t == 0.0 { 0.0 } else { t };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t.to_bits());
        let a = self.noise_amplitude;
        rng.random_range(-a..=a)
    }

    /// `round(duration * rate)` samples from t = 0, at least one.
    pub fn generate(&self, rate: f64, duration: f64) -> Result<UniformSeries> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(violation(format!("duration {duration}")));
        }
        let n = (libm::round(duration * rate) as usize).max(1);
        self.generate_at(0.0, rate, n)
    }

    /// `n` samples at `start + i / rate`.
    pub fn generate_at(&self, start: f64, rate: f64, n: usize) -> Result<UniformSeries> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidRate { rate });
        }
        let values = (0..n)
            .map(|i| self.query(start + i as f64 / rate))
            .collect();
        UniformSeries::new("", "", start, rate, values)
    }

    /// Twice the highest frequency across every component set.
    pub fn true_nyquist(&self) -> f64 {
        let sets = core::iter::once(&self.components[..])
            .chain(self.change_events.iter().map(|e| &e.components[..]));
        sets.map(max_rate_of).fold(0.0, f64::max)
    }

    pub fn true_nyquist_at(&self, t: f64) -> f64 {
        max_rate_of(self.active_components(t))
    }

    /// Highest Nyquist rate in force anywhere in `[t0, t1)`.
    pub fn true_nyquist_over(&self, t0: f64, t1: f64) -> f64 {
        let inner = self
            .change_events
            .iter()
            .filter(|e| e.time > t0 && e.time < t1)
            .map(|e| max_rate_of(&e.components));
        inner.fold(self.true_nyquist_at(t0), f64::max)
    }
}

fn max_rate_of(components: &[Component]) -> f64 {
    components
        .iter()
        .filter(|c| c.amplitude > 0.0)
        .map(|c| 2.0 * c.frequency)
        .fold(0.0, f64::max)
}

fn violation(msg: alloc::string::String) -> Error {
    Error::ConfigViolation(msg)
}

impl SignalSource for SignalSpec {
    fn query(&self, t: f64) -> f64 {
        SignalSpec::query(self, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{quantize, QuantizationSpec};
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn query_examples() {
        let one = SignalSpec::new(vec![Component::new(1.0, 1.0, 0.0)]);
        assert!((one.query(0.25) - 1.0).abs() < 1e-15);
        let dc = SignalSpec::default().with_offset(5.0);
        assert_eq!(dc.query(0.0), 5.0);
        assert_eq!(dc.query(1234.5), 5.0);
        assert_eq!(SignalSpec::fig3().query(0.0), 0.0);
    }

    #[test]
    fn trend_and_change_events() {
        let spec = SignalSpec {
            trend: 2.0,
            ..SignalSpec::new(vec![Component::new(10.0, 1.0, 0.0)])
        }
        .with_change(5.0, vec![Component::new(50.0, 1.0, 0.0)]);
        assert!((spec.query(0.0)).abs() < 1e-15);
        assert!((spec.query(1.0) - 2.0).abs() < 1e-12);
        assert_eq!(spec.true_nyquist_at(4.9), 20.0);
        assert_eq!(spec.true_nyquist_at(5.0), 100.0);
        assert_eq!(spec.true_nyquist_over(0.0, 5.0), 20.0);
        assert_eq!(spec.true_nyquist_over(0.0, 5.1), 100.0);
        assert_eq!(spec.true_nyquist(), 100.0);
    }

    #[test]
    fn true_nyquist_examples() {
        assert_eq!(SignalSpec::fig3().true_nyquist(), 880.0);
        assert_eq!(SignalSpec::default().with_offset(3.0).true_nyquist(), 0.0);
        let silent = SignalSpec::new(vec![Component::new(9.0, 0.0, 0.0)]);
        assert_eq!(silent.true_nyquist(), 0.0);
    }

    #[test]
    fn generate_length_and_grid() {
        let spec = SignalSpec::fig3();
        let us = spec.generate(890.0, 1.0).unwrap();
        assert_eq!(us.len(), 890);
        for i in [0usize, 1, 17, 889] {
            assert_eq!(us.values()[i], spec.query(i as f64 / 890.0));
        }
        assert_eq!(spec.generate(10.0, 0.01).unwrap().len(), 1);
        assert!(spec.generate(10.0, 0.0).is_err());
        assert!(spec.generate(0.0, 1.0).is_err());
    }

    #[test]
    fn noise_is_bounded_and_reproducible() {
        let spec = SignalSpec::default().with_noise(0.5, 42);
        let a = spec.generate(10.0, 100.0).unwrap();
        let b = spec.generate(10.0, 100.0).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|v| v.abs() <= 0.5));
        let mean = a.values().iter().sum::<f64>() / a.len() as f64;
        assert!(mean.abs() < 0.05);
        let other = SignalSpec::default().with_noise(0.5, 43).generate(10.0, 100.0).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn temperature_preset_quantizes_to_clean_signal() {
        let spec = SignalSpec::temperature_like(7);
        let clean = SignalSpec {
            noise_amplitude: 0.0,
            ..spec.clone()
        };
        let q = QuantizationSpec::new(TEMPERATURE_QUANTUM).unwrap();
        let noisy = quantize(&spec.generate(TEMPERATURE_RATE, 86400.0).unwrap(), &q);
        let exact = clean.generate(TEMPERATURE_RATE, 86400.0).unwrap();
        for (a, b) in noisy.values().iter().zip(exact.values()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(spec.true_nyquist() <= 2.0 * 1e-3);
    }

    #[test]
    fn validation() {
        assert!(SignalSpec::fig3().validate().is_ok());
        let bad = SignalSpec::new(vec![Component::new(-1.0, 1.0, 0.0)]);
        assert!(bad.validate().is_err());
        let unsorted = SignalSpec::default()
            .with_change(5.0, vec![])
            .with_change(1.0, vec![]);
        assert!(unsorted.validate().is_err());
    }

    proptest! {
        #[test]
        fn generate_matches_query(f in 0.0f64..50.0, a in 0.0f64..10.0, p in 0.0f64..6.3,
                                  rate in 1.0f64..500.0, seed in any::<u64>()) {
            let spec = SignalSpec::new(vec![Component::new(f, a, p)]).with_noise(0.1, seed);
            let us = spec.generate(rate, 2.0).unwrap();
            for (i, v) in us.values().iter().enumerate() {
                prop_assert_eq!(*v, spec.query(i as f64 / rate));
            }
        }
    }
}
