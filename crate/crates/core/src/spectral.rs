//! Fourier analysis of uniform series: spectra, Nyquist-rate estimation
//! and ideal low-pass reconstruction.
//!
//! Bin `j` of an N-point spectrum sits at `j * fs / N` and its power is
//! `|X[j]|^2` with the unnormalized forward transform, so
//! `sum |x|^2 = (1/N) * sum psd`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft;
use crate::series::{quantize, QuantizationSpec, UniformSeries};
use crate::{Error, Result};

/// Estimated Nyquist rate of a series, or the marker that the series looks
/// under-sampled already. Exports encode `Aliased` as `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NyquistEstimate {
    Rate(f64),
    Aliased,
}

impl NyquistEstimate {
    pub const ALIASED_SENTINEL: f64 = -1.0;

    pub fn rate(&self) -> Option<f64> {
        match *self {
            NyquistEstimate::Rate(r) => Some(r),
            NyquistEstimate::Aliased => None,
        }
    }

    pub fn is_aliased(&self) -> bool {
        matches!(self, NyquistEstimate::Aliased)
    }

    /// The rate in Hz, or `-1` when aliased.
    pub fn to_sentinel(&self) -> f64 {
        self.rate().unwrap_or(Self::ALIASED_SENTINEL)
    }

    pub fn from_sentinel(value: f64) -> Self {
        if value < 0.0 {
            NyquistEstimate::Aliased
        } else {
            NyquistEstimate::Rate(value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    /// Periodic Hann taper, `0.5 * (1 - cos(2 pi i / n))`.
    Hann,
}

impl Window {
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => alloc::vec![1.0; n],
            Window::Hann => (0..n)
                .map(|i| 0.5 * (1.0 - libm::cos(2.0 * PI * i as f64 / n as f64)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Share of the mean-removed energy the reported band must hold.
    pub energy_fraction: f64,
    pub window: Window,
    /// Spectral flatness (geometric over arithmetic mean of the one-sided bin
    /// energies) at or above which the spectrum counts as spread over the
    /// whole band, so every bin is effectively needed and the estimate is
    /// `Aliased` whatever the energy fraction. White noise sits near 0.56, a
    /// perfectly flat spectrum at 1, anything with empty bins near 0. `None`
    /// keeps only the strict "cutoff is the top bin" rule.
    pub flatness_threshold: Option<f64>,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            energy_fraction: 0.99,
            window: Window::Rectangular,
            flatness_threshold: Some(0.25),
        }
    }
}

impl EstimateOptions {
    pub fn with_fraction(energy_fraction: f64) -> Self {
        Self {
            energy_fraction,
            ..Self::default()
        }
    }
}

/// Per-bin power of a series, optionally with the complex coefficients it
/// came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    sampling_rate: f64,
    psd: Vec<f64>,
    coefficients: Option<Vec<Complex64>>,
}

impl Spectrum {
    pub fn from_coefficients(sampling_rate: f64, coefficients: Vec<Complex64>) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::InvalidRate {
                rate: sampling_rate,
            });
        }
        if coefficients.is_empty() {
            return Err(Error::EmptySeries);
        }
        let psd = coefficients.iter().map(|c| c.norm_sqr()).collect();
        Ok(Self {
            sampling_rate,
            psd,
            coefficients: Some(coefficients),
        })
    }

    /// A power-only spectrum. It can be analyzed but not inverted.
    pub fn from_psd(sampling_rate: f64, psd: Vec<f64>) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::InvalidRate {
                rate: sampling_rate,
            });
        }
        if psd.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = psd.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::NonFinite { what: "psd", index });
        }
        Ok(Self {
            sampling_rate,
            psd,
            coefficients: None,
        })
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn bin_count(&self) -> usize {
        self.psd.len()
    }

    pub fn bin_width(&self) -> f64 {
        self.sampling_rate / self.psd.len() as f64
    }

    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width()
    }

    pub fn psd(&self) -> &[f64] {
        &self.psd
    }

    pub fn coefficients(&self) -> Option<&[Complex64]> {
        self.coefficients.as_deref()
    }

    /// Power folded onto bins `0..=N/2`: each positive bin absorbs its
    /// conjugate mirror; DC and (for even N) the Nyquist bin stand alone.
    pub fn one_sided(&self) -> Vec<f64> {
        let n = self.psd.len();
        (0..=n / 2)
            .map(|j| {
                let mirror = n - j;
                if j == 0 || mirror == j {
                    self.psd[j]
                } else {
                    self.psd[j] + self.psd[mirror]
                }
            })
            .collect()
    }

    /// Zeroes the bins whose power falls below `floor` (coefficients too).
    pub(crate) fn zero_below(&self, floor: f64) -> Spectrum {
        let keep: Vec<bool> = self.psd.iter().map(|&p| p >= floor).collect();
        let psd = self
            .psd
            .iter()
            .zip(&keep)
            .map(|(&p, &k)| if k { p } else { 0.0 })
            .collect();
        let coefficients = self.coefficients.as_ref().map(|cs| {
            cs.iter()
                .zip(&keep)
                .map(|(&c, &k)| if k { c } else { Complex64::new(0.0, 0.0) })
                .collect()
        });
        Spectrum {
            sampling_rate: self.sampling_rate,
            psd,
            coefficients,
        }
    }
}

/// Discrete Fourier transform of the series values.
pub fn dft(us: &UniformSeries) -> Result<Spectrum> {
    spectrum_of(us.values(), us.rate())
}

pub(crate) fn spectrum_of(values: &[f64], rate: f64) -> Result<Spectrum> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&mut buf);
    Spectrum::from_coefficients(rate, buf)
}

/// Inverse transform back to an unlabeled series starting at t = 0.
/// Imaginary residue is dropped.
pub fn inverse_dft(s: &Spectrum) -> Result<UniformSeries> {
    let coeffs = s.coefficients().ok_or(Error::MissingCoefficients)?;
    let n = coeffs.len() as f64;
    let mut buf = coeffs.to_vec();
    fft::inverse_unnormalized(&mut buf);
    UniformSeries::from_values(s.sampling_rate(), buf.iter().map(|c| c.re / n).collect())
}

/// Sum of the PSD, optionally without bin 0.
pub fn total_energy(s: &Spectrum, exclude_dc: bool) -> f64 {
    let skip = usize::from(exclude_dc);
    s.psd().iter().skip(skip).sum()
}

const MIN_ESTIMATE_SAMPLES: usize = 8;
const NOISE_FLOOR: f64 = 1e-12;

/// Nyquist rate from the cumulative power spectrum.
///
/// The mean is removed, the spectrum is folded one-sided over bins
/// `1..=N/2`, and the lowest bin `j` whose cumulative power reaches
/// `energy_fraction` of the total gives `Rate(2 * j * fs / N)`. When that bin
/// is the top one, or the spectrum is flat across the band (see
/// [`EstimateOptions::flatness_threshold`]), the series is reported `Aliased`.
pub fn estimate_nyquist(us: &UniformSeries, opts: &EstimateOptions) -> Result<NyquistEstimate> {
    estimate_from_values(us.values(), us.rate(), opts)
}

pub(crate) fn estimate_from_values(
    values: &[f64],
    rate: f64,
    opts: &EstimateOptions,
) -> Result<NyquistEstimate> {
    let n = values.len();
    if n < MIN_ESTIMATE_SAMPLES {
        return Err(Error::TooShort {
            len: n,
            min: MIN_ESTIMATE_SAMPLES,
        });
    }
    let fraction = opts.energy_fraction;
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidEnergyFraction { fraction });
    }

    let mean = values.iter().sum::<f64>() / n as f64;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    let centered: Vec<f64> = values
        .iter()
        .zip(opts.window.coefficients(n))
        .map(|(v, w)| (v - mean) * w)
        .collect();
    let spectrum = spectrum_of(&centered, rate)?;
    let folded = spectrum.one_sided();
    let top = folded.len() - 1;
    let total: f64 = folded[1..].iter().sum();
    if total <= NOISE_FLOOR * n as f64 * peak * peak {
        return Err(Error::DegenerateSignal);
    }

    let goal = fraction * total;
    let mut cumulative = 0.0;
    let mut cutoff = top;
    for (j, e) in folded.iter().enumerate().skip(1) {
        cumulative += e;
        if cumulative >= goal {
            cutoff = j;
            break;
        }
    }

    if cutoff == top {
        return Ok(NyquistEstimate::Aliased);
    }
    if let Some(threshold) = opts.flatness_threshold {
        if spectral_flatness(&folded[1..]) >= threshold {
            return Ok(NyquistEstimate::Aliased);
        }
    }
    Ok(NyquistEstimate::Rate(2.0 * cutoff as f64 * rate / n as f64))
}

/// Geometric mean over arithmetic mean; 0 when any bin is empty.
pub fn spectral_flatness(energies: &[f64]) -> f64 {
    if energies.is_empty() {
        return 0.0;
    }
    let m = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / m;
    if mean <= 0.0 {
        return 0.0;
    }
    let mean_log = energies.iter().map(|&e| libm::log(e / mean)).sum::<f64>() / m;
    libm::exp(mean_log)
}

/// Ideal low-pass filter plus band-limited upsampling.
///
/// Bins above `cutoff` are zeroed, the spectrum is zero-padded to
/// `round(N * target_rate / rate)` bins and inverted; amplitudes are
/// preserved. An even-length input's Nyquist bin is split evenly between the
/// two matching bins of the longer spectrum.
pub fn low_pass_reconstruct(
    us: &UniformSeries,
    cutoff: f64,
    target_rate: f64,
) -> Result<UniformSeries> {
    let rate = us.rate();
    let nyquist = rate / 2.0;
    if !(cutoff.is_finite() && cutoff >= 0.0 && cutoff <= nyquist * (1.0 + 1e-12)) {
        return Err(Error::InvalidCutoff {
            cutoff,
            max: nyquist,
        });
    }
    if !(target_rate.is_finite() && target_rate >= rate * (1.0 - 1e-12)) {
        return Err(Error::InvalidTargetRate {
            target: target_rate,
            rate,
        });
    }
    let spectrum = dft(us)?;
    let coeffs = spectrum.coefficients().ok_or(Error::MissingCoefficients)?;
    let n = coeffs.len();
    let out_len = (libm::round(n as f64 * target_rate / rate) as usize).max(n);

    let bin_width = rate / n as f64;
    let limit = cutoff + 1e-9 * bin_width;
    let mut padded = vec![Complex64::new(0.0, 0.0); out_len];
    for (j, &c) in coeffs.iter().enumerate() {
        let signed = if 2 * j <= n { j as isize } else { j as isize - n as isize };
        if signed.unsigned_abs() as f64 * bin_width > limit {
            continue;
        }
        if n % 2 == 0 && j == n / 2 && out_len > n {
            padded[j] += c * 0.5;
            padded[out_len - j] += c * 0.5;
        } else if signed >= 0 {
            padded[j] += c;
        } else {
            padded[out_len - signed.unsigned_abs()] += c;
        }
    }
    fft::inverse_unnormalized(&mut padded);
    let scale = 1.0 / n as f64;
    let values = padded.iter().map(|c| c.re * scale).collect();
    us.with_values(target_rate, values)
}

/// [`low_pass_reconstruct`] followed by the measurement path's quantization.
pub fn reconstruct_with_quantization(
    us: &UniformSeries,
    cutoff: f64,
    target_rate: f64,
    q: &QuantizationSpec,
) -> Result<UniformSeries> {
    let smooth = low_pass_reconstruct(us, cutoff, target_rate)?;
    Ok(quantize(&smooth, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Direct O(N^2) evaluation, independent of the fft module.
    fn naive_psd(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let (mut re, mut im) = (0.0, 0.0);
                for (j, v) in x.iter().enumerate() {
                    let a = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    re += v * libm::cos(a);
                    im += v * libm::sin(a);
                }
                re * re + im * im
            })
            .collect()
    }

    fn sines(rate: f64, n: usize, comps: &[(f64, f64, f64)]) -> UniformSeries {
        let values = (0..n)
            .map(|i| {
                let t = i as f64 / rate;
                comps
                    .iter()
                    .map(|&(f, a, p)| a * libm::sin(2.0 * PI * f * t + p))
                    .sum()
            })
            .collect();
        UniformSeries::from_values(rate, values).unwrap()
    }

    fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        let den: f64 = b.iter().map(|y| y * y).sum();
        libm::sqrt(num / den)
    }

    #[test]
    fn constant_series_is_all_dc() {
        let s = dft(&UniformSeries::from_values(1.0, vec![3.0; 4]).unwrap()).unwrap();
        assert!((s.psd()[0] - 144.0).abs() < 1e-9);
        for p in &s.psd()[1..] {
            assert!(*p < 1e-18 * 9.0);
        }
    }

    #[test]
    fn bin_aligned_sinusoid_has_two_bins() {
        let (n, k) = (64, 5);
        let us = sines(64.0, n, &[(k as f64, 1.0, 0.3)]);
        let s = dft(&us).unwrap();
        let oracle = naive_psd(us.values());
        let peak = s.psd()[k];
        for (j, (p, o)) in s.psd().iter().zip(&oracle).enumerate() {
            assert!((p - o).abs() < 1e-9 * peak);
            if j != k && j != n - k {
                assert!(*p < 1e-12 * peak, "bin {j}");
            }
        }
        assert!((s.frequency(k) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [8, 13, 100, 1024] {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let us = UniformSeries::from_values(2.0, x.clone()).unwrap();
            let s = dft(&us).unwrap();
            let time: f64 = x.iter().map(|v| v * v).sum();
            let freq = total_energy(&s, false) / n as f64;
            assert!((time - freq).abs() <= 1e-9 * time);
            let back = inverse_dft(&s).unwrap();
            assert!(rel_l2(back.values(), &x) < 1e-9);
        }
    }

    #[test]
    fn inverse_of_zero_and_conjugate_pair() {
        let zero = Spectrum::from_coefficients(1.0, vec![Complex64::new(0.0, 0.0); 6]).unwrap();
        assert!(inverse_dft(&zero).unwrap().values().iter().all(|v| *v == 0.0));

        // X[k] = -i N/2, X[N-k] = +i N/2 is sin(2 pi k n / N).
        let (n, k) = (16usize, 3usize);
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[k] = Complex64::new(0.0, -(n as f64) / 2.0);
        c[n - k] = Complex64::new(0.0, n as f64 / 2.0);
        let x = inverse_dft(&Spectrum::from_coefficients(16.0, c).unwrap()).unwrap();
        for (i, v) in x.values().iter().enumerate() {
            let want = libm::sin(2.0 * PI * (k * i) as f64 / n as f64);
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn psd_only_spectrum_cannot_be_inverted() {
        let s = Spectrum::from_psd(1.0, vec![4.0, 1.0, 1.0]).unwrap();
        assert_eq!(inverse_dft(&s).unwrap_err(), Error::MissingCoefficients);
        assert_eq!(total_energy(&s, false), 6.0);
        assert_eq!(total_energy(&s, true), 2.0);
        let zero = Spectrum::from_psd(1.0, vec![0.0; 5]).unwrap();
        assert_eq!(total_energy(&zero, false), 0.0);
        assert!(Spectrum::from_psd(1.0, vec![-1.0]).is_err());
    }

    #[test]
    fn dft_rejects_empty() {
        let us = UniformSeries::from_values(1.0, vec![]).unwrap();
        assert_eq!(dft(&us).unwrap_err(), Error::EmptySeries);
    }

    #[test]
    fn estimate_two_tones() {
        let us = sines(8000.0, 8000, &[(400.0, 1.0, 0.0), (440.0, 1.0, 0.0)]);
        let est = estimate_nyquist(&us, &EstimateOptions::default()).unwrap();
        let rate = est.rate().unwrap();
        assert!((rate - 880.0).abs() <= 1.0, "{rate}");
    }

    #[test]
    fn estimate_single_tone_at_twenty_times() {
        let f = 3.0;
        let us = sines(20.0 * f, 600, &[(f, 2.0, 1.0)]);
        let bin = us.rate() / us.len() as f64;
        let rate = estimate_nyquist(&us, &EstimateOptions::default())
            .unwrap()
            .rate()
            .unwrap();
        assert!((rate - 2.0 * f).abs() <= bin);
    }

    #[test]
    fn flat_spectrum_is_aliased() {
        // Unit magnitude, random phase, conjugate symmetric.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [64usize, 1000, 4096] {
            let mut c = vec![Complex64::new(0.0, 0.0); n];
            for j in 1..=n / 2 {
                let phase = if 2 * j == n { 0.0 } else { rng.random_range(0.0..2.0 * PI) };
                c[j] = Complex64::new(libm::cos(phase), libm::sin(phase));
                c[n - j] = c[j].conj();
            }
            let noise = inverse_dft(&Spectrum::from_coefficients(1.0, c).unwrap()).unwrap();
            let est = estimate_nyquist(&noise, &EstimateOptions::default()).unwrap();
            assert_eq!(est, NyquistEstimate::Aliased, "n={n}");
        }
    }

    #[test]
    fn top_bin_energy_is_aliased_without_flatness_test() {
        // cos(pi n): all energy in the Nyquist bin.
        let values: Vec<f64> = (0..32).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let us = UniformSeries::from_values(1.0, values).unwrap();
        let strict = EstimateOptions {
            flatness_threshold: None,
            ..EstimateOptions::default()
        };
        assert_eq!(estimate_nyquist(&us, &strict).unwrap(), NyquistEstimate::Aliased);
    }

    #[test]
    fn flatness_examples() {
        assert_eq!(spectral_flatness(&[2.0; 10]), 1.0);
        assert_eq!(spectral_flatness(&[1.0, 0.0, 1.0]), 0.0);
        assert!((spectral_flatness(&[1.0, 4.0]) - 0.8).abs() < 1e-15);
        assert_eq!(spectral_flatness(&[]), 0.0);
    }

    #[test]
    fn estimate_errors() {
        let short = UniformSeries::from_values(1.0, vec![1.0; 7]).unwrap();
        assert_eq!(
            estimate_nyquist(&short, &EstimateOptions::default()).unwrap_err(),
            Error::TooShort { len: 7, min: 8 }
        );
        let flat = UniformSeries::from_values(1.0, vec![300.0; 64]).unwrap();
        assert_eq!(
            estimate_nyquist(&flat, &EstimateOptions::default()).unwrap_err(),
            Error::DegenerateSignal
        );
        let us = sines(10.0, 100, &[(1.0, 1.0, 0.0)]);
        for bad in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(matches!(
                estimate_nyquist(&us, &EstimateOptions::with_fraction(bad)),
                Err(Error::InvalidEnergyFraction { .. })
            ));
        }
    }

    #[test]
    fn hann_window_option_still_finds_tone() {
        let us = sines(100.0, 1000, &[(7.0, 1.0, 0.0)]);
        let opts = EstimateOptions {
            window: Window::Hann,
            ..EstimateOptions::default()
        };
        let rate = estimate_nyquist(&us, &opts).unwrap().rate().unwrap();
        // Hann widens the main lobe to one extra bin either side.
        assert!((rate - 14.0).abs() <= 2.0 * 0.1 + 1e-9, "{rate}");
    }

    #[test]
    fn reconstruct_passes_band_limited_signal() {
        let us = sines(64.0, 128, &[(3.0, 1.0, 0.2), (10.0, 0.5, 1.0)]);
        let out = low_pass_reconstruct(&us, 32.0, 64.0).unwrap();
        assert!(rel_l2(out.values(), us.values()) < 1e-9);
    }

    #[test]
    fn reconstruct_removes_tone_above_cutoff() {
        let us = sines(8000.0, 8000, &[(400.0, 1.0, 0.0), (440.0, 1.0, 0.0)]);
        let out = low_pass_reconstruct(&us, 420.0, 8000.0).unwrap();
        let oracle = naive_psd(&out.values()[..8000]);
        let original = naive_psd(us.values());
        assert!(oracle[440] < 1e-9 * original[440]);
        assert!((oracle[400] - original[400]).abs() < 1e-6 * original[400]);
    }

    #[test]
    fn reconstruct_upsamples_to_target_rate() {
        let us = sines(20.0, 40, &[(3.0, 1.0, 0.4)]);
        let out = low_pass_reconstruct(&us, 10.0, 200.0).unwrap();
        assert_eq!(out.len(), 400);
        assert_eq!(out.rate(), 200.0);
        let direct = sines(200.0, 400, &[(3.0, 1.0, 0.4)]);
        assert!(rel_l2(out.values(), direct.values()) < 1e-9);
    }

    #[test]
    fn reconstruct_keeps_cosine_at_nyquist() {
        // A cosine exactly at fs/2 survives upsampling when the Nyquist bin is split.
        let us = UniformSeries::from_values(
            2.0,
            (0..16).map(|i| libm::cos(PI * i as f64)).collect(),
        )
        .unwrap();
        let out = low_pass_reconstruct(&us, 1.0, 8.0).unwrap();
        for (i, v) in out.values().iter().enumerate() {
            let t = i as f64 / 8.0;
            assert!((v - libm::cos(2.0 * PI * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruct_validates_arguments() {
        let us = sines(10.0, 20, &[(1.0, 1.0, 0.0)]);
        assert!(matches!(
            low_pass_reconstruct(&us, 6.0, 10.0),
            Err(Error::InvalidCutoff { .. })
        ));
        assert!(matches!(
            low_pass_reconstruct(&us, -1.0, 10.0),
            Err(Error::InvalidCutoff { .. })
        ));
        assert!(matches!(
            low_pass_reconstruct(&us, 5.0, 5.0),
            Err(Error::InvalidTargetRate { .. })
        ));
    }

    #[test]
    fn quantized_round_trip_snaps_to_original() {
        let q = QuantizationSpec::new(0.5).unwrap();
        let us = sines(32.0, 64, &[(2.0, 3.0, 0.1)]);
        let measured = quantize(&us, &q);
        // Reconstructing the smooth signal and re-quantizing recovers the
        // measurement wherever the residual stays under half a step.
        let back = reconstruct_with_quantization(&us, 16.0, 32.0, &q).unwrap();
        assert_eq!(back.values(), measured.values());
    }
}
