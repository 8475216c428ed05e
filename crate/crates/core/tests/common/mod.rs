//! Reference computations shared by the integration tests. Nothing here calls
//! into the transform code under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Direct O(N^2) power spectrum with an exact twiddle table.
pub fn naive_psd(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let table: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = -2.0 * PI * k as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, v) in x.iter().enumerate() {
                let (c, s) = table[(j * k) % n];
                re += v * c;
                im += v * s;
            }
            re * re + im * im
        })
        .collect()
}

/// One-sided folding of a two-sided PSD onto bins 0..=N/2.
pub fn fold(psd: &[f64]) -> Vec<f64> {
    let n = psd.len();
    (0..=n / 2)
        .map(|j| {
            if j == 0 || 2 * j == n {
                psd[j]
            } else {
                psd[j] + psd[n - j]
            }
        })
        .collect()
}

/// Where a tone at `f` shows up when sampled at `fs`.
pub fn folded_frequency(f: f64, fs: f64) -> f64 {
    let k = (f / fs).round();
    (f - k * fs).abs()
}

pub fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

/// Sum of sines evaluated directly, `n` samples at `rate`.
pub fn sines(rate: f64, n: usize, comps: &[(f64, f64, f64)]) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / rate;
            comps
                .iter()
                .map(|&(f, a, p)| a * (2.0 * PI * f * t + p).sin())
                .sum()
        })
        .collect()
}
