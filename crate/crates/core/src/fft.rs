//! Complex FFT of any length.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley-Tukey transform;
//! every other length goes through Bluestein's chirp-z identity, which turns
//! an N-point DFT into a circular convolution of power-of-two size >= 2N-1.
//!
//! Forward: `X[k] = sum_n x[n] exp(-2 pi i k n / N)`. The inverse is left
//! unnormalized; callers divide by N.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

fn cis(angle: f64) -> Complex64 {
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// In-place forward transform.
pub fn forward(buf: &mut [Complex64]) {
    transform(buf, Direction::Forward);
}

/// In-place inverse transform without the 1/N factor.
pub fn inverse_unnormalized(buf: &mut [Complex64]) {
    transform(buf, Direction::Inverse);
}

pub fn transform(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf, dir);
    } else {
        bluestein(buf, dir);
    }
}

fn radix2(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }

    // Each twiddle is evaluated directly rather than by repeated
    // multiplication, which keeps round-off flat in N.
    let sign = dir.sign();
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| cis(sign * 2.0 * PI * k as f64 / n as f64))
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                let t = *b * twiddles[k * stride];
                *b = *a - t;
                *a += t;
            }
        }
        len <<= 1;
    }
}

fn bluestein(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    let m = (2 * n - 1).next_power_of_two();
    let sign = dir.sign();

    // chirp[k] = exp(sign * i pi k^2 / n); k^2 is reduced mod 2n first so the
    // angle stays small and exact for large k.
    let modulus = 2 * n as u64;
    let chirp: Vec<Complex64> = (0..n as u64)
        .map(|k| {
            let k2 = (k * k) % modulus;
            cis(sign * PI * k2 as f64 / n as f64)
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for ((slot, x), c) in a.iter_mut().zip(buf.iter()).zip(&chirp) {
        *slot = x * c;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        let c = chirp[k].conj();
        b[k] = c;
        b[m - k] = c;
    }

    radix2(&mut a, Direction::Forward);
    radix2(&mut b, Direction::Forward);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    radix2(&mut a, Direction::Inverse);

    let scale = 1.0 / m as f64;
    for ((out, conv), c) in buf.iter_mut().zip(&a).zip(&chirp) {
        *out = conv * c * scale;
    }
}
