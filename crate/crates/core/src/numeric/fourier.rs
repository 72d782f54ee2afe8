//! Spectral operations on uniformly sampled periodic profiles.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

fn forward(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    buf
}

fn inverse_real(mut buf: Vec<Complex64>) -> Vec<f64> {
    let n = buf.len();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

/// First and second derivatives of a periodic sample vector on `[0, 2π)`.
///
/// The Nyquist mode is dropped from the first derivative and kept (as a
/// cosine) in the second.
pub fn derivatives(values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let spec = forward(values);
    let mut d1 = spec.clone();
    let mut d2 = spec;
    for k in 0..n {
        let w = wavenumber(k, n);
        let nyquist = n % 2 == 0 && k == n / 2;
        d1[k] = if nyquist { Complex64::new(0.0, 0.0) } else { d1[k] * Complex64::new(0.0, w) };
        d2[k] *= -w * w;
    }
    (inverse_real(d1), inverse_real(d2))
}

/// Apply the real Fourier multiplier `symbol(|k|)` to a periodic sample vector.
pub fn apply_multiplier(values: &[f64], symbol: impl Fn(f64) -> f64) -> Vec<f64> {
    let n = values.len();
    let mut spec = forward(values);
    for (k, c) in spec.iter_mut().enumerate() {
        *c *= symbol(wavenumber(k, n).abs());
    }
    inverse_real(spec)
}

/// Trigonometric interpolation onto `m >= n` uniform samples (zero padding).
pub fn upsample(values: &[f64], m: usize) -> Vec<f64> {
    let n = values.len();
    assert!(m >= n);
    if m == n {
        return values.to_vec();
    }
    let spec = forward(values);
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    let half = n / 2;
    for k in 0..n {
        let w = wavenumber(k, n);
        if n % 2 == 0 && k == half {
            // split the Nyquist coefficient symmetrically
            padded[half] += spec[k] * 0.5;
            padded[m - half] += spec[k] * 0.5;
        } else if w >= 0.0 {
            padded[k] += spec[k];
        } else {
            padded[m - (n - k)] += spec[k];
        }
    }
    inverse_real(padded)
        .into_iter()
        .map(|v| v * m as f64 / n as f64)
        .collect()
}

/// Evaluate the trigonometric interpolant of `values` at angle `theta`.
pub fn evaluate(values: &[f64], theta: f64) -> f64 {
    let n = values.len();
    let spec = forward(values);
    let mut acc = 0.0;
    for (k, c) in spec.iter().enumerate() {
        let w = wavenumber(k, n);
        let weight = if n % 2 == 0 && k == n / 2 { 0.5 } else { 1.0 };
        if n % 2 == 0 && k == n / 2 {
            acc += weight * 2.0 * (c.re * (w * theta).cos());
            continue;
        }
        acc += weight * (c.re * (w * theta).cos() - c.im * (w * theta).sin());
    }
    acc / n as f64
}
