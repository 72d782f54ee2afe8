//! Test-side quadrature, written independently of the library's numerics.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

/// Composite 16-point Gauss–Legendre over `panels` equal panels.
pub fn integrate(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * 0.5 * h * f(lo + 0.5 * h * (xi + 1.0));
        }
    }
    total
}

/// `P_s(B_1)` in the plane as `(1/s) ∫_{B_1} ∫_{S^1} d(x, e)^{−s}` where
/// `d` is the exit distance along `e`.
pub fn disc_perimeter(s: f64) -> f64 {
    // w = u^k leaves a smooth outer integrand
    let k = 3.0 / (1.0 - s);
    // w = 1 − ρ, φ the angle between e and x; the exit distance is
    // −ρcosφ + sqrt(1 − ρ² sin²φ), rationalized where that would cancel
    let inner = |w: f64| {
        let rho = 1.0 - w;
        let gap = w * (2.0 - w);
        let f = |phi: f64| {
            let cs = phi.cos();
            let root = (gap + rho * rho * cs * cs).sqrt();
            let d = if cs > 0.0 { gap / (rho * cs + root) } else { root - rho * cs };
            d.powf(-s)
        };
        2.0 * (integrate(0.0, 0.5 * PI, 64, f) + integrate(0.5 * PI, PI, 64, f))
    };
    2.0 * PI / s * integrate(0.0, 1.0, 32, |u| k * u.powf(k - 1.0) * (1.0 - u.powf(k)) * inner(u.powf(k)))
}

/// `∫_a^b ∫_c^d |x − y|^{−1−s}` for separated intervals.
pub fn interval_pair(a: f64, b: f64, c: f64, d: f64, s: f64) -> f64 {
    integrate(a, b, 32, |x| integrate(c, d, 32, |y| (x - y).abs().powf(-1.0 - s)))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
