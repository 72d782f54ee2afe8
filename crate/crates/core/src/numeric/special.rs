//! Closed-form constants that appear in the kernel integrals.

use std::f64::consts::PI;

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn beta(a: f64, b: f64) -> f64 {
    statrs::function::beta::beta(a, b)
}

/// `∫_0^{2π} |2 sin(u/2)|^a du = 2π Γ(1+a) / Γ(1+a/2)²`, valid for `a > -1`.
pub fn chord_power_integral(a: f64) -> f64 {
    2.0 * PI * gamma(1.0 + a) / gamma(1.0 + 0.5 * a).powi(2)
}

/// Riemann zeta for real `z > 1` (Euler–Maclaurin) and, through the
/// functional equation, for non-integer `z < 0`.
pub fn zeta(z: f64) -> f64 {
    if z < 0.0 {
        let w = 1.0 - z;
        return 2.0 * (2.0 * PI).powf(-w) * (0.5 * PI * w).cos() * gamma(w) * zeta(w);
    }
    assert!(z > 1.0, "zeta is only implemented for z > 1 and z < 0");
    let n = 32.0f64;
    let mut acc = 0.0;
    for k in 1..32 {
        acc += (k as f64).powf(-z);
    }
    // tail from n with Bernoulli corrections B2, B4, B6
    acc += n.powf(1.0 - z) / (z - 1.0) + 0.5 * n.powf(-z);
    acc += z * n.powf(-z - 1.0) / 12.0;
    acc -= z * (z + 1.0) * (z + 2.0) * n.powf(-z - 3.0) / 720.0;
    acc += z * (z + 1.0) * (z + 2.0) * (z + 3.0) * (z + 4.0) * n.powf(-z - 5.0) / 30240.0;
    acc
}

/// Surface measure of the unit sphere `S^{N-1}`: 2 in one dimension, 2π in two.
pub fn unit_sphere_measure(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => panic!("only dimensions 1 and 2 are supported"),
    }
}

/// Volume of the unit ball: 2 in one dimension, π in two.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        _ => panic!("only dimensions 1 and 2 are supported"),
    }
}
