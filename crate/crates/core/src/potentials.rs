//! Coercive potentials with analytic derivatives and their volume rescaling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shapes::{Point, RescaleMap};

/// Closed family of potentials `g ≥ 0` with `min g = 0` at a known point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `|x − x0|^p`.
    Power {
        p: f64,
        #[serde(default)]
        center: Point,
    },
    /// `|x − x0|^p`, kept as a separate kind for configs that want to make
    /// the off-origin minimum explicit.
    ShiftedPower { p: f64, center: Point },
    /// `(x − x0)ᵀ Q (x − x0)` with `Q` symmetric positive definite.
    QuadraticForm {
        q: [[f64; 2]; 2],
        #[serde(default)]
        center: Point,
    },
}

impl Potential {
    pub fn power(p: f64) -> Self {
        Potential::Power { p, center: [0.0, 0.0] }
    }

    pub fn shifted_power(p: f64, center: Point) -> Self {
        Potential::ShiftedPower { p, center }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Potential::Power { p, center } | Potential::ShiftedPower { p, center } => {
                if !(p.is_finite() && p >= 1.0) {
                    return Err(Error::InvalidParameter(format!("exponent must be ≥ 1, got {p}")));
                }
                finite_point(center)
            }
            Potential::QuadraticForm { q, center } => {
                let sym = (q[0][1] - q[1][0]).abs() <= 1e-12 * (q[0][1].abs() + 1.0);
                let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
                if !sym || !(q[0][0] > 0.0 && det > 0.0) {
                    return Err(Error::InvalidParameter(
                        "quadratic form must be symmetric positive definite".into(),
                    ));
                }
                finite_point(center)
            }
        }
    }

    /// The unique minimizer, where `g = 0`.
    pub fn argmin(&self) -> Point {
        match *self {
            Potential::Power { center, .. }
            | Potential::ShiftedPower { center, .. }
            | Potential::QuadraticForm { center, .. } => center,
        }
    }

    /// Center of radial symmetry, if `g` depends on `|x − x0|` only.
    pub fn radial_center(&self) -> Option<Point> {
        match *self {
            Potential::Power { center, .. } | Potential::ShiftedPower { center, .. } => Some(center),
            Potential::QuadraticForm { q, center } => {
                (q[0][1] == 0.0 && q[1][0] == 0.0 && q[0][0] == q[1][1]).then_some(center)
            }
        }
    }

    pub fn eval(&self, x: Point) -> f64 {
        match *self {
            Potential::Power { p, center } | Potential::ShiftedPower { p, center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r2 = d[0] * d[0] + d[1] * d[1];
                if p == 2.0 {
                    r2
                } else {
                    r2.powf(0.5 * p)
                }
            }
            Potential::QuadraticForm { q, center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                d[0] * (q[0][0] * d[0] + q[0][1] * d[1]) + d[1] * (q[1][0] * d[0] + q[1][1] * d[1])
            }
        }
    }

    pub fn gradient(&self, x: Point) -> Point {
        match *self {
            Potential::Power { p, center } | Potential::ShiftedPower { p, center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = d[0].hypot(d[1]);
                if r == 0.0 {
                    return [0.0, 0.0];
                }
                let f = p * r.powf(p - 2.0);
                [f * d[0], f * d[1]]
            }
            Potential::QuadraticForm { q, center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                [
                    2.0 * (q[0][0] * d[0] + q[0][1] * d[1]),
                    2.0 * (q[1][0] * d[0] + q[1][1] * d[1]),
                ]
            }
        }
    }

    /// Hessian; at the center of a power potential with `p < 2` the
    /// singular value is regularized at distance `1e-12`.
    pub fn hessian(&self, x: Point) -> [[f64; 2]; 2] {
        match *self {
            Potential::Power { p, center } | Potential::ShiftedPower { p, center } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = d[0].hypot(d[1]).max(1e-12);
                let a = p * r.powf(p - 2.0);
                let b = p * (p - 2.0) * r.powf(p - 4.0);
                [
                    [a + b * d[0] * d[0], b * d[0] * d[1]],
                    [b * d[0] * d[1], a + b * d[1] * d[1]],
                ]
            }
            Potential::QuadraticForm { q, .. } => [[2.0 * q[0][0], 2.0 * q[0][1]], [2.0 * q[1][0], 2.0 * q[1][1]]],
        }
    }
}

fn finite_point(p: Point) -> Result<()> {
    if p[0].is_finite() && p[1].is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("center must be finite".into()))
    }
}

/// Largest absolute eigenvalue of a symmetric 2×2 matrix by power iteration.
pub fn operator_norm(q: [[f64; 2]; 2]) -> f64 {
    let mut v = [0.6, 0.8];
    let mut norm = 0.0;
    for _ in 0..500 {
        let w = [q[0][0] * v[0] + q[0][1] * v[1], q[1][0] * v[0] + q[1][1] * v[1]];
        let n = w[0].hypot(w[1]);
        if n == 0.0 {
            return 0.0;
        }
        let done = (n - norm).abs() <= 1e-15 * n;
        norm = n;
        v = [w[0] / n, w[1] / n];
        if done {
            break;
        }
    }
    norm
}

/// A Lipschitz constant of `g` on `B_R(0)`.
pub fn lipschitz_bound(g: &Potential, radius: f64) -> f64 {
    match *g {
        Potential::Power { p, center } | Potential::ShiftedPower { p, center } => {
            p * (radius + center[0].hypot(center[1])).powf(p - 1.0)
        }
        Potential::QuadraticForm { q, center } => {
            2.0 * operator_norm(q) * (radius + center[0].hypot(center[1]))
        }
    }
}

/// `g_m(x) = σ^s g(σx + x_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledPotential {
    pub base: Potential,
    pub map: RescaleMap,
    pub s: f64,
}

impl RescaledPotential {
    pub fn eval(&self, x: Point) -> f64 {
        self.map.sigma.powf(self.s) * self.base.eval(self.map.from_unit(x))
    }

    pub fn gradient(&self, x: Point) -> Point {
        let f = self.map.sigma.powf(1.0 + self.s);
        let g = self.base.gradient(self.map.from_unit(x));
        [f * g[0], f * g[1]]
    }
}

pub fn rescaled_potential(g: &Potential, map: &RescaleMap, s: f64) -> RescaledPotential {
    RescaledPotential { base: *g, map: *map, s }
}

pub fn eval_potential(g: &Potential, x: Point) -> f64 {
    g.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        assert_eq!(Potential::power(2.0).eval([1.0, 1.0]), 2.0);
        assert_eq!(Potential::shifted_power(2.0, [0.3, 0.0]).eval([0.3, 0.0]), 0.0);
        let map = RescaleMap { dim: 2, m: std::f64::consts::PI * 0.25, sigma: 0.5, x_m: [0.0, 0.0] };
        let gm = rescaled_potential(&Potential::power(2.0), &map, 0.5);
        assert!((gm.eval([1.0, 0.0]) - 0.5f64.powf(2.5)).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(lipschitz_bound(&Potential::power(2.0), 2.0), 4.0);
        assert_eq!(lipschitz_bound(&Potential::power(1.0), 5.0), 1.0);
        let q = [[2.0, 1.0], [1.0, 3.0]];
        let eig = 2.5 + (0.25f64 + 1.0).sqrt();
        assert!((operator_norm(q) - eig).abs() < 1e-12);
    }

    #[test]
    fn config_fragment_parses() {
        let g: Potential = serde_json::from_str(r#"{"kind":"power","p":2,"center":[0.3,0]}"#).unwrap();
        assert_eq!(g.argmin(), [0.3, 0.0]);
        let g: Potential = serde_json::from_str(r#"{"kind":"power","p":2}"#).unwrap();
        assert_eq!(g.argmin(), [0.0, 0.0]);
    }
}
