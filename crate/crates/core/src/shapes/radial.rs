use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Point, Region};
use crate::error::{Error, Result};
use crate::numeric::fourier;

/// Star-shaped planar set `{center + r(cos θ, sin θ) : r < ρ(θ)}` sampled at
/// `K` uniform angles `θ_k = 2πk/K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialShape {
    pub center: Point,
    pub radii: Vec<f64>,
}

pub const MIN_SAMPLES: usize = 16;

impl RadialShape {
    pub fn new(center: Point, radii: Vec<f64>) -> Result<Self> {
        if radii.len() < MIN_SAMPLES {
            return Err(Error::InvalidShape(format!(
                "radial profile needs at least {MIN_SAMPLES} samples, got {}",
                radii.len()
            )));
        }
        if let Some((k, r)) = radii
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.is_finite() && **r > 0.0))
        {
            return Err(Error::InvalidShape(format!("radius {k} is {r}, must be positive")));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(Error::InvalidShape("center is not finite".into()));
        }
        Ok(Self { center, radii })
    }

    pub fn from_fn(center: Point, k: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let radii = (0..k).map(|i| f(2.0 * PI * i as f64 / k as f64)).collect();
        Self::new(center, radii)
    }

    pub fn ball(center: Point, radius: f64, k: usize) -> Result<Self> {
        Self::from_fn(center, k, |_| radius)
    }

    /// Axis-aligned ellipse with semi-axes `a` (x) and `b` (y).
    pub fn ellipse(center: Point, a: f64, b: f64, k: usize) -> Result<Self> {
        Self::from_fn(center, k, |t| {
            a * b / ((b * t.cos()).powi(2) + (a * t.sin()).powi(2)).sqrt()
        })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Angular step `2π/K`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.radii.len() as f64
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.step() * k as f64
    }

    /// Trapezoidal area `½ Σ ρ_k² Δθ`.
    pub fn volume(&self) -> f64 {
        0.5 * self.step() * crate::numeric::kahan_sum(self.radii.iter().map(|r| r * r))
    }

    pub fn min_radius(&self) -> f64 {
        self.radii.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn boundary_point(&self, k: usize) -> Point {
        let t = self.angle(k);
        let r = self.radii[k];
        [self.center[0] + r * t.cos(), self.center[1] + r * t.sin()]
    }

    pub fn boundary_points(&self) -> Vec<Point> {
        (0..self.len()).map(|k| self.boundary_point(k)).collect()
    }

    /// Spectral `(ρ', ρ'')` at the sample angles.
    pub fn derivatives(&self) -> (Vec<f64>, Vec<f64>) {
        fourier::derivatives(&self.radii)
    }

    /// Radius of the trigonometric interpolant at angle `theta`.
    pub fn radius_at(&self, theta: f64) -> f64 {
        fourier::evaluate(&self.radii, theta)
    }

    /// Resample the trigonometric interpolant on `m >= K` angles.
    pub fn upsampled(&self, m: usize) -> Result<Self> {
        Self::new(self.center, fourier::upsample(&self.radii, m.max(self.len())))
    }

    pub fn translated(&self, shift: Point) -> Self {
        Self {
            center: [self.center[0] + shift[0], self.center[1] + shift[1]],
            radii: self.radii.clone(),
        }
    }

    /// Dilate about the profile center.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            center: self.center,
            radii: self.radii.iter().map(|r| r * factor).collect(),
        }
    }

    /// Dense lookup table used as a membership oracle.
    pub fn lookup(&self) -> RadialLookup {
        let m = (8 * self.len()).max(4096);
        let dense = fourier::upsample(&self.radii, m);
        RadialLookup::from_dense(self.center, dense, self.volume())
    }
}

/// Linear interpolation on a dense resampling of a radial profile.
#[derive(Debug, Clone)]
pub struct RadialLookup {
    center: Point,
    dense: Vec<f64>,
    volume: f64,
    bbox: (Point, Point),
}

impl RadialLookup {
    fn from_dense(center: Point, dense: Vec<f64>, volume: f64) -> Self {
        let m = dense.len();
        let dt = 2.0 * PI / m as f64;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut rmax: f64 = 0.0;
        for (k, r) in dense.iter().enumerate() {
            let t = dt * k as f64;
            let p = [center[0] + r * t.cos(), center[1] + r * t.sin()];
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
            rmax = rmax.max(*r);
        }
        let pad = 2.0 * dt * rmax;
        for d in 0..2 {
            lo[d] -= pad;
            hi[d] += pad;
        }
        Self {
            center,
            dense,
            volume,
            bbox: (lo, hi),
        }
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius_at(&self, theta: f64) -> f64 {
        let m = self.dense.len();
        let x = theta.rem_euclid(2.0 * PI) / (2.0 * PI) * m as f64;
        let i = (x.floor() as usize).min(m - 1);
        let f = x - i as f64;
        self.dense[i] * (1.0 - f) + self.dense[(i + 1) % m] * f
    }

    /// Dense boundary polygon.
    pub fn polygon(&self) -> Vec<Point> {
        let dt = 2.0 * PI / self.dense.len() as f64;
        self.dense
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let t = dt * k as f64;
                [self.center[0] + r * t.cos(), self.center[1] + r * t.sin()]
            })
            .collect()
    }
}

impl Region for RadialLookup {
    fn dim(&self) -> usize {
        2
    }

    fn contains(&self, p: Point) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let d = dx.hypot(dy);
        if d == 0.0 {
            return true;
        }
        d < self.radius_at(dy.atan2(dx))
    }

    fn bounding_box(&self) -> (Point, Point) {
        self.bbox
    }

    fn volume(&self) -> f64 {
        self.volume
    }
}
