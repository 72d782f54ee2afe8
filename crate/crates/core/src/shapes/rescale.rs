use serde::{Deserialize, Serialize};

use super::{GridSet, IntervalUnion, Point, RadialShape, Shape};
use crate::error::{Error, Result};
use crate::numeric::special::unit_ball_volume;

/// Affine map `x ↦ (x − x_m)/σ` between a set of volume `m` and its
/// unit-ball-volume rescaling, with `σ = (m/|B_1|)^{1/N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleMap {
    pub dim: usize,
    pub m: f64,
    pub sigma: f64,
    pub x_m: Point,
}

impl RescaleMap {
    pub fn new(dim: usize, m: f64, x_m: Point) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("unsupported dimension {dim}")));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("volume must be positive, got {m}")));
        }
        let sigma = (m / unit_ball_volume(dim)).powf(1.0 / dim as f64);
        Ok(Self { dim, m, sigma, x_m })
    }

    /// `(x − x_m)/σ`.
    pub fn to_unit(&self, x: Point) -> Point {
        [(x[0] - self.x_m[0]) / self.sigma, (x[1] - self.x_m[1]) / self.sigma]
    }

    /// `σx + x_m`.
    pub fn from_unit(&self, x: Point) -> Point {
        [self.sigma * x[0] + self.x_m[0], self.sigma * x[1] + self.x_m[1]]
    }
}

const VOLUME_RTOL: f64 = 1e-6;

/// `Ẽ = (E − x_m)/σ`; requires `|E| = m`.
pub fn rescale_to_unit(shape: &Shape, map: &RescaleMap) -> Result<Shape> {
    let v = shape.volume()?;
    if ((v - map.m) / map.m).abs() > VOLUME_RTOL {
        return Err(Error::VolumeMismatch { expected: map.m, found: v });
    }
    if shape.dim() != map.dim {
        return Err(Error::Incompatible(format!(
            "shape is {}-dimensional, map is {}-dimensional",
            shape.dim(),
            map.dim
        )));
    }
    Ok(affine(shape, 1.0 / map.sigma, map.to_unit([0.0, 0.0])))
}

/// Inverse of [`rescale_to_unit`]: `E = σẼ + x_m`.
pub fn descale(shape: &Shape, map: &RescaleMap) -> Result<Shape> {
    Ok(affine(shape, map.sigma, map.x_m))
}

/// `x ↦ factor·x + shift`.
fn affine(shape: &Shape, factor: f64, shift: Point) -> Shape {
    let f = |p: Point| [factor * p[0] + shift[0], factor * p[1] + shift[1]];
    match shape {
        Shape::Radial(r) => Shape::Radial(RadialShape {
            center: f(r.center),
            radii: r.radii.iter().map(|x| x * factor).collect(),
        }),
        Shape::Grid(g) => {
            let o = f(g.origin());
            Shape::Grid(
                GridSet::new(g.dim(), o, g.h() * factor, g.nx(), g.ny(), g.cells().to_vec())
                    .expect("affine image of a valid grid"),
            )
        }
        Shape::Intervals(u) => Shape::Intervals(
            IntervalUnion::new(
                u.pairs()
                    .iter()
                    .map(|&(a, b)| (factor * a + shift[0], factor * b + shift[0]))
                    .collect(),
            )
            .expect("affine image of a valid union"),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_of_radius_two() {
        let map = RescaleMap::new(2, 4.0 * PI, [1.0, 2.0]).unwrap();
        assert!((map.sigma - 2.0).abs() < 1e-14);
        let e = Shape::Radial(RadialShape::ball([1.0, 2.0], 2.0, 64).unwrap());
        let Shape::Radial(u) = rescale_to_unit(&e, &map).unwrap() else { panic!() };
        assert!(u.center[0].abs() < 1e-15 && u.center[1].abs() < 1e-15);
        assert!(u.radii.iter().all(|r| (r - 1.0).abs() < 1e-14));
    }

    #[test]
    fn volume_mismatch_is_rejected() {
        let map = RescaleMap::new(2, 2.0, [0.0, 0.0]).unwrap();
        let e = Shape::Radial(RadialShape::ball([0.0, 0.0], 1.0, 64).unwrap());
        assert!(matches!(rescale_to_unit(&e, &map), Err(Error::VolumeMismatch { .. })));
    }

    #[test]
    fn sigma_reproduces_volume() {
        for m in [1e-4, 0.3, 7.0] {
            for dim in [1, 2] {
                let map = RescaleMap::new(dim, m, [0.0, 0.0]).unwrap();
                let back = map.sigma.powi(dim as i32) * unit_ball_volume(dim);
                assert!(((back - m) / m).abs() < 1e-12);
            }
        }
    }
}
