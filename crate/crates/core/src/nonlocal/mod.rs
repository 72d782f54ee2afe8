//! Fractional perimeter `P_s(E) = ∫_E ∫_{E^c} |x−y|^{−N−s}` and fractional
//! mean curvature `H_s`, with independent oracles.

mod grid;
mod intervals;
mod mc;
mod pv;
pub(crate) mod radial;

pub use grid::{fractional_perimeter_grid, near_field_weights, NearFieldWeights};
pub use intervals::{
    fractional_perimeter_intervals, fractional_perimeter_intervals_by_complement,
    interval_curvature, pair_interaction,
};
pub use mc::fractional_perimeter_mc;
pub use pv::{pv_curvature, HalfPlane, PvValue};
pub use radial::{
    ball_curvature, ball_perimeter, fractional_perimeter_radial, radial_curvature_all,
    radial_curvature_at, radial_perimeter, BoundaryGeometry,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shapes::{Point, Shape};

/// Quadrature controls shared by every kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub s: f64,
    /// Far-field cutoff for grid sums. `None` uses the diagonal of the
    /// occupied bounding box, the smallest radius that keeps every interior
    /// pair in the explicit sum.
    pub far_radius: Option<f64>,
    /// Subdivision depth for touching cell pairs.
    pub depth: usize,
    /// Inner cutoff of the principal-value oracle.
    pub pv_epsilon: f64,
    pub mc_samples: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            s: 0.5,
            far_radius: None,
            depth: 3,
            pv_epsilon: 1e-2,
            mc_samples: 1_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_s(s: f64) -> Self {
        Self { s, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        check_s(self.s)?;
        if let Some(r) = self.far_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidParameter(format!("far radius must be positive, got {r}")));
            }
        }
        if !(self.pv_epsilon.is_finite() && self.pv_epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "principal-value cutoff must be positive, got {}",
                self.pv_epsilon
            )));
        }
        if self.mc_samples == 0 {
            return Err(Error::InvalidParameter("Monte Carlo sample count must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("s must lie in (0, 1), got {s}")))
    }
}

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerimeterValue {
    pub value: f64,
    pub error_estimate: f64,
}

impl PerimeterValue {
    pub fn exact(value: f64) -> Self {
        Self { value, error_estimate: 0.0 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
        }
    }
}

/// Deterministic fractional perimeter for any representation: closed form
/// for intervals, boundary integral for radial profiles, cell-pair sum for
/// grids.
pub fn fractional_perimeter(shape: &Shape, q: &QuadratureSpec) -> Result<PerimeterValue> {
    q.validate()?;
    match shape {
        Shape::Radial(r) => fractional_perimeter_radial(r, q.s),
        Shape::Grid(g) => fractional_perimeter_grid(g, q),
        Shape::Intervals(u) => fractional_perimeter_intervals(u, q.s),
    }
}

/// `H_s(E)(x)` at a boundary point of a radial profile or interval union.
pub fn fractional_mean_curvature(shape: &Shape, x: Point, q: &QuadratureSpec) -> Result<PerimeterValue> {
    q.validate()?;
    match shape {
        Shape::Radial(r) => radial_curvature_at(r, x, q.s),
        Shape::Intervals(u) => interval_curvature(u, x[0], q.s).map(PerimeterValue::exact),
        Shape::Grid(_) => Err(Error::InvalidParameter(
            "curvature needs a radial profile or an interval union".into(),
        )),
    }
}
