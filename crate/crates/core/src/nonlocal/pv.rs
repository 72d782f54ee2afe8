use std::f64::consts::PI;

use serde::Serialize;

use super::check_s;
use crate::error::{Error, Result};
use crate::numeric::special::unit_sphere_measure;
use crate::numeric::{GaussLegendre, KahanSum};
use crate::parallel::map_indexed;
use crate::shapes::{Point, Region};

/// The lower half-plane `{y < 0}`, whose boundary has zero curvature.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalfPlane;

impl Region for HalfPlane {
    fn dim(&self) -> usize {
        2
    }
    fn contains(&self, p: Point) -> bool {
        p[1] < 0.0
    }
    fn bounding_box(&self) -> (Point, Point) {
        ([f64::NEG_INFINITY; 2], [f64::INFINITY, 0.0])
    }
    fn volume(&self) -> f64 {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PvValue {
    pub value: f64,
    pub error_estimate: f64,
    pub at_eps: f64,
    pub at_half_eps: f64,
}

const ANGLES: usize = 4096;
const PANELS: usize = 96;

/// Principal-value oracle for `H_s(E)(x)`.
///
/// Inside `B_ε(x)` each point is paired with its mirror image across the
/// tangent line; the pair contributions cancel to leading order, leaving an
/// `O(ε^{1−s})` remainder that is removed by extrapolating from `ε` and
/// `ε/2`. Outside `B_ε` the integral is computed in polar coordinates about
/// `x` out to `r_max`. Beyond `r_max` the set is assumed bounded inside the
/// ball (`far_is_complement`) and the exact tail `|S^{N−1}| r_max^{−s}/s` is
/// added; otherwise the far field is taken to cancel.
pub fn pv_curvature(
    region: &dyn Region,
    x: Point,
    s: f64,
    eps: f64,
    r_max: f64,
    far_is_complement: bool,
) -> Result<PvValue> {
    check_s(s)?;
    if !(eps > 0.0 && r_max > eps) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < ε < r_max, got ε = {eps}, r_max = {r_max}"
        )));
    }
    let dim = region.dim();
    let tail = if far_is_complement {
        unit_sphere_measure(dim) * r_max.powf(-s) / s
    } else {
        0.0
    };
    let at_eps = outer_integral(region, x, s, eps, r_max) + tail;
    let at_half_eps = outer_integral(region, x, s, 0.5 * eps, r_max) + tail;
    let q = 2f64.powf(1.0 - s);
    let value = (q * at_half_eps - at_eps) / (q - 1.0);
    Ok(PvValue {
        value,
        error_estimate: (value - at_half_eps).abs(),
        at_eps,
        at_half_eps,
    })
}

fn signed(region: &dyn Region, p: Point) -> f64 {
    if region.contains(p) {
        -1.0
    } else {
        1.0
    }
}

/// `∫_{ε<|y−x|<R} (χ_{E^c} − χ_E)(y) |y−x|^{−N−s} dy`.
fn outer_integral(region: &dyn Region, x: Point, s: f64, eps: f64, r_max: f64) -> f64 {
    let gl = GaussLegendre::new(8);
    let (u0, u1) = (eps.ln(), r_max.ln());
    let width = (u1 - u0) / PANELS as f64;
    let dim = region.dim();
    let panels = map_indexed(PANELS, |p| {
        let lo = u0 + p as f64 * width;
        gl.integrate(lo, lo + width, |u| {
            let r = u.exp();
            // r^{−1−s} dr = r^{−s} du
            r.powf(-s) * angular_mean(region, x, r, dim)
        })
    });
    crate::numeric::kahan_sum(panels)
}

fn angular_mean(region: &dyn Region, x: Point, r: f64, dim: usize) -> f64 {
    if dim == 1 {
        return signed(region, [x[0] + r, 0.0]) + signed(region, [x[0] - r, 0.0]);
    }
    let dphi = 2.0 * PI / ANGLES as f64;
    let mut acc = KahanSum::new();
    for m in 0..ANGLES {
        let phi = (m as f64 + 0.5) * dphi;
        acc.add(signed(region, [x[0] + r * phi.cos(), x[1] + r * phi.sin()]));
    }
    acc.value() * dphi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_plane_edge_vanishes() {
        let v = pv_curvature(&HalfPlane, [0.3, 0.0], 0.5, 1e-2, 1e3, false).unwrap();
        assert!(v.value.abs() < 1e-12);
    }
}
