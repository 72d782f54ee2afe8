use std::f64::consts::PI;

use super::{check_s, PerimeterValue};
use crate::error::{Error, Result};
use crate::numeric::special::{chord_power_integral, zeta};
use crate::numeric::{fourier, KahanSum};
use crate::parallel::map_indexed;
use crate::shapes::{Point, RadialShape};

/// Boundary curve `γ(θ) = c + ρ(θ)(cos θ, sin θ)` with spectral derivatives.
#[derive(Debug, Clone)]
pub struct BoundaryGeometry {
    pub points: Vec<Point>,
    pub d1: Vec<Point>,
    pub d2: Vec<Point>,
    pub d3: Vec<Point>,
    pub speed: Vec<f64>,
}

impl BoundaryGeometry {
    pub fn new(shape: &RadialShape) -> Self {
        let (r1, r2) = shape.derivatives();
        let (r3, _) = fourier::derivatives(&r2);
        let k = shape.len();
        let h = shape.step();
        let mut g = Self {
            points: Vec::with_capacity(k),
            d1: Vec::with_capacity(k),
            d2: Vec::with_capacity(k),
            d3: Vec::with_capacity(k),
            speed: Vec::with_capacity(k),
        };
        for i in 0..k {
            let t = i as f64 * h;
            let (p, d1, d2) = curve_at(shape.center, t, shape.radii[i], r1[i], r2[i]);
            // γ''' = (ρ''' − 3ρ') e_r + (3ρ'' − ρ) e_θ
            let (sn, cs) = t.sin_cos();
            let a = r3[i] - 3.0 * r1[i];
            let b = 3.0 * r2[i] - shape.radii[i];
            g.d3.push([a * cs - b * sn, a * sn + b * cs]);
            g.speed.push(d1[0].hypot(d1[1]));
            g.points.push(p);
            g.d1.push(d1);
            g.d2.push(d2);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn curve_at(c: Point, t: f64, r: f64, r1: f64, r2: f64) -> (Point, Point, Point) {
    let (sn, cs) = t.sin_cos();
    let p = [c[0] + r * cs, c[1] + r * sn];
    // γ' = ρ' e_r + ρ e_θ,  γ'' = (ρ'' − ρ) e_r + 2ρ' e_θ
    let d1 = [r1 * cs - r * sn, r1 * sn + r * cs];
    let a = r2 - r;
    let b = 2.0 * r1;
    let d2 = [a * cs - b * sn, a * sn + b * cs];
    (p, d1, d2)
}

/// `|2 sin(π d/K)|^{−s}` for `d = 1..K−1` (entry 0 unused).
fn chord_table(k: usize, s: f64) -> Vec<f64> {
    (0..k)
        .map(|d| {
            if d == 0 {
                0.0
            } else {
                (2.0 * (PI * d as f64 / k as f64).sin()).abs().powf(-s)
            }
        })
        .collect()
}

/// Boundary-integral form of the fractional perimeter in the plane,
/// `P_s = s^{−2} ∮∮ γ'(θ)·γ'(φ) |γ(θ) − γ(φ)|^{−s} dθ dφ`.
///
/// The `|φ−θ|^{−s}` diagonal singularity is subtracted and integrated in
/// closed form. The remainder still carries a `|φ−θ|^{2−s}` term, whose
/// trapezoidal error `2ζ(s−2) a h^{3−s}` is removed as well.
pub fn radial_perimeter(shape: &RadialShape, s: f64) -> f64 {
    let geom = BoundaryGeometry::new(shape);
    perimeter_from_geometry(&geom, s)
}

pub(crate) fn perimeter_from_geometry(geom: &BoundaryGeometry, s: f64) -> f64 {
    let k = geom.len();
    let h = 2.0 * PI / k as f64;
    let table = chord_table(k, s);
    let a = chord_power_integral(-s);
    let navot = 2.0 * zeta(s - 2.0) * h.powf(3.0 - s);
    let rows = map_indexed(k, |i| {
        let (pi, ti) = (geom.points[i], geom.d1[i]);
        let w = geom.speed[i].powf(2.0 - s);
        let corr = navot * remainder_coefficient(geom, i, s);
        let mut acc = KahanSum::new();
        for j in 0..k {
            if j == i {
                continue;
            }
            let (pj, tj) = (geom.points[j], geom.d1[j]);
            let dx = pi[0] - pj[0];
            let dy = pi[1] - pj[1];
            let r2 = dx * dx + dy * dy;
            let dot = ti[0] * tj[0] + ti[1] * tj[1];
            acc.add(dot * r2.powf(-0.5 * s) - w * table[(j + k - i) % k]);
        }
        h * acc.value() - corr + w * a
    });
    h / (s * s) * crate::numeric::kahan_sum(rows)
}

/// Coefficient of `|u|^{2−s}` in the subtracted perimeter integrand at
/// sample `i`, from a Taylor expansion of the curve.
fn remainder_coefficient(geom: &BoundaryGeometry, i: usize, s: f64) -> f64 {
    let (v, w, z) = (geom.d1[i], geom.d2[i], geom.d3[i]);
    let dot = |a: Point, b: Point| a[0] * b[0] + a[1] * b[1];
    let v2 = dot(v, v);
    let p = dot(v, w) / v2;
    let q = (0.25 * dot(w, w) + dot(v, z) / 3.0) / v2;
    let r = 0.5 * dot(v, z) / v2;
    v2.powf(1.0 - 0.5 * s) * (r - 0.5 * s * q + s * (s - 2.0) * p * p / 8.0 - s / 24.0)
}

/// `P_s` of a radial profile; the error estimate compares `K` samples with
/// the trigonometric interpolant resampled on `2K`.
pub fn fractional_perimeter_radial(shape: &RadialShape, s: f64) -> Result<PerimeterValue> {
    check_s(s)?;
    let coarse = radial_perimeter(shape, s);
    let fine = radial_perimeter(&shape.upsampled(2 * shape.len())?, s);
    Ok(PerimeterValue {
        value: coarse,
        error_estimate: (coarse - fine).abs(),
    })
}

/// `H_s` at the curve point with parameter `t`, given its local geometry.
#[allow(clippy::too_many_arguments)]
fn curvature_kernel(
    geom: &BoundaryGeometry,
    s: f64,
    t: f64,
    p: Point,
    d1: Point,
    d2: Point,
    skip: Option<usize>,
    table: Option<&[f64]>,
) -> f64 {
    let k = geom.len();
    let h = 2.0 * PI / k as f64;
    let speed = d1[0].hypot(d1[1]);
    let c = (d1[0] * d2[1] - d1[1] * d2[0]) / (2.0 * speed.powf(2.0 + s));
    let mut acc = KahanSum::new();
    for j in 0..k {
        if Some(j) == skip {
            continue;
        }
        let q = geom.points[j];
        let tj = geom.d1[j];
        let dx = q[0] - p[0];
        let dy = q[1] - p[1];
        let r2 = dx * dx + dy * dy;
        // outward normal times speed: J γ' = (γ'_y, −γ'_x)
        let num = dx * tj[1] - dy * tj[0];
        let chord = match (table, skip) {
            (Some(tab), Some(i)) => tab[(j + k - i) % k],
            _ => (2.0 * (0.5 * (j as f64 * h - t)).sin()).abs().powf(-s),
        };
        acc.add(num * r2.powf(-1.0 - 0.5 * s) - c * chord);
    }
    2.0 / s * (h * acc.value() + c * chord_power_integral(-s))
}

/// `H_s` at every sample of the profile.
pub fn radial_curvature_all(shape: &RadialShape, s: f64) -> Vec<f64> {
    let geom = BoundaryGeometry::new(shape);
    curvature_from_geometry(&geom, s)
}

pub(crate) fn curvature_from_geometry(geom: &BoundaryGeometry, s: f64) -> Vec<f64> {
    let h = 2.0 * PI / geom.len() as f64;
    let table = chord_table(geom.len(), s);
    map_indexed(geom.len(), |i| {
        curvature_kernel(geom, s, i as f64 * h, geom.points[i], geom.d1[i], geom.d2[i], Some(i), Some(&table))
    })
}

fn curvature_at_angle(shape: &RadialShape, geom: &BoundaryGeometry, s: f64, theta: f64) -> f64 {
    let k = shape.len();
    let h = shape.step();
    let t = theta.rem_euclid(2.0 * PI);
    let node = (t / h).round() as usize % k;
    let dt = (t - node as f64 * h).abs().min((t - node as f64 * h - 2.0 * PI).abs());
    if dt < 1e-12 {
        return curvature_kernel(geom, s, node as f64 * h, geom.points[node], geom.d1[node], geom.d2[node], Some(node), None);
    }
    let (r1, r2) = shape.derivatives();
    let r = fourier::evaluate(&shape.radii, t);
    let (p, d1, d2) = curve_at(shape.center, t, r, fourier::evaluate(&r1, t), fourier::evaluate(&r2, t));
    curvature_kernel(geom, s, t, p, d1, d2, None, None)
}

/// `H_s` at a boundary point `x` of a radial profile, with the difference
/// between `K` and `2K` samples as the error estimate.
pub fn radial_curvature_at(shape: &RadialShape, x: Point, s: f64) -> Result<PerimeterValue> {
    check_s(s)?;
    let dx = x[0] - shape.center[0];
    let dy = x[1] - shape.center[1];
    let theta = dy.atan2(dx);
    let gap = (dx.hypot(dy) - shape.radius_at(theta)).abs();
    if gap > 1e-6 * shape.max_radius() {
        return Err(Error::NotOnBoundary(gap));
    }
    let coarse = curvature_at_angle(shape, &BoundaryGeometry::new(shape), s, theta);
    let fine_shape = shape.upsampled(2 * shape.len())?;
    let fine = curvature_at_angle(&fine_shape, &BoundaryGeometry::new(&fine_shape), s, theta);
    Ok(PerimeterValue {
        value: coarse,
        error_estimate: (coarse - fine).abs(),
    })
}

/// Closed-form `P_s(B_r)` in dimension one or two.
pub fn ball_perimeter(dim: usize, s: f64, radius: f64) -> f64 {
    match dim {
        1 => 2.0 * (2.0 * radius).powf(1.0 - s) / (s * (1.0 - s)),
        2 => {
            radius.powf(2.0 - s) * 2.0 * PI / (s * s)
                * (chord_power_integral(-s) - 0.5 * chord_power_integral(2.0 - s))
        }
        _ => panic!("only dimensions 1 and 2 are supported"),
    }
}

/// Closed-form constant `H_s` on the boundary of `B_r`.
pub fn ball_curvature(dim: usize, s: f64, radius: f64) -> f64 {
    match dim {
        1 => 2.0 * (2.0 * radius).powf(-s) / s,
        2 => (2.0 - s) * ball_perimeter(2, s, 1.0) / (2.0 * PI) * radius.powf(-s),
        _ => panic!("only dimensions 1 and 2 are supported"),
    }
}
