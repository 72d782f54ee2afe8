use serde::{Deserialize, Serialize};

use super::{dist, Point, RadialShape, Region, Shape};
use crate::error::{Error, Result};
use crate::parallel::map_indexed;

/// Radii of the largest centered ball inside and smallest centered ball
/// containing a set, with `r0 = max(1 − r_inner, r_outer − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichResult {
    pub r_inner: f64,
    pub r_outer: f64,
    pub r0: f64,
}

impl SandwichResult {
    fn new(r_inner: f64, r_outer: f64) -> Self {
        Self {
            r_inner,
            r_outer,
            r0: (1.0 - r_inner).max(r_outer - 1.0).max(0.0),
        }
    }
}

/// Inner and outer ball radii about `center`.
///
/// About the profile's own center these are the extreme samples. About any
/// other point the boundary is densely resampled and the distances to it are
/// measured directly.
pub fn ball_sandwich_radii(e: &RadialShape, center: Point) -> Result<SandwichResult> {
    if center == e.center {
        return Ok(SandwichResult::new(e.min_radius(), e.max_radius()));
    }
    let poly = e.lookup().polygon();
    if !point_in_polygon(center, &poly) {
        return Err(Error::NotStarCenter { x: center[0], y: center[1] });
    }
    let mut r_inner = f64::INFINITY;
    let mut r_outer: f64 = 0.0;
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        r_inner = r_inner.min(point_segment_distance(center, a, b));
        r_outer = r_outer.max(dist(center, a));
    }
    Ok(SandwichResult::new(r_inner, r_outer))
}

/// Signed shoelace area (positive for counter-clockwise polygons).
pub fn polygon_area(points: &[Point]) -> f64 {
    let n = points.len();
    let mut acc = crate::numeric::KahanSum::new();
    for k in 0..n {
        let p = points[k];
        let q = points[(k + 1) % n];
        acc.add(p[0] * q[1] - q[0] * p[1]);
    }
    0.5 * acc.value()
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; counter-clockwise hull without collinear points.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// `(|conv P| − |P|)/|P|` for the boundary polygon `P` of the samples.
pub fn convexity_defect(e: &RadialShape) -> f64 {
    let poly = e.boundary_points();
    let area = polygon_area(&poly);
    let hull = polygon_area(&convex_hull(&poly));
    ((hull - area) / area).max(0.0)
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

fn point_in_polygon(p: Point, poly: &[Point]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1])
            && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0]
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn one_sided_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let n = b.len();
    map_indexed(a.len(), |i| {
        let p = a[i];
        (0..n)
            .map(|k| point_segment_distance(p, b[k], b[(k + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Hausdorff distance between the boundaries of two radial shapes, measured
/// on dense resamplings of both curves.
pub fn hausdorff_distance(a: &RadialShape, b: &RadialShape) -> f64 {
    let m = (4 * a.len().max(b.len())).max(2048);
    let pa = a.upsampled(m).map(|s| s.boundary_points()).unwrap_or_default();
    let pb = b.upsampled(m).map(|s| s.boundary_points()).unwrap_or_default();
    one_sided_hausdorff(&pa, &pb).max(one_sided_hausdorff(&pb, &pa))
}

/// `|A △ B|`. Interval unions are handled exactly; everything else is
/// rasterized by cell centers onto a common lattice whose spacing is the
/// finer grid spacing among the inputs, or 1/1024 of the joint extent when
/// neither input is a grid.
pub fn symmetric_difference_volume(a: &Shape, b: &Shape) -> Result<f64> {
    if let (Shape::Intervals(x), Shape::Intervals(y)) = (a, b) {
        let (va, vb) = (x.volume()?, y.volume()?);
        return Ok((va + vb - 2.0 * x.intersection_length(y)).max(0.0));
    }
    let spacing = [a, b]
        .iter()
        .filter_map(|s| match s {
            Shape::Grid(g) => Some((g.h(), g.origin())),
            _ => None,
        })
        .min_by(|x, y| x.0.total_cmp(&y.0));
    match spacing {
        Some((h, anchor)) => symmetric_difference_on_lattice(a, b, h, anchor),
        None => {
            let (lo, hi) = joint_box(a, b)?;
            let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
            let divisions = if a.dim() == 1 { 1 << 16 } else { 1024 };
            symmetric_difference_on_lattice(a, b, extent / divisions as f64, lo)
        }
    }
}

/// `|A △ B|` rasterized with spacing `h` on a lattice anchored at the joint
/// bounding-box corner.
pub fn symmetric_difference_with_spacing(a: &Shape, b: &Shape, h: f64) -> Result<f64> {
    let (lo, _) = joint_box(a, b)?;
    symmetric_difference_on_lattice(a, b, h, lo)
}

fn joint_box(a: &Shape, b: &Shape) -> Result<(Point, Point)> {
    if a.dim() != b.dim() {
        return Err(Error::Incompatible(format!(
            "cannot compare a {}-dimensional set with a {}-dimensional set",
            a.dim(),
            b.dim()
        )));
    }
    let (ra, rb) = (a.region(), b.region());
    let (la, ha) = ra.bounding_box();
    let (lb, hb) = rb.bounding_box();
    Ok((
        [la[0].min(lb[0]), la[1].min(lb[1])],
        [ha[0].max(hb[0]), ha[1].max(hb[1])],
    ))
}

fn symmetric_difference_on_lattice(a: &Shape, b: &Shape, h: f64, anchor: Point) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("raster spacing must be positive, got {h}")));
    }
    let (lo, hi) = joint_box(a, b)?;
    let dim = a.dim();
    let i0 = ((lo[0] - anchor[0]) / h).floor() as i64 - 1;
    let i1 = ((hi[0] - anchor[0]) / h).ceil() as i64 + 1;
    let (j0, j1) = if dim == 1 {
        (0, 0)
    } else {
        (
            ((lo[1] - anchor[1]) / h).floor() as i64 - 1,
            ((hi[1] - anchor[1]) / h).ceil() as i64 + 1,
        )
    };
    let (ra, rb) = (a.region(), b.region());
    let (ra, rb): (&dyn Region, &dyn Region) = (ra.as_ref(), rb.as_ref());
    let rows = (j1 - j0 + 1) as usize;
    let counts = map_indexed(rows, |r| {
        let j = j0 + r as i64;
        let y = if dim == 1 { 0.0 } else { anchor[1] + (j as f64 + 0.5) * h };
        (i0..=i1)
            .filter(|&i| {
                let p = [anchor[0] + (i as f64 + 0.5) * h, y];
                ra.contains(p) != rb.contains(p)
            })
            .count()
    });
    let total: usize = counts.into_iter().sum();
    Ok(total as f64 * h.powi(dim as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_square_with_dent() {
        let pts = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.4], [1.0, 1.0], [0.0, 1.0]];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!((polygon_area(&hull) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sandwich_about_shifted_center_of_ball() {
        let b = RadialShape::ball([0.0, 0.0], 1.0, 128).unwrap();
        let s = ball_sandwich_radii(&b, [0.2, 0.0]).unwrap();
        assert!((s.r_inner - 0.8).abs() < 1e-4);
        assert!((s.r_outer - 1.2).abs() < 1e-4);
        assert!(ball_sandwich_radii(&b, [1.5, 0.0]).is_err());
    }

    #[test]
    fn hausdorff_of_concentric_balls() {
        let a = RadialShape::ball([0.0, 0.0], 1.0, 64).unwrap();
        let b = RadialShape::ball([0.0, 0.0], 1.1, 64).unwrap();
        assert!((hausdorff_distance(&a, &b) - 0.1).abs() < 1e-5);
    }
}
