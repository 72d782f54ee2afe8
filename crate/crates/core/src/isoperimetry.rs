//! Fraenkel asymmetry, Wulff deficit and the quantitative isoperimetric
//! inequality `δ_s(E) ≥ C A(E)²`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlocal::{ball_perimeter, fractional_perimeter, PerimeterValue, QuadratureSpec};
use crate::numeric::special::unit_ball_volume;
use crate::numeric::{kahan_sum, KahanSum};
use crate::parallel::map_slice;
use crate::potentials::Potential;
use crate::shapes::{IntervalUnion, Point, RadialShape, Shape};
use crate::solver::energy::potential_integral;

/// `P_s(B)` for the ball of volume `v`, from the closed form for `B_1`
/// scaled by homogeneity.
pub fn reference_ball_perimeter(dim: usize, s: f64, v: f64) -> Result<PerimeterValue> {
    crate::nonlocal::check_s(s)?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!("volume must be positive, got {v}")));
    }
    let radius = (v / unit_ball_volume(dim)).powf(1.0 / dim as f64);
    let value = ball_perimeter(dim, s, radius);
    Ok(PerimeterValue {
        value,
        error_estimate: 64.0 * f64::EPSILON * value,
    })
}

/// Asymmetry, deficit and the data used to compute them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoReport {
    pub asymmetry: f64,
    pub center: Point,
    pub deficit: f64,
    pub deficit_error: f64,
    /// Set when the deficit is negative but within its error bar.
    pub negative_within_error: bool,
    pub perimeter: PerimeterValue,
    pub reference: PerimeterValue,
}

/// Fraenkel asymmetry `A(E) = min_x |E △ B_{|E|}(x)| / |E|` and the
/// minimizing center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub value: f64,
    pub center: Point,
}

/// Overlap `|E ∩ B_r(c)|` for a fixed set.
trait Overlap: Sync {
    fn overlap(&self, c: Point, r: f64) -> f64;
}

struct RadialOverlap {
    center: Point,
    dense: Vec<f64>,
}

impl Overlap for RadialOverlap {
    fn overlap(&self, c: Point, r: f64) -> f64 {
        // exact intersection of every ray segment [0, ρ(θ)] with the disc
        let m = self.dense.len();
        let dt = TAU / m as f64;
        let d = [self.center[0] - c[0], self.center[1] - c[1]];
        let dd = d[0] * d[0] + d[1] * d[1];
        let mut acc = KahanSum::new();
        for (k, rho) in self.dense.iter().enumerate() {
            let (sn, cs) = (k as f64 * dt).sin_cos();
            // |d + t e|² < r²  ⇔  t² + 2 b t + (|d|² − r²) < 0
            let b = d[0] * cs + d[1] * sn;
            let disc = b * b - (dd - r * r);
            if disc <= 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            let lo = (-b - sq).max(0.0);
            let hi = (-b + sq).min(*rho);
            if hi > lo {
                acc.add(0.5 * (hi * hi - lo * lo));
            }
        }
        acc.value() * dt
    }
}

/// Grid overlap by counting occupied cell centers, in coordinates local to
/// the occupied bounding box so that whole-cell shifts give identical sums.
struct GridOverlap {
    h: f64,
    dim: usize,
    cells: Vec<Point>,
}

impl Overlap for GridOverlap {
    fn overlap(&self, c: Point, r: f64) -> f64 {
        let r2 = r * r;
        let count = self
            .cells
            .iter()
            .filter(|p| {
                let dx = p[0] - c[0];
                let dy = p[1] - c[1];
                dx * dx + dy * dy < r2
            })
            .count();
        count as f64 * self.h.powi(self.dim as i32)
    }
}

/// Asymmetry search over an overlap oracle. Returns the best local center.
fn search(
    oracle: &dyn Overlap,
    volume: f64,
    radius: f64,
    dim: usize,
    seeds: Vec<Point>,
    finest: f64,
) -> Asymmetry {
    let cost = |c: Point| 2.0 * (1.0 - oracle.overlap(c, radius) / volume);
    let better = |a: (f64, Point), b: (f64, Point)| -> bool {
        a.0 < b.0 || (a.0 == b.0 && (a.1[0], a.1[1]) < (b.1[0], b.1[1]))
    };
    let mut evaluated: Vec<(f64, Point)> = map_slice(&seeds, |&c| (cost(c), c));
    evaluated.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].total_cmp(&b.1[0])).then(a.1[1].total_cmp(&b.1[1])));
    evaluated.truncate(4);
    let dirs: &[Point] = if dim == 1 {
        &[[1.0, 0.0], [-1.0, 0.0]]
    } else {
        &[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
    };
    let polished = map_slice(&evaluated, |&(v0, c0)| {
        let mut best = (v0, c0);
        let mut step = 0.25 * radius;
        while step >= finest {
            let mut moved = false;
            for d in dirs {
                let c = [best.1[0] + step * d[0], best.1[1] + step * d[1]];
                let v = cost(c);
                if better((v, c), best) && v < best.0 {
                    best = (v, c);
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best
    });
    let mut best = polished[0];
    for &cand in &polished[1..] {
        if better(cand, best) {
            best = cand;
        }
    }
    Asymmetry {
        value: best.0.clamp(0.0, 2.0),
        center: best.1,
    }
}

fn lattice(lo: Point, hi: Point, spacing: f64, dim: usize) -> Vec<Point> {
    let nx = ((hi[0] - lo[0]) / spacing).ceil().max(1.0) as usize;
    let ny = if dim == 1 { 0 } else { ((hi[1] - lo[1]) / spacing).ceil().max(1.0) as usize };
    let mut out = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            out.push([lo[0] + i as f64 * spacing, if dim == 1 { 0.0 } else { lo[1] + j as f64 * spacing }]);
        }
    }
    out
}

/// Fraenkel asymmetry by compass search from the barycenter and a coarse
/// lattice of seeds, with steps halved from a quarter radius down to `h/64`.
/// The result is an upper bound on the infimum; ties go to the
/// lexicographically smallest center.
pub fn fraenkel_asymmetry(shape: &Shape) -> Result<Asymmetry> {
    let volume = shape.volume()?;
    let dim = shape.dim();
    let radius = (volume / unit_ball_volume(dim)).powf(1.0 / dim as f64);
    match shape {
        Shape::Intervals(u) => Ok(interval_asymmetry(u, volume, radius)),
        Shape::Radial(r) => {
            let dense = r.upsampled((8 * r.len()).max(2048))?;
            let oracle = RadialOverlap { center: r.center, dense: dense.radii.clone() };
            let bary = radial_barycenter(r);
            let (lo, hi) = radial_box(r);
            let mut seeds = vec![bary];
            seeds.extend(lattice(lo, hi, 0.5 * radius, 2));
            let h = TAU / r.len() as f64 * radius;
            Ok(search(&oracle, volume, radius, 2, seeds, h / 64.0))
        }
        Shape::Grid(g) => {
            let c = g.cropped()?;
            let mut cells = Vec::with_capacity(c.count());
            let mut sum = [0.0f64; 2];
            for j in 0..c.ny() {
                for i in 0..c.nx() {
                    if c.occupied(i, j) {
                        let p = [(i as f64 + 0.5) * c.h(), if dim == 1 { 0.0 } else { (j as f64 + 0.5) * c.h() }];
                        sum[0] += p[0];
                        sum[1] += p[1];
                        cells.push(p);
                    }
                }
            }
            let n = cells.len() as f64;
            let bary = [sum[0] / n, sum[1] / n];
            let extent = [c.nx() as f64 * c.h(), if dim == 1 { 0.0 } else { c.ny() as f64 * c.h() }];
            let mut seeds = vec![bary];
            seeds.extend(lattice([0.0, 0.0], extent, 0.5 * radius, dim));
            let oracle = GridOverlap { h: c.h(), dim, cells };
            let mut a = search(&oracle, volume, radius, dim, seeds, c.h() / 64.0);
            a.center = [a.center[0] + c.origin()[0], if dim == 1 { 0.0 } else { a.center[1] + c.origin()[1] }];
            Ok(a)
        }
    }
}

/// In 1D the overlap is piecewise linear in the center with breaks where an
/// endpoint of the window meets an endpoint of the set, so the maximum is
/// attained at one of those breaks.
fn interval_asymmetry(u: &IntervalUnion, volume: f64, radius: f64) -> Asymmetry {
    let mut candidates: Vec<f64> = u
        .endpoints()
        .iter()
        .flat_map(|&e| [e - radius, e + radius])
        .collect();
    candidates.sort_by(f64::total_cmp);
    let mut best = (f64::INFINITY, 0.0);
    for c in candidates {
        let window = IntervalUnion::single(c - radius, c + radius).expect("positive radius");
        let v = 2.0 * (1.0 - u.intersection_length(&window) / volume);
        if v < best.0 {
            best = (v, c);
        }
    }
    Asymmetry {
        value: best.0.clamp(0.0, 2.0),
        center: [best.1, 0.0],
    }
}

/// `∫_E x / |E|` for a radial profile.
pub fn radial_barycenter(r: &RadialShape) -> Point {
    let h = r.step();
    let mut mx = KahanSum::new();
    let mut my = KahanSum::new();
    for (k, rho) in r.radii.iter().enumerate() {
        let (sn, cs) = (k as f64 * h).sin_cos();
        let w = rho.powi(3) / 3.0 * h;
        mx.add(w * cs);
        my.add(w * sn);
    }
    let v = r.volume();
    [r.center[0] + mx.value() / v, r.center[1] + my.value() / v]
}

fn radial_box(r: &RadialShape) -> (Point, Point) {
    let pts = r.boundary_points();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in pts {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    (lo, hi)
}

/// `δ_s(E) = P_s(E)/P_s(B_{|E|}) − 1` with propagated error.
pub fn wulff_deficit(shape: &Shape, q: &QuadratureSpec) -> Result<(f64, f64, PerimeterValue, PerimeterValue)> {
    let p = fractional_perimeter(shape, q)?;
    let reference = reference_ball_perimeter(shape.dim(), q.s, shape.volume()?)?;
    let ratio = p.value / reference.value;
    let err = p.error_estimate / reference.value + ratio * reference.error_estimate / reference.value;
    Ok((ratio - 1.0, err, p, reference))
}

/// Asymmetry and deficit together.
pub fn iso_report(shape: &Shape, q: &QuadratureSpec) -> Result<IsoReport> {
    let a = fraenkel_asymmetry(shape)?;
    let (deficit, deficit_error, perimeter, reference) = wulff_deficit(shape, q)?;
    Ok(IsoReport {
        asymmetry: a.value,
        center: a.center,
        deficit,
        deficit_error,
        negative_within_error: deficit < 0.0 && deficit >= -deficit_error,
        perimeter,
        reference,
    })
}

/// Outcome of the quantitative isoperimetric check over a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantitativeReport {
    pub c_fit: f64,
    pub c_fit_error: f64,
    /// `δ_s ≥ −error` held for every shape.
    pub deficits_nonnegative: bool,
    pub pass: bool,
    pub reports: Vec<IsoReport>,
}

/// Asymmetries below this are treated as zero.
pub const ASYMMETRY_FLOOR: f64 = 1e-6;

/// `C_fit = min_E δ_s(E)/A(E)²`; passes when `C_fit` exceeds its error bar
/// and no deficit is negative beyond its own error.
pub fn quantitative_check(corpus: &[Shape], q: &QuadratureSpec) -> Result<QuantitativeReport> {
    if corpus.is_empty() {
        return Err(Error::DegenerateCorpus("corpus is empty".into()));
    }
    let reports: Vec<IsoReport> = map_slice(corpus, |shape| iso_report(shape, q))
        .into_iter()
        .collect::<Result<_>>()?;
    if let Some(k) = reports.iter().position(|r| r.asymmetry <= ASYMMETRY_FLOOR) {
        return Err(Error::DegenerateCorpus(format!("shape {k} has zero asymmetry")));
    }
    let (mut c_fit, mut c_fit_error) = (f64::INFINITY, 0.0);
    for r in &reports {
        let a2 = r.asymmetry * r.asymmetry;
        let c = r.deficit / a2;
        if c < c_fit {
            c_fit = c;
            c_fit_error = r.deficit_error / a2;
        }
    }
    let deficits_nonnegative = reports.iter().all(|r| r.deficit >= -r.deficit_error);
    Ok(QuantitativeReport {
        c_fit,
        c_fit_error,
        deficits_nonnegative,
        pass: deficits_nonnegative && c_fit - c_fit_error > 0.0,
        reports,
    })
}

/// Perturbed discs `ρ = 1 + Σ_{k=2}^{6} a_k cos(kθ + φ_k)` with
/// `0.05 ≤ ‖a‖₂ ≤ max_norm`, rescaled to area `π`.
pub fn random_fourier_corpus(count: usize, samples: usize, max_norm: f64, seed: u64) -> Result<Vec<RadialShape>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut a: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let phases: Vec<f64> = (0..5).map(|_| rng.random_range(0.0..TAU)).collect();
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
        let target = rng.random_range(0.05f64.min(max_norm)..=max_norm);
        a.iter_mut().for_each(|x| *x *= target / norm);
        let shape = RadialShape::from_fn([0.0, 0.0], samples, |t| {
            1.0 + (0..5)
                .map(|i| a[i] * ((i as f64 + 2.0) * t + phases[i]).cos())
                .sum::<f64>()
        })?;
        let scale = (PI / shape.volume()).sqrt();
        out.push(shape.scaled(scale));
    }
    Ok(out)
}

/// Comparison of a set with its symmetric rearrangement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RearrangementReport {
    pub perimeter: PerimeterValue,
    pub perimeter_rearranged: f64,
    pub potential: f64,
    pub potential_rearranged: f64,
    pub potential_error: f64,
    pub pass: bool,
}

/// Checks `P_s(E*) ≤ P_s(E)` and `∫_{E*} g ≤ ∫_E g` where `E*` is the ball
/// of volume `|E|` centered at the symmetry center of `g`.
pub fn symmetric_rearrangement_check(shape: &Shape, g: &Potential, q: &QuadratureSpec) -> Result<RearrangementReport> {
    let center = g.radial_center().ok_or(Error::NonRadialPotential)?;
    let dim = shape.dim();
    let volume = shape.volume()?;
    let radius = (volume / unit_ball_volume(dim)).powf(1.0 / dim as f64);
    let perimeter = fractional_perimeter(shape, q)?;
    let perimeter_rearranged = ball_perimeter(dim, q.s, radius);
    let potential = potential_integral(shape, |x| g.eval(x))?;
    let potential_rearranged = ball_potential(g, dim, radius);
    let reference = match dim {
        1 => Shape::Intervals(IntervalUnion::single(center[0] - radius, center[0] + radius)?),
        _ => Shape::Radial(RadialShape::ball(center, radius, 256)?),
    };
    // quadrature error of the potential integral measured on the ball itself
    let potential_error = (potential_integral(&reference, |x| g.eval(x))? - potential_rearranged).abs()
        + 1e-12 * potential.abs().max(1.0)
        + grid_potential_error(shape, g);
    let pass = perimeter_rearranged <= perimeter.value + perimeter.error_estimate
        && potential_rearranged <= potential + potential_error;
    Ok(RearrangementReport {
        perimeter,
        perimeter_rearranged,
        potential,
        potential_rearranged,
        potential_error,
        pass,
    })
}

/// Midpoint-rule error bound for grids: `h²/24 · Σ |Δg| h^N`.
fn grid_potential_error(shape: &Shape, g: &Potential) -> f64 {
    let Shape::Grid(grid) = shape else { return 0.0 };
    let h = grid.h();
    let cell = h.powi(grid.dim() as i32);
    let mut terms = Vec::new();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            if grid.occupied(i, j) {
                let hs = g.hessian(grid.cell_center(i, j));
                let lap = if grid.dim() == 1 { hs[0][0] } else { hs[0][0] + hs[1][1] };
                terms.push(lap.abs() * cell);
            }
        }
    }
    h * h / 24.0 * kahan_sum(terms)
}

/// `∫_{B_r(x0)} g` in closed form for the radially symmetric potentials.
fn ball_potential(g: &Potential, dim: usize, r: f64) -> f64 {
    let sphere = crate::numeric::special::unit_sphere_measure(dim);
    let n = dim as f64;
    match *g {
        Potential::Power { p, .. } | Potential::ShiftedPower { p, .. } => sphere * r.powf(n + p) / (n + p),
        Potential::QuadraticForm { q, .. } => q[0][0] * sphere * r.powf(n + 2.0) / (n + 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_has_zero_asymmetry() {
        let b = Shape::Radial(RadialShape::ball([0.4, -0.3], 1.0, 128).unwrap());
        let a = fraenkel_asymmetry(&b).unwrap();
        assert!(a.value < 1e-3, "{}", a.value);
        assert!((a.center[0] - 0.4).abs() < 1e-3 && (a.center[1] + 0.3).abs() < 1e-3);
    }

    #[test]
    fn interval_asymmetry_of_two_far_pieces() {
        let u = Shape::Intervals(IntervalUnion::new(vec![(0.0, 1.0), (100.0, 101.0)]).unwrap());
        let a = fraenkel_asymmetry(&u).unwrap();
        assert!((a.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_scales_by_homogeneity() {
        let a = reference_ball_perimeter(2, 0.5, PI).unwrap().value;
        let b = reference_ball_perimeter(2, 0.5, 4.0 * PI).unwrap().value;
        assert!((b / a - 4f64.powf(0.75)).abs() < 1e-12);
        assert!(reference_ball_perimeter(2, 0.5, 0.0).is_err());
    }
}
