use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PerimeterValue, QuadratureSpec};
use crate::error::{Error, Result};
use crate::numeric::special::unit_sphere_measure;
use crate::numeric::KahanSum;
use crate::parallel::map_indexed;
use crate::shapes::{GridSet, IntervalUnion, Point, Region, Shape};

const CHUNK: usize = 4096;

/// Monte Carlo estimate of `P_s(E) = ∫_E dx ∫_{S^{N−1}} de ∫_0^∞ r^{−1−s} χ_{E^c}(x + re) dr`.
///
/// A uniform point of `E` and a uniform direction select a chord of `E`.
/// The evaluation point is resampled on that chord with density
/// `∝ t^{−β}` in its distance `t` to the chord's exit, and `r ≥ t` is drawn
/// from the normalized `r^{−1−s}` law. With `β = s − (1−s)/4` the weight
/// `t^{β−s}` has finite variance for every `s ∈ (0,1)`; sampling `x`
/// directly would not for `s ≥ 1/2`.
///
/// Samples are drawn in fixed chunks from per-chunk ChaCha streams and
/// combined in chunk order, so the result depends only on the seed.
pub fn fractional_perimeter_mc(shape: &Shape, q: &QuadratureSpec, seed: u64) -> Result<PerimeterValue> {
    q.validate()?;
    let volume = shape.volume()?;
    if !(volume > 0.0) {
        return Err(Error::EmptySet);
    }
    let region = shape.region();
    let sampler = Sampler::new(shape, region.as_ref())?;
    let s = q.s;
    let beta = s - 0.25 * (1.0 - s);
    let dim = shape.dim();
    let prefactor = volume * unit_sphere_measure(dim) / ((1.0 - beta) * s);
    let n = q.mc_samples;
    let chunks = n.div_ceil(CHUNK);
    let partial = map_indexed(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(n - c * CHUNK);
        let mut sum = KahanSum::new();
        let mut sq = KahanSum::new();
        for _ in 0..count {
            let w = prefactor * sampler.sample(&mut rng, s, beta);
            sum.add(w);
            sq.add(w * w);
        }
        (sum.value(), sq.value())
    });
    let mut sum = KahanSum::new();
    let mut sq = KahanSum::new();
    for (a, b) in partial {
        sum.add(a);
        sq.add(b);
    }
    let nf = n as f64;
    let mean = sum.value() / nf;
    let var = if n > 1 {
        ((sq.value() / nf - mean * mean) * nf / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(PerimeterValue {
        value: mean,
        error_estimate: 1.96 * (var / nf).sqrt(),
    })
}

/// Draw `u ∈ (0, 1]`.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

enum Points<'a> {
    Intervals { set: &'a IntervalUnion, cumulative: Vec<f64> },
    Cells { grid: &'a GridSet, occupied: Vec<(usize, usize)> },
    Rejection { lo: Point, hi: Point },
}

struct Sampler<'a> {
    points: Points<'a>,
    region: &'a dyn Region,
    dim: usize,
    step: f64,
    reach: f64,
}

impl<'a> Sampler<'a> {
    fn new(shape: &'a Shape, region: &'a dyn Region) -> Result<Self> {
        let (lo, hi) = region.bounding_box();
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let dim = shape.dim();
        let (points, step) = match shape {
            Shape::Intervals(u) => {
                let mut acc = 0.0;
                let cumulative = u
                    .pairs()
                    .iter()
                    .map(|(a, b)| {
                        acc += b - a;
                        acc
                    })
                    .collect();
                (Points::Intervals { set: u, cumulative }, 0.0)
            }
            Shape::Grid(g) => {
                let mut occupied = Vec::new();
                for j in 0..g.ny() {
                    for i in 0..g.nx() {
                        if g.occupied(i, j) {
                            occupied.push((i, j));
                        }
                    }
                }
                if occupied.is_empty() {
                    return Err(Error::EmptySet);
                }
                (Points::Cells { grid: g, occupied }, (0.25 * g.h()).min(extent / 128.0))
            }
            Shape::Radial(_) => (Points::Rejection { lo, hi }, extent / 128.0),
        };
        Ok(Self {
            points,
            region,
            dim,
            step,
            reach: 2.0 * extent + 1.0,
        })
    }

    fn uniform_point(&self, rng: &mut ChaCha8Rng) -> Point {
        match &self.points {
            Points::Intervals { set, cumulative } => {
                let total = *cumulative.last().unwrap();
                let u = rng.random::<f64>() * total;
                let k = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
                let (a, b) = set.pairs()[k];
                [a + rng.random::<f64>() * (b - a), 0.0]
            }
            Points::Cells { grid, occupied } => {
                let (i, j) = occupied[rng.random_range(0..occupied.len())];
                let c = grid.cell_center(i, j);
                let h = grid.h();
                let x = c[0] + (rng.random::<f64>() - 0.5) * h;
                let y = if self.dim == 1 { 0.0 } else { c[1] + (rng.random::<f64>() - 0.5) * h };
                [x, y]
            }
            Points::Rejection { lo, hi } => loop {
                let p = [
                    lo[0] + rng.random::<f64>() * (hi[0] - lo[0]),
                    lo[1] + rng.random::<f64>() * (hi[1] - lo[1]),
                ];
                if self.region.contains(p) {
                    return p;
                }
            },
        }
    }

    fn direction(&self, rng: &mut ChaCha8Rng) -> Point {
        if self.dim == 1 {
            if rng.random::<bool>() {
                [1.0, 0.0]
            } else {
                [-1.0, 0.0]
            }
        } else {
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            [phi.cos(), phi.sin()]
        }
    }

    /// Distance from `x ∈ E` to the first exit along `e`.
    fn exit_distance(&self, x: Point, e: Point) -> f64 {
        if let Points::Intervals { set, .. } = &self.points {
            let k = set.pairs().partition_point(|&(a, _)| a <= x[0]).max(1) - 1;
            let (a, b) = set.pairs()[k];
            return if e[0] > 0.0 { b - x[0] } else { x[0] - a };
        }
        let at = |t: f64| [x[0] + t * e[0], x[1] + t * e[1]];
        let mut t = 0.0;
        while self.region.contains(at(t + self.step)) && t < self.reach {
            t += self.step;
        }
        let (mut lo, mut hi) = (t, t + self.step);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if self.region.contains(at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// One weighted sample, without the constant prefactor.
    fn sample(&self, rng: &mut ChaCha8Rng, s: f64, beta: f64) -> f64 {
        let x = self.uniform_point(rng);
        let e = self.direction(rng);
        let forward = self.exit_distance(x, e);
        let backward = self.exit_distance(x, [-e[0], -e[1]]);
        let len = forward + backward;
        if !(len > 0.0) {
            return 0.0;
        }
        let exit = [x[0] + forward * e[0], x[1] + forward * e[1]];
        let t = len * open_unit(rng).powf(1.0 / (1.0 - beta));
        let r = t * open_unit(rng).powf(-1.0 / s);
        let y = [exit[0] + (r - t) * e[0], exit[1] + (r - t) * e[1]];
        if self.region.contains(y) {
            return 0.0;
        }
        (t / len).powf(beta) * t.powf(-s)
    }
}
