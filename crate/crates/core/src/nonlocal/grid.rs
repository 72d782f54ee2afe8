use super::{check_s, PerimeterValue, QuadratureSpec};
use crate::error::{Error, Result};
use crate::numeric::special::unit_sphere_measure;
use crate::numeric::KahanSum;
use crate::parallel::map_indexed;
use crate::shapes::GridSet;

/// Dimensionless interaction `∫_Q ∫_{Q+o} |x−y|^{−N−s}` of two touching unit
/// cells: `face` for `|o| = 1`, `corner` for `o = (±1, ±1)` (zero in 1D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearFieldWeights {
    pub dim: usize,
    pub s: f64,
    pub depth: usize,
    pub face: f64,
    pub corner: f64,
}

/// Touching-pair weights by recursive subdivision.
///
/// Splitting both cells in halves (per axis) turns a touching pair into
/// children pairs of which some touch again in the same configuration. With
/// `q = 2^{s−N}` the self-similar relations
/// `corner = q (corner + rest₁₁)` and `face = q (2 face + 2 corner + rest₁₀)`
/// (`face = q (face + rest₁)` in 1D) are solved exactly; the non-touching
/// remainders are refined while closer than two parent cells and `depth`
/// allows, then evaluated at their midpoints.
pub fn near_field_weights(dim: usize, s: f64, depth: usize) -> NearFieldWeights {
    let alpha = dim as f64 + s;
    if depth == 0 {
        return NearFieldWeights {
            dim,
            s,
            depth,
            face: 1.0,
            corner: if dim == 2 { 2f64.powf(-0.5 * alpha) } else { 0.0 },
        };
    }
    let q = 2f64.powf(s - dim as f64);
    let rest = |o: [i64; 2]| -> f64 {
        children(dim, o)
            .into_iter()
            .filter(|(c, _)| !touching(*c))
            .map(|(c, mult)| mult * q * refined(dim, c, 1, depth, q, alpha))
            .sum()
    };
    if dim == 1 {
        let r = rest([1, 0]);
        NearFieldWeights { dim, s, depth, face: r / (1.0 - q), corner: 0.0 }
    } else {
        let corner = rest([1, 1]) / (1.0 - q);
        let face = (2.0 * q * corner + rest([1, 0])) / (1.0 - 2.0 * q);
        NearFieldWeights { dim, s, depth, face, corner }
    }
}

fn touching(o: [i64; 2]) -> bool {
    o[0].abs() <= 1 && o[1].abs() <= 1
}

/// Child offsets `2o + e` with multiplicities `Π (2 − |e_i|)`.
fn children(dim: usize, o: [i64; 2]) -> Vec<([i64; 2], f64)> {
    let mut out = Vec::with_capacity(9);
    let ys: &[i64] = if dim == 1 { &[0] } else { &[-1, 0, 1] };
    for ex in [-1i64, 0, 1] {
        for &ey in ys {
            let mult = (2 - ex.abs()) as f64 * if dim == 1 { 1.0 } else { (2 - ey.abs()) as f64 };
            out.push(([2 * o[0] + ex, 2 * o[1] + ey], mult));
        }
    }
    out
}

/// Weight of a non-touching pair at `level` (cell size `2^{−level}`),
/// measured in units of its own cells.
fn refined(dim: usize, o: [i64; 2], level: usize, depth: usize, q: f64, alpha: f64) -> f64 {
    let r = ((o[0] * o[0] + o[1] * o[1]) as f64).sqrt();
    if level < depth && r * 0.5f64.powi(level as i32) < 2.0 {
        children(dim, o)
            .into_iter()
            .map(|(c, mult)| mult * q * refined(dim, c, level + 1, depth, q, alpha))
            .sum()
    } else {
        r.powf(-alpha)
    }
}

/// Occupancy rows packed into 64-bit words.
struct BitRows {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    fn new(g: &GridSet) -> Self {
        let words = g.nx().div_ceil(64);
        let rows = (0..g.ny())
            .map(|j| {
                let mut row = vec![0u64; words];
                for i in 0..g.nx() {
                    if g.occupied(i, j) {
                        row[i / 64] |= 1 << (i % 64);
                    }
                }
                row
            })
            .collect();
        Self { words, rows }
    }

    fn word_at(row: &[u64], idx: i64) -> u64 {
        if idx < 0 || idx as usize >= row.len() {
            0
        } else {
            row[idx as usize]
        }
    }

    /// `#{i : a[i] ∧ b[i + dx]}`.
    fn and_count_shifted(&self, a: &[u64], b: &[u64], dx: i64) -> u64 {
        let ws = dx.div_euclid(64);
        let bs = dx.rem_euclid(64) as u32;
        let mut count = 0u64;
        for w in 0..self.words {
            let lo = Self::word_at(b, w as i64 + ws);
            let shifted = if bs == 0 {
                lo
            } else {
                (lo >> bs) | (Self::word_at(b, w as i64 + ws + 1) << (64 - bs))
            };
            count += (a[w] & shifted).count_ones() as u64;
        }
        count
    }

    /// Number of occupied cells `x` with `x + (dx, dy)` occupied, `dy ≥ 0`.
    fn correlation(&self, dx: i64, dy: usize) -> u64 {
        let ny = self.rows.len();
        if dy >= ny {
            return 0;
        }
        (0..ny - dy)
            .map(|j| self.and_count_shifted(&self.rows[j], &self.rows[j + dy], dx))
            .sum()
    }
}

/// Fractional perimeter of an occupancy grid.
///
/// With `W(o)` the interaction of two unit cells at integer offset `o`,
/// `P_s = h^{N−s} [Σ_{0<|o|≤R} W(o)(n − C(o)) + n |S^{N−1}| R^{−s}/s]`,
/// where `n` is the number of occupied cells and `C(o)` counts occupied
/// cells whose translate by `o` is occupied. Touching pairs use
/// [`near_field_weights`], all others the midpoint value `|o|^{−N−s}`.
/// Cells farther than `R` from an occupied cell are treated as empty and
/// integrated in closed form, which is exact once `R` exceeds the diameter.
pub fn fractional_perimeter_grid(e: &GridSet, q: &QuadratureSpec) -> Result<PerimeterValue> {
    check_s(q.s)?;
    let s = q.s;
    let g = e.cropped()?;
    let dim = g.dim();
    let h = g.h();
    let n = g.count() as f64;
    let (nx, ny) = (g.nx() as i64, g.ny() as i64);
    let diameter = (((nx - 1) * (nx - 1) + (ny - 1) * (ny - 1)) as f64).sqrt();
    let radius = match q.far_radius {
        Some(r) => {
            let rc = r / h;
            if rc < diameter {
                return Err(Error::WindowTooSmall(format!(
                    "far radius {r} is smaller than the set diameter {}",
                    diameter * h
                )));
            }
            rc
        }
        None => ((nx * nx + ny * ny) as f64).sqrt(),
    };
    let alpha = dim as f64 + s;
    let near = near_field_weights(dim, s, q.depth);
    let coarse = near_field_weights(dim, s, q.depth.saturating_sub(1));
    // second-order midpoint correction Δ(|z|^{−α})/12
    let lap = if dim == 1 { alpha * (alpha + 1.0) } else { alpha * alpha } / 12.0;
    let bits = BitRows::new(&g);
    let r_int = radius.floor() as i64;
    let dy_max = if dim == 1 { 0 } else { r_int };

    let rows = map_indexed((dy_max + 1) as usize, |dy| {
        let dy = dy as i64;
        let span = ((radius * radius - (dy * dy) as f64).max(0.0)).sqrt().floor() as i64;
        let dx_min = if dy == 0 { 1 } else { -span };
        let mut value = KahanSum::new();
        let mut near_err = KahanSum::new();
        let mut far_err = KahanSum::new();
        for dx in dx_min..=span {
            let r2 = dx * dx + dy * dy;
            let corr = if dx.abs() < nx && dy < ny {
                bits.correlation(dx, dy as usize) as f64
            } else {
                0.0
            };
            let pairs = n - corr;
            if pairs == 0.0 {
                continue;
            }
            if dx.abs() <= 1 && dy <= 1 {
                let (w, w_coarse) = if r2 == 1 {
                    (near.face, coarse.face)
                } else {
                    (near.corner, coarse.corner)
                };
                value.add(w * pairs);
                near_err.add((w - w_coarse) * pairs);
            } else {
                let r = (r2 as f64).sqrt();
                let w = r.powf(-alpha);
                value.add(w * pairs);
                far_err.add(lap * w / (r * r) * pairs);
            }
        }
        (value.value(), near_err.value(), far_err.value())
    });

    let mut value = KahanSum::new();
    let mut near_err = KahanSum::new();
    let mut far_err = KahanSum::new();
    for (v, ne, fe) in rows {
        value.add(2.0 * v);
        near_err.add(2.0 * ne);
        far_err.add(2.0 * fe);
    }
    let sphere = unit_sphere_measure(dim);
    value.add(n * sphere * radius.powf(-s) / s);
    far_err.add(n * sphere * lap * radius.powf(-s - 2.0) / (s + 2.0));
    let scale = h.powf(dim as f64 - s);
    Ok(PerimeterValue {
        value: scale * value.value(),
        error_estimate: scale * (near_err.value().abs() + far_err.value().abs()),
    })
}
