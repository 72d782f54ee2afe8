use super::{check_s, PerimeterValue};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::shapes::{IntervalUnion, Region};

/// `∫_a^b ∫_c^d |x−y|^{−1−s} dy dx` for `a < b ≤ c < d`; `d` may be `+∞`.
pub fn pair_interaction(a: f64, b: f64, c: f64, d: f64, s: f64) -> f64 {
    let p = 1.0 - s;
    let near = (c - a).powf(p) - (c - b).powf(p);
    let far = if d.is_infinite() { 0.0 } else { (d - b).powf(p) - (d - a).powf(p) };
    (near + far) / (s * p)
}

/// Closed form: `Σ_i 2ℓ_i^{1−s}/(s(1−s)) − 2 Σ_{i<j} I(i, j)`.
pub fn fractional_perimeter_intervals(e: &IntervalUnion, s: f64) -> Result<PerimeterValue> {
    check_s(s)?;
    let pairs = e.pairs();
    if pairs.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut acc = KahanSum::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        acc.add(2.0 * (b - a).powf(1.0 - s) / (s * (1.0 - s)));
        for &(c, d) in &pairs[i + 1..] {
            acc.add(-2.0 * pair_interaction(a, b, c, d, s));
        }
    }
    Ok(PerimeterValue::exact(acc.value()))
}

/// Same value computed as `Σ_{I ⊂ E} Σ_{G ⊂ E^c} ∫_I ∫_G`, summing over the
/// gaps and the two unbounded components of the complement.
pub fn fractional_perimeter_intervals_by_complement(e: &IntervalUnion, s: f64) -> Result<PerimeterValue> {
    check_s(s)?;
    let pairs = e.pairs();
    if pairs.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut gaps = vec![(f64::NEG_INFINITY, pairs[0].0)];
    gaps.extend(pairs.windows(2).map(|w| (w[0].1, w[1].0)));
    gaps.push((pairs[pairs.len() - 1].1, f64::INFINITY));
    let mut acc = KahanSum::new();
    for &(a, b) in pairs {
        for &(c, d) in &gaps {
            if c >= b {
                acc.add(pair_interaction(a, b, c, d, s));
            } else {
                // mirror the left component to the right of the interval
                acc.add(pair_interaction(-b, -a, -d, -c, s));
            }
        }
    }
    Ok(PerimeterValue::exact(acc.value()))
}

/// Exact `H_s` at an endpoint `x` of the union.
///
/// Pairing `x + t` with `x − t`, the integrand `F(t) t^{−1−s}` has `F`
/// piecewise constant in `t` with breaks at the distances to the other
/// endpoints, and `F = 0` near `t = 0`.
pub fn interval_curvature(e: &IntervalUnion, x: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    let ends = e.endpoints();
    let scale = ends
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let nearest = ends
        .iter()
        .map(|v| (v - x).abs())
        .fold(f64::INFINITY, f64::min);
    if nearest > 1e-9 * scale {
        return Err(Error::NotOnBoundary(nearest));
    }
    let mut breaks: Vec<f64> = ends
        .iter()
        .map(|v| (v - x).abs())
        .filter(|&d| d > 1e-9 * scale)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let sign = |p: f64| if e.contains([p, 0.0]) { -1.0 } else { 1.0 };
    let f = |t: f64| sign(x + t) + sign(x - t);
    let mut acc = KahanSum::new();
    let mut lo = 0.0;
    for (k, &hi) in breaks.iter().enumerate() {
        let fv = f(0.5 * (lo + hi));
        if fv != 0.0 {
            if k == 0 {
                return Err(Error::NotOnBoundary(0.0));
            }
            acc.add(fv * (lo.powf(-s) - hi.powf(-s)) / s);
        }
        lo = hi;
    }
    // beyond the last endpoint both sides lie in the complement
    let tail = if lo == 0.0 { 0.0 } else { 2.0 * lo.powf(-s) / s };
    acc.add(tail);
    Ok(acc.value())
}
