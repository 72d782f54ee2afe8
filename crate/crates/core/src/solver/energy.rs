use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlocal::{fractional_perimeter, QuadratureSpec};
use crate::numeric::{kahan_sum, GaussLegendre};
use crate::potentials::{Potential, RescaledPotential};
use crate::shapes::{Point, RadialShape, Shape};

/// Energy split into its components; `total` is their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub perimeter: f64,
    pub potential: f64,
    pub penalty: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(perimeter: f64, potential: f64, penalty: f64) -> Self {
        Self {
            perimeter,
            potential,
            penalty,
            total: perimeter + potential + penalty,
        }
    }
}

const RADIAL_NODES: usize = 16;

/// `∫_0^{2π} ∫_0^{ρ(θ)} f(c + r e_θ) r dr dθ`: trapezoidal in `θ`,
/// Gauss–Legendre in `r`.
pub fn radial_integral(center: Point, radii: &[f64], f: impl Fn(Point) -> f64) -> f64 {
    let gl = GaussLegendre::new(RADIAL_NODES);
    let k = radii.len();
    let h = std::f64::consts::TAU / k as f64;
    kahan_sum((0..k).map(|i| {
        let (sn, cs) = (i as f64 * h).sin_cos();
        h * gl.integrate(0.0, radii[i], |r| r * f([center[0] + r * cs, center[1] + r * sn]))
    }))
}

/// `∫_E f` for any representation: cell midpoints on grids, Gauss–Legendre
/// on intervals, polar quadrature on radial profiles.
pub fn potential_integral(shape: &Shape, f: impl Fn(Point) -> f64) -> Result<f64> {
    match shape {
        Shape::Radial(r) => Ok(radial_integral(r.center, &r.radii, f)),
        Shape::Grid(g) => {
            if g.count() == 0 {
                return Err(Error::EmptySet);
            }
            let cell = g.h().powi(g.dim() as i32);
            let mut vals = Vec::with_capacity(g.count());
            for j in 0..g.ny() {
                for i in 0..g.nx() {
                    if g.occupied(i, j) {
                        vals.push(cell * f(g.cell_center(i, j)));
                    }
                }
            }
            Ok(kahan_sum(vals))
        }
        Shape::Intervals(u) => {
            let gl = GaussLegendre::new(RADIAL_NODES);
            Ok(kahan_sum(
                u.pairs()
                    .iter()
                    .map(|&(a, b)| gl.integrate_composite(a, b, 8, |x| f([x, 0.0]))),
            ))
        }
    }
}

/// `P_s(E) + ∫_E g`.
pub fn total_energy(shape: &Shape, g: &Potential, q: &QuadratureSpec) -> Result<EnergyBreakdown> {
    let p = fractional_perimeter(shape, q)?.value;
    let v = potential_integral(shape, |x| g.eval(x))?;
    Ok(EnergyBreakdown::new(p, v, 0.0))
}

/// `P_s(F) + ∫_F g_m + μ ||F| − |B_1||` for `F ⊂ B_window`.
pub fn penalized_energy(
    f: &RadialShape,
    gm: &RescaledPotential,
    s: f64,
    mu: f64,
    window: f64,
) -> Result<EnergyBreakdown> {
    let reach = f
        .boundary_points()
        .iter()
        .map(|p| p[0].hypot(p[1]))
        .fold(0.0, f64::max);
    if reach > window {
        return Err(Error::OutsideWindow { radius: window, found: reach });
    }
    let p = crate::nonlocal::radial_perimeter(f, s);
    let v = radial_integral(f.center, &f.radii, |x| gm.eval(x));
    let penalty = mu * (f.volume() - std::f64::consts::PI).abs();
    Ok(EnergyBreakdown::new(p, v, penalty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn second_moment_of_unit_disc() {
        let b = RadialShape::ball([0.0, 0.0], 1.0, 64).unwrap();
        let v = radial_integral(b.center, &b.radii, |x| x[0] * x[0] + x[1] * x[1]);
        assert!((v - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn shifted_disc_moment() {
        // ∫_{B_1(c)} |x|² = π/2 + π|c|²
        let b = RadialShape::ball([0.5, -0.2], 1.0, 64).unwrap();
        let v = radial_integral(b.center, &b.radii, |x| x[0] * x[0] + x[1] * x[1]);
        assert!((v - (PI / 2.0 + PI * 0.29)).abs() < 1e-12);
    }
}
