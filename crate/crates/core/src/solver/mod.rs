//! Volume-constrained minimization of `P_s(E) + ∫_E g` over star-shaped
//! planar sets, in the rescaled frame where the volume is `|B_1| = π`.
//!
//! The state is a translation `t` and a radial profile `ρ` about the
//! origin; the rescaled set `F` is the region under `ρ` and the energy is
//! `P_s(F) + ∫_F σ^s g(σy + t) dy`. Each iteration takes a Newton step in
//! `t` and a (preconditioned) curvature-flow step in `ρ`.

pub mod energy;

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isoperimetry::fraenkel_asymmetry;
use crate::nonlocal::radial::{curvature_from_geometry, perimeter_from_geometry, BoundaryGeometry};
use crate::nonlocal::{check_s, radial_perimeter};
use crate::numeric::{fourier, kahan_sum};
use crate::parallel::map_indexed;
use crate::potentials::{rescaled_potential, Potential, RescaledPotential};
use crate::shapes::{hausdorff_distance, Point, RadialShape, RescaleMap, Shape};

pub use energy::{penalized_energy, potential_integral, radial_integral, total_energy, EnergyBreakdown};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Penalized,
    #[default]
    Projected,
}

fn default_k() -> usize {
    256
}
fn default_step() -> f64 {
    0.05
}
fn default_backtrack() -> f64 {
    0.5
}
fn default_tolerance() -> f64 {
    1e-10
}
fn default_max_iterations() -> usize {
    3000
}
fn default_window() -> f64 {
    3.0
}
fn default_starts() -> usize {
    4
}
fn default_perturbation() -> f64 {
    0.05
}
fn default_preconditioner() -> Option<f64> {
    Some(1.0)
}
fn default_mu() -> f64 {
    64.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub s: f64,
    pub m: f64,
    pub potential: Potential,
    #[serde(default)]
    pub mode: Mode,
    /// Penalty weight, used in penalized mode.
    #[serde(default = "default_mu")]
    pub mu: f64,
    /// Angular samples.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Initial flow step `τ₀`.
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_backtrack")]
    pub backtrack: f64,
    /// Relative energy decrease below which a step counts as stalled.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    /// The rescaled set must stay inside `B_window`.
    #[serde(default = "default_window")]
    pub window: f64,
    /// Ball plus `starts − 1` seeded perturbations.
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub seed: u64,
    /// `ℓ²` norm of the Fourier coefficients of the perturbed starts.
    #[serde(default = "default_perturbation")]
    pub perturbation: f64,
    /// `β` in the smoothing multiplier `1/(1 + β|k|^{1+s})`; `None` runs the
    /// plain flow.
    #[serde(default = "default_preconditioner")]
    pub preconditioner: Option<f64>,
    /// Initial translation `t` in original coordinates.
    #[serde(default)]
    pub initial_center: Point,
}

impl SolveConfig {
    pub fn new(s: f64, m: f64, potential: Potential) -> Self {
        Self {
            s,
            m,
            potential,
            mode: Mode::Projected,
            mu: default_mu(),
            k: default_k(),
            step: default_step(),
            backtrack: default_backtrack(),
            tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
            window: default_window(),
            starts: default_starts(),
            seed: 0,
            perturbation: default_perturbation(),
            preconditioner: default_preconditioner(),
            initial_center: [0.0, 0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_s(self.s)?;
        self.potential.validate()?;
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.m.is_finite() && self.m > 0.0) {
            return bad(format!("volume must be positive, got {}", self.m));
        }
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return bad(format!("penalty weight must be non-negative, got {}", self.mu));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad(format!("backtracking factor must lie in (0,1), got {}", self.backtrack));
        }
        if self.k < 16 {
            return bad(format!("need at least 16 angular samples, got {}", self.k));
        }
        if self.window <= 1.0 {
            return bad(format!("window radius must exceed 1, got {}", self.window));
        }
        if self.starts == 0 {
            return bad("at least one start is required".into());
        }
        if let Some(b) = self.preconditioner {
            if !(b.is_finite() && b >= 0.0) {
                return bad(format!("preconditioner weight must be non-negative, got {b}"));
            }
        }
        if !(self.tolerance >= 0.0) {
            return bad(format!("tolerance must be non-negative, got {}", self.tolerance));
        }
        Ok(())
    }

    fn map(&self, t: Point) -> RescaleMap {
        RescaleMap::new(2, self.m, t).expect("validated volume")
    }
}

/// One accepted iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub energy: f64,
    pub volume: f64,
    pub lambda: f64,
    pub residual: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartSummary {
    pub energy: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Hausdorff distance to the selected minimizer, both recentered.
    pub distance_to_best: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Rescaled minimizer `Ẽ_m`, centered so that its best ball is `B_1`.
    pub shape: RadialShape,
    /// Rescaled energy `P_s(F) + ∫_F g_m` (+ penalty).
    pub energy: EnergyBreakdown,
    /// `E_{s,g}(E_m) = σ^{N−s}(P_s(F) + ∫_F g_m)`.
    pub energy_descaled: f64,
    /// Boundary mean of `H_s + g_m` on the rescaled set.
    pub lambda_tilde_flow: f64,
    /// `σ^s λ_identity`.
    pub lambda_tilde_identity: f64,
    pub lambda_flow: f64,
    pub lambda_identity: f64,
    pub lambda_gap: f64,
    /// `sup |H_s + g_m − λ̃|` over the boundary samples.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
    /// `E_m = σẼ_m + x_m`.
    pub descaled: RadialShape,
    pub map: RescaleMap,
    /// Energy of the ball of volume `m` centered at a minimizer of `g`, with
    /// the same discretization as the solve.
    pub ball_energy: f64,
    pub starts: Vec<StartSummary>,
    /// Converged starts ended more than two samples apart.
    pub starts_disagree: bool,
    pub mode: Mode,
    pub mu: f64,
}

struct Problem<'a> {
    cfg: &'a SolveConfig,
    sigma: f64,
}

struct Outcome {
    t: Point,
    rho: Vec<f64>,
    energy: EnergyBreakdown,
    iterations: usize,
    converged: bool,
    trace: Vec<TraceRow>,
}

const ARMIJO: f64 = 1e-4;
const BAND: f64 = 1e-5 * PI;
const QUIET_STEPS: usize = 10;
const STALL_RESIDUAL: f64 = 0.05;

impl Problem<'_> {
    fn gm(&self, t: Point) -> RescaledPotential {
        rescaled_potential(&self.cfg.potential, &self.cfg.map(t), self.cfg.s)
    }

    fn shape(&self, rho: &[f64]) -> Result<RadialShape> {
        RadialShape::new([0.0, 0.0], rho.to_vec())
    }

    fn check(&self, rho: &[f64], iteration: usize) -> Result<()> {
        let max = rho.iter().cloned().fold(0.0, f64::max);
        let min = rho.iter().cloned().fold(f64::INFINITY, f64::min);
        if max > self.cfg.window {
            return Err(Error::OutsideWindow { radius: self.cfg.window, found: max });
        }
        if !(min > 1e-2 * max) {
            return Err(Error::StarShapeLost {
                iteration,
                reason: format!("radius ratio {:.3e}", min / max),
            });
        }
        let v = 0.5 * TAU / rho.len() as f64 * rho.iter().map(|r| r * r).sum::<f64>();
        if v < 1e-2 * PI {
            return Err(Error::StarShapeLost {
                iteration,
                reason: format!("volume collapsed to {v:.3e}"),
            });
        }
        Ok(())
    }

    fn potential(&self, rho: &[f64], t: Point) -> f64 {
        let gm = self.gm(t);
        radial_integral([0.0, 0.0], rho, |x| gm.eval(x))
    }

    fn penalty(&self, rho: &[f64]) -> f64 {
        match self.cfg.mode {
            Mode::Projected => 0.0,
            Mode::Penalized => {
                let v = 0.5 * TAU / rho.len() as f64 * kahan_sum(rho.iter().map(|r| r * r));
                self.cfg.mu * (v - PI).abs()
            }
        }
    }

    fn energy(&self, rho: &[f64], t: Point, iteration: usize) -> Result<EnergyBreakdown> {
        self.check(rho, iteration)?;
        let p = radial_perimeter(&self.shape(rho)?, self.cfg.s);
        Ok(EnergyBreakdown::new(p, self.potential(rho, t), self.penalty(rho)))
    }

    /// Newton step for `t ↦ ∫_F σ^s g(σy + t)`.
    fn newton_translation(&self, rho: &[f64], t: Point) -> Option<Point> {
        let g = &self.cfg.potential;
        let map = self.cfg.map(t);
        let scale = self.sigma.powf(self.cfg.s);
        let mut grad = [0.0; 2];
        let mut hess = [[0.0; 2]; 2];
        for (a, gr) in grad.iter_mut().enumerate() {
            *gr = scale * radial_integral([0.0, 0.0], rho, |y| g.gradient(map.from_unit(y))[a]);
            for b in 0..2 {
                hess[a][b] = scale * radial_integral([0.0, 0.0], rho, |y| g.hessian(map.from_unit(y))[a][b]);
            }
        }
        let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        if !(det > 0.0 && hess[0][0] > 0.0) {
            return None;
        }
        let dt = [
            -(hess[1][1] * grad[0] - hess[0][1] * grad[1]) / det,
            -(hess[0][0] * grad[1] - hess[1][0] * grad[0]) / det,
        ];
        (dt[0].hypot(dt[1]) > 1e-15 * (1.0 + t[0].hypot(t[1]))).then_some(dt)
    }

    /// `H_s + g_m` and the speed `|γ'|` at every sample.
    fn boundary_field(&self, rho: &[f64], t: Point) -> Result<(Vec<f64>, Vec<f64>)> {
        let shape = self.shape(rho)?;
        let geom = BoundaryGeometry::new(&shape);
        let h = curvature_from_geometry(&geom, self.cfg.s);
        let gm = self.gm(t);
        let w = h.iter().zip(&geom.points).map(|(h, p)| h + gm.eval(*p)).collect();
        Ok((w, geom.speed))
    }

    fn smooth(&self, v: &[f64]) -> Vec<f64> {
        match self.cfg.preconditioner {
            None => v.to_vec(),
            Some(beta) => {
                let e = 1.0 + self.cfg.s;
                fourier::apply_multiplier(v, |k| 1.0 / (1.0 + beta * k.powf(e)))
            }
        }
    }

    fn run(&self, rho0: Vec<f64>) -> Result<Outcome> {
        let cfg = self.cfg;
        let mut t = cfg.initial_center;
        let mut rho = rho0;
        let mut energy = self.energy(&rho, t, 0)?;
        let mut tau = cfg.step;
        let mut quiet = 0;
        let mut trace = Vec::new();
        let k = rho.len();
        let h = TAU / k as f64;
        let mut iterations = 0;
        let mut converged = false;

        while iterations < cfg.max_iterations {
            iterations += 1;
            let start_energy = energy.total;

            if let Some(dt) = self.newton_translation(&rho, t) {
                let mut f = 1.0;
                for _ in 0..8 {
                    let t_new = [t[0] + f * dt[0], t[1] + f * dt[1]];
                    let pot = self.potential(&rho, t_new);
                    if pot < energy.potential {
                        t = t_new;
                        energy = EnergyBreakdown::new(energy.perimeter, pot, energy.penalty);
                        break;
                    }
                    f *= 0.5;
                }
            }

            let (w, speed) = self.boundary_field(&rho, t)?;
            let root: Vec<f64> = speed.iter().map(|l| l.sqrt()).collect();
            let lambda_arc = kahan_sum(w.iter().zip(&speed).map(|(w, l)| w * l)) / kahan_sum(speed.iter().cloned());
            let residual = w.iter().map(|w| (w - lambda_arc).abs()).fold(0.0, f64::max);
            let p_root = self.smooth(&root);
            let rw: Vec<f64> = root.iter().zip(&w).map(|(r, w)| r * w).collect();
            let lambda = kahan_sum(p_root.iter().zip(&rw).map(|(a, b)| a * b))
                / kahan_sum(p_root.iter().zip(&root).map(|(a, b)| a * b));
            let volume = 0.5 * h * kahan_sum(rho.iter().map(|r| r * r));
            if trace.is_empty() {
                trace.push(TraceRow { iteration: 0, energy: energy.total, volume, lambda: lambda_arc, residual, step: 0.0 });
            }
            let shift = match cfg.mode {
                Mode::Projected => -lambda,
                Mode::Penalized => {
                    if (volume - PI).abs() > BAND {
                        cfg.mu * (volume - PI).signum()
                    } else {
                        (-lambda).clamp(-cfg.mu, cfg.mu)
                    }
                }
            };
            let weighted: Vec<f64> = root.iter().zip(&w).map(|(r, w)| r * (w + shift)).collect();
            let smoothed = self.smooth(&weighted);
            let dir: Vec<f64> = smoothed
                .iter()
                .zip(&root)
                .zip(&rho)
                .map(|((p, r), rho)| r / rho * p)
                .collect();
            // first-order decrease of the smooth part along −dir
            let slope = h * kahan_sum(rho.iter().zip(&w).zip(&dir).map(|((r, w), d)| r * (w + shift) * d));

            let mut accepted = None;
            for _ in 0..60 {
                let mut trial: Vec<f64> = rho.iter().zip(&dir).map(|(r, d)| r - tau * d).collect();
                if trial.iter().all(|r| *r > 0.0) {
                    if cfg.mode == Mode::Projected {
                        let v = 0.5 * h * kahan_sum(trial.iter().map(|r| r * r));
                        let f = (PI / v).sqrt();
                        trial.iter_mut().for_each(|r| *r *= f);
                    }
                    match self.energy(&trial, t, iterations) {
                        Ok(e) if e.total < energy.total - ARMIJO * tau * slope.max(0.0) => {
                            accepted = Some((trial, e));
                            break;
                        }
                        Ok(_) | Err(Error::OutsideWindow { .. }) => {}
                        Err(e @ Error::StarShapeLost { .. }) if tau < 1e-8 => return Err(e),
                        Err(Error::StarShapeLost { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
                tau *= cfg.backtrack;
                if tau < 1e-14 {
                    break;
                }
            }

            let Some((trial, e)) = accepted else {
                // no representable decrease left along the flow
                converged = residual <= STALL_RESIDUAL * lambda_arc.abs().max(1.0);
                break;
            };
            rho = trial;
            energy = e;
            let v = 0.5 * h * kahan_sum(rho.iter().map(|r| r * r));
            trace.push(TraceRow {
                iteration: iterations,
                energy: energy.total,
                volume: v,
                lambda: lambda_arc,
                residual,
                step: tau,
            });
            tau = (tau * 1.25).min(1e3 * cfg.step);
            if (start_energy - energy.total) <= cfg.tolerance * energy.total.abs() {
                quiet += 1;
                if quiet >= QUIET_STEPS {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if let Mode::Projected = cfg.mode {
            // the volume is restored exactly after every step
            debug_assert!(trace.iter().all(|r| (r.volume - PI).abs() < 1e-9));
        }
        Ok(Outcome { t, rho, energy, iterations, converged, trace })
    }
}

/// Initial profile for start `index`: the unit disc, or a seeded
/// perturbation in modes 2 through 5 renormalized to area `π`.
pub fn initial_profile(k: usize, index: usize, amplitude: f64, seed: u64) -> Vec<f64> {
    if index == 0 {
        return vec![1.0; k];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut a: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    let phase: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..TAU)).collect();
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
    a.iter_mut().for_each(|x| *x *= amplitude / norm);
    let h = TAU / k as f64;
    let rho: Vec<f64> = (0..k)
        .map(|i| {
            let th = i as f64 * h;
            1.0 + (0..4).map(|j| a[j] * ((j as f64 + 2.0) * th + phase[j]).cos()).sum::<f64>()
        })
        .collect();
    let v = 0.5 * h * rho.iter().map(|r| r * r).sum::<f64>();
    let f = (PI / v).sqrt();
    rho.into_iter().map(|r| r * f).collect()
}

/// Multipliers at the descaled set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangeEstimate {
    /// Arclength mean of `H_s + g` over `∂E_m`.
    pub lambda_flow: f64,
    /// `[(N−s)P_s(E_m) + ∫_{E_m} ∇g·x + N∫_{E_m} g]/(N m)`.
    pub lambda_identity: f64,
    pub gap: f64,
}

fn lagrange_estimate(e: &RadialShape, g: &Potential, s: f64, m: f64) -> LagrangeEstimate {
    let geom = BoundaryGeometry::new(e);
    let h = curvature_from_geometry(&geom, s);
    let num = kahan_sum(h.iter().zip(&geom.points).zip(&geom.speed).map(|((h, p), l)| (h + g.eval(*p)) * l));
    let lambda_flow = num / kahan_sum(geom.speed.iter().cloned());
    let p = perimeter_from_geometry(&geom, s);
    let moment = radial_integral(e.center, &e.radii, |x| {
        let d = g.gradient(x);
        d[0] * x[0] + d[1] * x[1] + 2.0 * g.eval(x)
    });
    let lambda_identity = ((2.0 - s) * p + moment) / (2.0 * m);
    LagrangeEstimate {
        lambda_flow,
        lambda_identity,
        gap: (lambda_flow - lambda_identity).abs() / lambda_identity.abs().max(1.0),
    }
}

/// Both multiplier estimates for a converged solve, recomputed on `E_m`.
pub fn lagrange_multiplier(res: &SolveResult, g: &Potential, s: f64, m: f64) -> Result<LagrangeEstimate> {
    if !res.converged {
        return Err(Error::NotConverged);
    }
    check_s(s)?;
    Ok(lagrange_estimate(&res.descaled, g, s, m))
}

/// Minimizes the energy from every start and keeps the lowest.
pub fn minimize(cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let sigma = cfg.map([0.0, 0.0]).sigma;
    let problem = Problem { cfg, sigma };
    let outcomes = map_indexed(cfg.starts, |i| {
        problem.run(initial_profile(cfg.k, i, cfg.perturbation, cfg.seed))
    });

    let best = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.as_ref().ok().map(|o| (i, o)))
        .min_by(|a, b| {
            // converged runs first, then energy, then start index
            (!a.1.converged)
                .cmp(&!b.1.converged)
                .then(a.1.energy.total.total_cmp(&b.1.energy.total))
                .then(a.0.cmp(&b.0))
        })
        .map(|(i, _)| i);
    let Some(best) = best else {
        let mut outcomes = outcomes;
        return Err(if cfg.starts == 1 {
            outcomes.pop().and_then(|o| o.err()).unwrap_or(Error::AllSolvesFailed)
        } else {
            Error::AllSolvesFailed
        });
    };
    let out = outcomes[best].as_ref().expect("selected start succeeded");

    let f = RadialShape::new([0.0, 0.0], out.rho.clone())?;
    let center = fraenkel_asymmetry(&Shape::Radial(f.clone()))?.center;
    let shape = f.translated([-center[0], -center[1]]);
    let x_m = [out.t[0] + sigma * center[0], out.t[1] + sigma * center[1]];
    let map = cfg.map(x_m);
    let descaled = RadialShape::new(out.t, out.rho.iter().map(|r| sigma * r).collect())?;

    let spacing = TAU / cfg.k as f64;
    let recentered = |rho: &[f64]| -> Result<RadialShape> {
        let f = RadialShape::new([0.0, 0.0], rho.to_vec())?;
        let c = fraenkel_asymmetry(&Shape::Radial(f.clone()))?.center;
        Ok(f.translated([-c[0], -c[1]]))
    };
    let mut starts = Vec::with_capacity(outcomes.len());
    let mut starts_disagree = false;
    for o in &outcomes {
        starts.push(match o {
            Ok(o) => {
                let d = recentered(&o.rho).map(|r| hausdorff_distance(&r, &shape)).ok();
                if o.converged && out.converged && d.is_some_and(|d| d > 2.0 * spacing) {
                    starts_disagree = true;
                }
                StartSummary {
                    energy: Some(o.energy.total),
                    converged: o.converged,
                    iterations: o.iterations,
                    distance_to_best: d,
                    error: None,
                }
            }
            Err(e) => StartSummary {
                energy: None,
                converged: false,
                iterations: 0,
                distance_to_best: None,
                error: Some(e.to_string()),
            },
        });
    }

    let (w, speed) = problem.boundary_field(&out.rho, out.t)?;
    let lambda_tilde_flow = kahan_sum(w.iter().zip(&speed).map(|(w, l)| w * l)) / kahan_sum(speed.iter().cloned());
    let residual = w.iter().map(|w| (w - lambda_tilde_flow).abs()).fold(0.0, f64::max);
    let lagrange = lagrange_estimate(&descaled, &cfg.potential, cfg.s, cfg.m);
    let scale = sigma.powf(cfg.s);

    let argmin = cfg.potential.argmin();
    let ball = RadialShape::ball(argmin, sigma, cfg.k)?;
    let ball_energy = radial_perimeter(&ball, cfg.s)
        + radial_integral(ball.center, &ball.radii, |x| cfg.potential.eval(x));

    Ok(SolveResult {
        shape,
        energy: out.energy,
        energy_descaled: sigma.powf(2.0 - cfg.s) * (out.energy.perimeter + out.energy.potential),
        lambda_tilde_flow,
        lambda_tilde_identity: scale * lagrange.lambda_identity,
        lambda_flow: lagrange.lambda_flow,
        lambda_identity: lagrange.lambda_identity,
        lambda_gap: lagrange.gap,
        residual,
        iterations: out.iterations,
        converged: out.converged,
        trace: out.trace.clone(),
        descaled,
        map,
        ball_energy,
        starts,
        starts_disagree,
        mode: cfg.mode,
        mu: cfg.mu,
    })
}

/// One step of the penalty calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyStep {
    pub mu: f64,
    /// `||F| − π|/π`, or `None` when the solve failed.
    pub volume_deviation: Option<f64>,
    pub energy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    pub mu0: f64,
    pub history: Vec<PenaltyStep>,
}

pub const CALIBRATION_MAX_MU: f64 = 1048576.0;

/// Doubles `μ` from 1 until two consecutive penalized solves both keep the
/// volume within `1e−3` and agree in energy to `1e−4`; `μ₀` is the first of
/// the pair.
pub fn calibrate_penalty(cfg: &SolveConfig) -> Result<PenaltyConfig> {
    if cfg.mode != Mode::Penalized {
        return Err(Error::Calibration("calibration needs penalized mode".into()));
    }
    cfg.validate()?;
    let mut history: Vec<PenaltyStep> = Vec::new();
    let mut mu = 1.0;
    while mu <= CALIBRATION_MAX_MU {
        let step = match minimize(&SolveConfig { mu, ..*cfg }) {
            Ok(r) => {
                let v = r.shape.volume();
                PenaltyStep {
                    mu,
                    volume_deviation: Some((v - PI).abs() / PI),
                    energy: Some(r.energy.total),
                    error: (!r.converged).then(|| "not converged".to_string()),
                }
            }
            Err(e) => PenaltyStep { mu, volume_deviation: None, energy: None, error: Some(e.to_string()) },
        };
        history.push(step);
        if let [.., a, b] = history.as_slice() {
            let good = |p: &PenaltyStep| p.error.is_none() && p.volume_deviation.is_some_and(|d| d < 1e-3);
            if good(a) && good(b) {
                let (ea, eb) = (a.energy.unwrap(), b.energy.unwrap());
                if (ea - eb).abs() <= 1e-4 * ea.abs().max(eb.abs()) {
                    return Ok(PenaltyConfig { mu0: a.mu, history });
                }
            }
        }
        mu *= 2.0;
    }
    Err(Error::Calibration(format!(
        "no stable penalty weight up to {CALIBRATION_MAX_MU}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_starts_have_unit_ball_volume() {
        for i in 0..4 {
            let rho = initial_profile(64, i, 0.05, 7);
            let v = 0.5 * TAU / 64.0 * rho.iter().map(|r| r * r).sum::<f64>();
            assert!((v - PI).abs() < 1e-12);
        }
        assert_ne!(initial_profile(64, 1, 0.05, 7), initial_profile(64, 2, 0.05, 7));
    }

    #[test]
    fn config_validation() {
        let mut c = SolveConfig::new(0.5, 0.1, Potential::power(2.0));
        assert!(c.validate().is_ok());
        c.backtrack = 1.0;
        assert!(c.validate().is_err());
    }
}
