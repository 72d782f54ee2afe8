use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, PowerLawFit};
use super::SolverOptions;
use crate::error::{Error, Result};
use crate::isoperimetry::{fraenkel_asymmetry, wulff_deficit};
use crate::nonlocal::QuadratureSpec;
use crate::parallel::map_slice;
use crate::potentials::Potential;
use crate::shapes::{ball_sandwich_radii, convexity_defect, Shape};
use crate::solver::{minimize, SolveResult};

/// Diagnostics of one minimizer of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub m: f64,
    pub sigma: f64,
    /// `max(1 − r_in, r_out − 1)` about the best ball of `Ẽ_m`.
    pub r0: f64,
    pub asymmetry: f64,
    pub deficit: f64,
    pub lambda_flow: f64,
    pub lambda_identity: f64,
    pub convexity_defect: f64,
    /// Distance from `x_m` to the minimizer of `g`.
    pub dist_xm: f64,
    pub x_m: [f64; 2],
    pub energy: f64,
    pub converged: bool,
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(m: f64, sigma: f64, error: String) -> Self {
        Self {
            m,
            sigma,
            r0: f64::NAN,
            asymmetry: f64::NAN,
            deficit: f64::NAN,
            lambda_flow: f64::NAN,
            lambda_identity: f64::NAN,
            convexity_defect: f64::NAN,
            dist_xm: f64::NAN,
            x_m: [f64::NAN; 2],
            energy: f64::NAN,
            converged: false,
            error: Some(error),
        }
    }
}

/// Sweep diagnostics for a finished solve.
pub fn record_from_result(res: &SolveResult, g: &Potential, s: f64) -> Result<SweepRecord> {
    let shape = Shape::Radial(res.shape.clone());
    let a = fraenkel_asymmetry(&shape)?;
    let sandwich = ball_sandwich_radii(&res.shape, a.center)?;
    let (deficit, _, _, _) = wulff_deficit(&shape, &QuadratureSpec::with_s(s))?;
    let target = g.argmin();
    let x_m = res.map.x_m;
    Ok(SweepRecord {
        m: res.map.m,
        sigma: res.map.sigma,
        r0: sandwich.r0,
        asymmetry: a.value,
        deficit,
        lambda_flow: res.lambda_flow,
        lambda_identity: res.lambda_identity,
        convexity_defect: convexity_defect(&res.shape),
        dist_xm: (x_m[0] - target[0]).hypot(x_m[1] - target[1]),
        x_m,
        energy: res.energy_descaled,
        converged: res.converged,
        error: None,
    })
}

/// Solves at every volume (in parallel) and collects diagnostics. Failed
/// solves become unconverged rows; the sweep fails only if all do.
pub fn run_sweep(s: f64, potential: &Potential, volumes: &[f64], opts: &SolverOptions) -> Result<Vec<SweepRecord>> {
    if volumes.len() < 5 {
        return Err(Error::InvalidParameter(format!("a sweep needs at least 5 volumes, got {}", volumes.len())));
    }
    if volumes.windows(2).any(|w| !(w[1] < w[0])) || !(volumes[volumes.len() - 1] > 0.0) {
        return Err(Error::InvalidParameter("volumes must be positive and strictly decreasing".into()));
    }
    if volumes[0] / volumes[volumes.len() - 1] < 10.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter("volumes must span at least one decade".into()));
    }
    let records = map_slice(volumes, |&m| {
        let cfg = opts.config(s, m, *potential);
        let sigma = (m / (TAU / 2.0)).sqrt();
        match minimize(&cfg).and_then(|r| record_from_result(&r, potential, s)) {
            Ok(r) => r,
            Err(e) => SweepRecord::failed(m, sigma, e.to_string()),
        }
    });
    if records.iter().all(|r| r.error.is_some()) {
        return Err(Error::AllSolvesFailed);
    }
    Ok(records)
}

/// `y ≤ C·w` with `C = max y/w` over the converged rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub constant: f64,
    pub rows: usize,
    pub pass: bool,
}

fn envelope(pairs: impl Iterator<Item = (f64, f64)>) -> Envelope {
    let mut constant: f64 = 0.0;
    let mut rows = 0;
    let mut pass = true;
    for (y, w) in pairs {
        rows += 1;
        if !(y.is_finite() && w.is_finite() && w > 0.0) {
            pass = false;
            continue;
        }
        constant = constant.max(y.max(0.0) / w);
    }
    Envelope { constant, rows, pass: pass && rows > 0 && constant.is_finite() }
}

/// `r0 ≤ C m^{s²/(2N²)}` in the plane.
pub fn r0_envelope(records: &[SweepRecord], s: f64) -> Envelope {
    let e = s * s / 8.0;
    envelope(records.iter().filter(|r| r.converged).map(|r| (r.r0, r.m.powf(e))))
}

/// `δ_s ≤ C σ^s sup_{B_σ(x₀)} g`, the supremum probed on 256 boundary
/// points of the ball around the minimizer `x₀` of `g`.
pub fn deficit_envelope(records: &[SweepRecord], g: &Potential, s: f64) -> Envelope {
    let x0 = g.argmin();
    let sup = |sigma: f64| {
        (0..256)
            .map(|k| {
                let (sn, cs) = (TAU * k as f64 / 256.0).sin_cos();
                g.eval([x0[0] + sigma * cs, x0[1] + sigma * sn])
            })
            .fold(0.0, f64::max)
    };
    envelope(records.iter().filter(|r| r.converged).map(|r| (r.deficit, r.sigma.powf(s) * sup(r.sigma))))
}

/// Log-log fits on converged rows with positive values; `None` when fewer
/// than three such rows exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFits {
    pub r0: Option<PowerLawFit>,
    pub lambda: Option<PowerLawFit>,
    pub deficit: Option<PowerLawFit>,
    pub r0_envelope: Envelope,
    /// Exponent `s²/(2N²)` of the envelope.
    pub exponent: f64,
}

impl SweepFits {
    pub fn is_empty(&self) -> bool {
        self.r0.is_none() && self.lambda.is_none() && self.deficit.is_none()
    }
}

pub fn fit_sweep(records: &[SweepRecord], s: f64) -> SweepFits {
    let fit = |f: &dyn Fn(&SweepRecord) -> f64| {
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter(|r| r.converged && f(r).is_finite() && f(r) > 0.0)
            .map(|r| (r.m, f(r)))
            .unzip();
        fit_power_law(&xs, &ys).ok()
    };
    SweepFits {
        r0: fit(&|r| r.r0),
        lambda: fit(&|r| r.lambda_flow),
        deficit: fit(&|r| r.deficit),
        r0_envelope: r0_envelope(records, s),
        exponent: s * s / 8.0,
    }
}
