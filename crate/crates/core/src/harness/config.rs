use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::shapes::Point;
use crate::solver::{Mode, SolveConfig};

/// Solver settings shared by every volume of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub mode: Mode,
    pub mu: f64,
    pub k: usize,
    pub step: f64,
    pub backtrack: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub window: f64,
    pub starts: usize,
    pub seed: u64,
    pub perturbation: f64,
    pub preconditioner: Option<f64>,
    pub initial_center: Point,
}

impl Default for SolverOptions {
    fn default() -> Self {
        let c = SolveConfig::new(0.5, 1.0, Potential::power(2.0));
        Self {
            mode: c.mode,
            mu: c.mu,
            k: c.k,
            step: c.step,
            backtrack: c.backtrack,
            tolerance: c.tolerance,
            max_iterations: c.max_iterations,
            window: c.window,
            starts: c.starts,
            seed: c.seed,
            perturbation: c.perturbation,
            preconditioner: c.preconditioner,
            initial_center: c.initial_center,
        }
    }
}

impl SolverOptions {
    pub fn config(&self, s: f64, m: f64, potential: Potential) -> SolveConfig {
        SolveConfig {
            s,
            m,
            potential,
            mode: self.mode,
            mu: self.mu,
            k: self.k,
            step: self.step,
            backtrack: self.backtrack,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            window: self.window,
            starts: self.starts,
            seed: self.seed,
            perturbation: self.perturbation,
            preconditioner: self.preconditioner,
            initial_center: self.initial_center,
        }
    }
}

/// Volumes of a sweep, listed or geometric `start·ratio^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VolumeGrid {
    List(Vec<f64>),
    Geometric { start: f64, ratio: f64, count: usize },
}

impl VolumeGrid {
    pub fn volumes(&self) -> Vec<f64> {
        match self {
            VolumeGrid::List(v) => v.clone(),
            VolumeGrid::Geometric { start, ratio, count } => {
                (0..*count).map(|i| start * ratio.powi(i as i32)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub s: f64,
    pub potential: Potential,
    pub volumes: VolumeGrid,
    #[serde(default)]
    pub solver: SolverOptions,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::from)
    }
}
