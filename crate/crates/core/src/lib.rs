//! Fractional perimeter, fractional mean curvature, and volume-constrained
//! minimizers of the nonlocal liquid-drop energy `P_s(E) + ∫_E g`.
//!
//! The crate works in dimensions one and two. Sets are represented as
//! star-shaped radial profiles ([`RadialShape`]), occupancy grids
//! ([`GridSet`]) or finite unions of intervals ([`IntervalUnion`]).
//!
//! Inner loops (kernel sums over cell pairs, curvature at boundary samples,
//! Monte Carlo chunks, sweep points) run on rayon when the `parallel`
//! feature is enabled and sequentially otherwise. Every reduction is
//! compensated and performed in a fixed order, so results are bit-identical
//! across thread counts.

pub mod error;
pub mod harness;
pub mod isoperimetry;
pub mod lemmas;
pub mod nonlocal;
pub mod numeric;
pub mod parallel;
pub mod potentials;
pub mod shapes;
pub mod solver;

pub use error::{Error, Result};
pub use nonlocal::{PerimeterValue, QuadratureSpec};
pub use potentials::{Potential, RescaledPotential};
pub use shapes::{GridSet, IntervalUnion, Point, RadialShape, RescaleMap, Shape};
