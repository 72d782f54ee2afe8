//! Set representations and geometric measurements.

mod grid;
mod intervals;
mod io;
mod measure;
mod radial;
mod rescale;

pub use grid::GridSet;
pub use intervals::IntervalUnion;
pub use io::{load_shape, save_shape};
pub use measure::{
    ball_sandwich_radii, convexity_defect, hausdorff_distance, polygon_area,
    symmetric_difference_volume, symmetric_difference_with_spacing, SandwichResult,
};
pub use radial::{RadialLookup, RadialShape};
pub use rescale::{descale, rescale_to_unit, RescaleMap};

use crate::error::Result;

/// A point in the plane. One-dimensional sets use the first coordinate only.
pub type Point = [f64; 2];

/// Membership oracle shared by every representation.
pub trait Region: Sync {
    fn dim(&self) -> usize;
    fn contains(&self, p: Point) -> bool;
    /// Axis-aligned box `(lo, hi)` containing the set.
    fn bounding_box(&self) -> (Point, Point);
    fn volume(&self) -> f64;
}

/// Any supported set representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Radial(RadialShape),
    Grid(GridSet),
    Intervals(IntervalUnion),
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Radial(_) => 2,
            Shape::Grid(g) => g.dim(),
            Shape::Intervals(_) => 1,
        }
    }

    /// Volume (area in 2D, length in 1D).
    pub fn volume(&self) -> Result<f64> {
        match self {
            Shape::Radial(r) => Ok(r.volume()),
            Shape::Grid(g) => g.volume(),
            Shape::Intervals(u) => u.volume(),
        }
    }

    /// Membership oracle. Radial profiles are evaluated through a dense
    /// trigonometric resampling of the boundary.
    pub fn region(&self) -> Box<dyn Region + '_> {
        match self {
            Shape::Radial(r) => Box::new(r.lookup()),
            Shape::Grid(g) => Box::new(g),
            Shape::Intervals(u) => Box::new(u),
        }
    }

    /// Translate by `shift`.
    pub fn translated(&self, shift: Point) -> Shape {
        match self {
            Shape::Radial(r) => Shape::Radial(r.translated(shift)),
            Shape::Grid(g) => Shape::Grid(g.translated(shift)),
            Shape::Intervals(u) => Shape::Intervals(u.translated(shift[0])),
        }
    }
}

impl From<RadialShape> for Shape {
    fn from(v: RadialShape) -> Self {
        Shape::Radial(v)
    }
}

impl From<GridSet> for Shape {
    fn from(v: GridSet) -> Self {
        Shape::Grid(v)
    }
}

impl From<IntervalUnion> for Shape {
    fn from(v: IntervalUnion) -> Self {
        Shape::Intervals(v)
    }
}

/// Volume of any shape.
pub fn volume(shape: &Shape) -> Result<f64> {
    shape.volume()
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}
