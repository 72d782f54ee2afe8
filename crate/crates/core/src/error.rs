use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("volume mismatch: expected {expected}, found {found}")]
    VolumeMismatch { expected: f64, found: f64 },

    #[error("not star center: point ({x}, {y}) lies outside the set")]
    NotStarCenter { x: f64, y: f64 },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("overlapping intervals ({0}, {1}) and ({2}, {3})")]
    OverlappingIntervals(f64, f64, f64, f64),

    #[error("point is not on the boundary (distance {0:e})")]
    NotOnBoundary(f64),

    #[error("incompatible shapes: {0}")]
    Incompatible(String),

    #[error("potential is not radially symmetric")]
    NonRadialPotential,

    #[error("monotonicity violated: {0}")]
    Monotonicity(String),

    #[error("support condition violated: {0}")]
    Support(String),

    #[error("degenerate corpus: {0}")]
    DegenerateCorpus(String),

    #[error("star-shapedness lost at iteration {iteration}: {reason}")]
    StarShapeLost { iteration: usize, reason: String },

    #[error("shape left the window B_{radius}: max radius {found}")]
    OutsideWindow { radius: f64, found: f64 },

    #[error("solve did not converge")]
    NotConverged,

    #[error("penalty calibration failed: {0}")]
    Calibration(String),

    #[error("all solves failed")]
    AllSolvesFailed,

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
