use super::{Point, Region};
use crate::error::{Error, Result};

/// Occupancy grid on the window `[origin, origin + (nx, ny)·h)`.
///
/// Cell `(i, j)` covers `[ox + i·h, ox + (i+1)·h) × [oy + j·h, oy + (j+1)·h)`;
/// row `j = 0` is the bottom row. One-dimensional grids have `ny = 1` and
/// ignore the second coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    dim: usize,
    origin: Point,
    h: f64,
    nx: usize,
    ny: usize,
    cells: Vec<bool>,
}

impl GridSet {
    pub fn new(dim: usize, origin: Point, h: f64, nx: usize, ny: usize, cells: Vec<bool>) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidShape(format!("unsupported dimension {dim}")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidShape(format!("grid spacing must be positive, got {h}")));
        }
        let ny = if dim == 1 { 1 } else { ny };
        if nx == 0 || ny == 0 || cells.len() != nx * ny {
            return Err(Error::InvalidShape(format!(
                "occupancy has {} cells, expected {nx}×{ny}",
                cells.len()
            )));
        }
        let origin = if dim == 1 { [origin[0], 0.0] } else { origin };
        Ok(Self { dim, origin, h, nx, ny, cells })
    }

    pub fn new_1d(origin: f64, h: f64, cells: Vec<bool>) -> Result<Self> {
        let n = cells.len();
        Self::new(1, [origin, 0.0], h, n, 1, cells)
    }

    /// Occupy every cell whose center satisfies `inside`.
    pub fn from_fn(
        dim: usize,
        origin: Point,
        h: f64,
        nx: usize,
        ny: usize,
        inside: impl Fn(Point) -> bool,
    ) -> Result<Self> {
        let ny = if dim == 1 { 1 } else { ny };
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let c = [origin[0] + (i as f64 + 0.5) * h, origin[1] + (j as f64 + 0.5) * h];
                cells.push(inside(if dim == 1 { [c[0], 0.0] } else { c }));
            }
        }
        Self::new(dim, origin, h, nx, ny, cells)
    }

    /// Cell-center rasterization of any region.
    pub fn rasterize(region: &dyn Region, origin: Point, h: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::from_fn(region.dim(), origin, h, nx, ny, |p| region.contains(p))
    }

    /// Square `n × n` window `[-half, half]²` (or `[-half, half]` in 1D).
    pub fn centered_window(dim: usize, half: f64, n: usize, inside: impl Fn(Point) -> bool) -> Result<Self> {
        let h = 2.0 * half / n as f64;
        Self::from_fn(dim, [-half, -half], h, n, n, inside)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn occupied(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.nx + i]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn volume(&self) -> Result<f64> {
        match self.count() {
            0 => Err(Error::EmptySet),
            c => Ok(c as f64 * self.h.powi(self.dim as i32)),
        }
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        let x = self.origin[0] + (i as f64 + 0.5) * self.h;
        if self.dim == 1 {
            [x, 0.0]
        } else {
            [x, self.origin[1] + (j as f64 + 0.5) * self.h]
        }
    }

    /// Inclusive index box `(i0, i1, j0, j1)` of occupied cells.
    pub fn occupied_bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let mut b: Option<(usize, usize, usize, usize)> = None;
        for j in 0..self.ny {
            for i in 0..self.nx {
                if self.occupied(i, j) {
                    b = Some(match b {
                        None => (i, i, j, j),
                        Some((a, c, d, e)) => (a.min(i), c.max(i), d.min(j), e.max(j)),
                    });
                }
            }
        }
        b
    }

    /// Sub-grid restricted to the occupied bounding box.
    pub fn cropped(&self) -> Result<Self> {
        let (i0, i1, j0, j1) = self.occupied_bbox().ok_or(Error::EmptySet)?;
        let nx = i1 - i0 + 1;
        let ny = j1 - j0 + 1;
        let mut cells = Vec::with_capacity(nx * ny);
        for j in j0..=j1 {
            cells.extend_from_slice(&self.cells[j * self.nx + i0..j * self.nx + i1 + 1]);
        }
        let origin = [
            self.origin[0] + i0 as f64 * self.h,
            self.origin[1] + j0 as f64 * self.h,
        ];
        Self::new(self.dim, origin, self.h, nx, ny, cells)
    }

    /// Same occupancy with the whole window translated by `shift`.
    pub fn translated(&self, shift: Point) -> Self {
        let mut g = self.clone();
        g.origin[0] += shift[0];
        if self.dim == 2 {
            g.origin[1] += shift[1];
        }
        g
    }

    /// Same occupancy and window with spacing `h·factor`, about the origin.
    pub fn with_spacing(&self, h: f64) -> Result<Self> {
        let f = h / self.h;
        Self::new(
            self.dim,
            [self.origin[0] * f, self.origin[1] * f],
            h,
            self.nx,
            self.ny,
            self.cells.clone(),
        )
    }

    /// Move the occupancy by whole cells inside the same window.
    pub fn shift_cells(&self, di: isize, dj: isize) -> Result<Self> {
        let mut cells = vec![false; self.cells.len()];
        for j in 0..self.ny {
            for i in 0..self.nx {
                if !self.occupied(i, j) {
                    continue;
                }
                let ni = i as isize + di;
                let nj = j as isize + dj;
                if ni < 0 || nj < 0 || ni >= self.nx as isize || nj >= self.ny as isize {
                    return Err(Error::WindowTooSmall(format!(
                        "shift ({di}, {dj}) moves occupied cells outside the window"
                    )));
                }
                cells[nj as usize * self.nx + ni as usize] = true;
            }
        }
        Self::new(self.dim, self.origin, self.h, self.nx, self.ny, cells)
    }

    /// Window extents `(lo, hi)`.
    pub fn window(&self) -> (Point, Point) {
        let hi = [
            self.origin[0] + self.nx as f64 * self.h,
            self.origin[1] + self.ny as f64 * self.h,
        ];
        (self.origin, hi)
    }

    fn index_of(&self, p: Point) -> Option<(usize, usize)> {
        let fi = ((p[0] - self.origin[0]) / self.h).floor();
        if fi < 0.0 || fi >= self.nx as f64 {
            return None;
        }
        if self.dim == 1 {
            return Some((fi as usize, 0));
        }
        let fj = ((p[1] - self.origin[1]) / self.h).floor();
        if fj < 0.0 || fj >= self.ny as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    /// Rows as `'0'/'1'` strings, bottom row first.
    pub fn rows(&self) -> Vec<String> {
        (0..self.ny)
            .map(|j| {
                (0..self.nx)
                    .map(|i| if self.occupied(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

impl Region for GridSet {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, p: Point) -> bool {
        self.index_of(p).is_some_and(|(i, j)| self.occupied(i, j))
    }

    fn bounding_box(&self) -> (Point, Point) {
        match self.occupied_bbox() {
            Some((i0, i1, j0, j1)) => {
                let lo = [
                    self.origin[0] + i0 as f64 * self.h,
                    self.origin[1] + j0 as f64 * self.h,
                ];
                let hi = [
                    self.origin[0] + (i1 + 1) as f64 * self.h,
                    self.origin[1] + (j1 + 1) as f64 * self.h,
                ];
                (lo, hi)
            }
            None => (self.origin, self.origin),
        }
    }

    fn volume(&self) -> f64 {
        self.count() as f64 * self.h.powi(self.dim as i32)
    }
}

impl Region for &GridSet {
    fn dim(&self) -> usize {
        (*self).dim
    }
    fn contains(&self, p: Point) -> bool {
        Region::contains(*self, p)
    }
    fn bounding_box(&self) -> (Point, Point) {
        Region::bounding_box(*self)
    }
    fn volume(&self) -> f64 {
        Region::volume(*self)
    }
}
