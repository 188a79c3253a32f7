//! Regular 2D grid geometry shared by maps, surfaces and regions.
//!
//! Cell `(i, j)` has its center at `origin + (i, j) * resolution`; `i` runs
//! along world x and `j` along world y.

use nalgebra::Point2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub i: isize,
    pub j: isize,
}

impl CellIndex {
    pub const fn new(i: isize, j: isize) -> Self {
        Self { i, j }
    }

    pub fn offset(self, di: isize, dj: isize) -> Self {
        Self::new(self.i + di, self.j + dj)
    }
}

impl From<(isize, isize)> for CellIndex {
    fn from((i, j): (isize, isize)) -> Self {
        Self::new(i, j)
    }
}

/// The eight Moore neighbors in clockwise order (world frame, x right, y up),
/// starting at +x.
pub const MOORE_CLOCKWISE: [(isize, isize); 8] = [
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub resolution: f64,
    pub origin: [f64; 2],
    pub rows: usize,
    pub cols: usize,
}

impl GridGeometry {
    pub fn new(resolution: f64, origin: [f64; 2], rows: usize, cols: usize) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(invalid(format!("resolution must be positive, got {resolution}")));
        }
        if rows == 0 || cols == 0 {
            return Err(invalid("grid size must be positive"));
        }
        if !origin.iter().all(|v| v.is_finite()) {
            return Err(invalid("grid origin must be finite"));
        }
        Ok(Self { resolution, origin, rows, cols })
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_cell(&self, c: CellIndex) -> bool {
        c.i >= 0 && c.j >= 0 && (c.i as usize) < self.rows && (c.j as usize) < self.cols
    }

    /// Row-major flat index; caller guarantees `contains_cell`.
    #[inline]
    pub fn flat(&self, c: CellIndex) -> usize {
        c.i as usize * self.cols + c.j as usize
    }

    pub fn cell_at_flat(&self, k: usize) -> CellIndex {
        CellIndex::new((k / self.cols) as isize, (k % self.cols) as isize)
    }

    #[inline]
    pub fn cell_center(&self, c: CellIndex) -> Point2<f64> {
        Point2::new(
            self.origin[0] + c.i as f64 * self.resolution,
            self.origin[1] + c.j as f64 * self.resolution,
        )
    }

    /// Whether `p` lies on the area covered by the grid cells (centers plus a
    /// half-cell border).
    pub fn contains_point(&self, p: &Point2<f64>) -> bool {
        let h = 0.5 * self.resolution;
        let (lo, hi) = self.extent();
        p.x >= lo.x - h && p.x <= hi.x + h && p.y >= lo.y - h && p.y <= hi.y + h
    }

    /// World positions of the first and last cell centers.
    pub fn extent(&self) -> (Point2<f64>, Point2<f64>) {
        let lo = Point2::new(self.origin[0], self.origin[1]);
        let hi = Point2::new(
            self.origin[0] + (self.rows - 1) as f64 * self.resolution,
            self.origin[1] + (self.cols - 1) as f64 * self.resolution,
        );
        (lo, hi)
    }

    /// Nearest cell to a world point, without bounds checking.
    #[inline]
    pub fn nearest_cell_unchecked(&self, p: &Point2<f64>) -> CellIndex {
        CellIndex::new(
            ((p.x - self.origin[0]) / self.resolution).round() as isize,
            ((p.y - self.origin[1]) / self.resolution).round() as isize,
        )
    }

    pub fn nearest_cell(&self, p: &Point2<f64>) -> Result<CellIndex> {
        if !self.contains_point(p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let c = self.nearest_cell_unchecked(p);
        Ok(CellIndex::new(
            c.i.clamp(0, self.rows as isize - 1),
            c.j.clamp(0, self.cols as isize - 1),
        ))
    }

    /// Continuous cell coordinates of a world point.
    #[inline]
    pub fn continuous_index(&self, p: &Point2<f64>) -> (f64, f64) {
        (
            (p.x - self.origin[0]) / self.resolution,
            (p.y - self.origin[1]) / self.resolution,
        )
    }

    pub fn same_shape(&self, other: &GridGeometry) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (self.resolution - other.resolution).abs() <= 1e-12
            && (self.origin[0] - other.origin[0]).abs() <= 1e-12
            && (self.origin[1] - other.origin[1]).abs() <= 1e-12
    }

    /// Bilinear interpolation of row-major cell values, edge values held in
    /// the half-cell border. Cell centers return their stored value exactly.
    pub fn bilinear(&self, values: &[f64], p: &Point2<f64>) -> f64 {
        let (u, v) = self.continuous_index(p);
        let (i0, fu) = split_axis(u, self.rows);
        let (j0, fv) = split_axis(v, self.cols);
        let i1 = (i0 + 1).min(self.rows - 1);
        let j1 = (j0 + 1).min(self.cols - 1);
        let at = |i: usize, j: usize| values[i * self.cols + j];
        let a = at(i0, j0) * (1.0 - fv) + at(i0, j1) * fv;
        let b = at(i1, j0) * (1.0 - fv) + at(i1, j1) * fv;
        a * (1.0 - fu) + b * fu
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.rows as isize).flat_map(move |i| (0..self.cols as isize).map(move |j| CellIndex::new(i, j)))
    }
}

fn split_axis(u: f64, n: usize) -> (usize, f64) {
    if n == 1 {
        return (0, 0.0);
    }
    let mut u = u.clamp(0.0, (n - 1) as f64);
    if (u - u.round()).abs() < 1e-9 {
        u = u.round();
    }
    let i0 = (u.floor() as usize).min(n - 2);
    (i0, u - i0 as f64)
}
