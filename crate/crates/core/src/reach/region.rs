//! Lazily evaluated membership of grid cells in the projected intersection of
//! the auxiliary surface and the feasible domain.

use std::cell::{Cell, RefCell};

use nalgebra::Point3;

use crate::domain::{FeasibleSet, PitdDomain};
use crate::grid::{CellIndex, GridGeometry, MOORE_CLOCKWISE};
use crate::surface::SurfaceSource;
use crate::terrain::LayeredGridMap;

use super::CellSet;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegionConfig {
    /// Require a feasible vertical climb between a cell and each feasible
    /// neighbor whose surface height differs by more than half a cell.
    pub cliff_connectors: bool,
}

impl Default for RegionConfig {
    fn default() -> Self {
        Self { cliff_connectors: true }
    }
}

const UNKNOWN: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// Cell `c` belongs to the region when the surface point above its center is
/// feasible and, with connectors enabled, the leg can move vertically at `c`
/// to the shared free height of every feasible neighbor.
///
/// Results are memoized, so each cell is evaluated at most once. Only cells
/// within leg reach of the hip path are considered at all.
pub struct IntersectionRegion<'a, S, D = PitdDomain<'a>> {
    map: &'a LayeredGridMap,
    dom: &'a D,
    surface: S,
    config: RegionConfig,
    /// Inclusive cell window `[lo, hi]`.
    lo: CellIndex,
    hi: CellIndex,
    stride: usize,
    base: RefCell<Vec<u8>>,
    full: RefCell<Vec<u8>>,
    heights: RefCell<Vec<f64>>,
    evaluations: Cell<usize>,
}

impl<'a, S: SurfaceSource, D: FeasibleSet> IntersectionRegion<'a, S, D> {
    pub fn new(map: &'a LayeredGridMap, dom: &'a D, surface: S, config: RegionConfig) -> Self {
        let g = map.geometry();
        let slack = g.resolution;
        let (lo, hi) = dom.xy_bounds();
        let (x0, y0, x1, y1) = (lo.x - slack, lo.y - slack, hi.x + slack, hi.y + slack);
        let (u0, v0) = g.continuous_index(&nalgebra::Point2::new(x0, y0));
        let (u1, v1) = g.continuous_index(&nalgebra::Point2::new(x1, y1));
        let clamp_i = |u: f64| (u as isize).clamp(0, g.rows as isize - 1);
        let clamp_j = |v: f64| (v as isize).clamp(0, g.cols as isize - 1);
        let lo = CellIndex::new(clamp_i(u0.floor()), clamp_j(v0.floor()));
        let hi = CellIndex::new(clamp_i(u1.ceil()), clamp_j(v1.ceil()));
        let rows = (hi.i - lo.i + 1) as usize;
        let stride = (hi.j - lo.j + 1) as usize;
        let n = rows * stride;
        Self {
            map,
            dom,
            surface,
            config,
            lo,
            hi,
            stride,
            base: RefCell::new(vec![UNKNOWN; n]),
            full: RefCell::new(vec![UNKNOWN; n]),
            heights: RefCell::new(vec![f64::NAN; n]),
            evaluations: Cell::new(0),
        }
    }

    pub fn map(&self) -> &'a LayeredGridMap {
        self.map
    }

    pub fn domain(&self) -> &'a D {
        self.dom
    }

    pub fn surface(&self) -> &S {
        &self.surface
    }

    /// Inclusive window of cells that can possibly be members.
    pub fn window(&self) -> (CellIndex, CellIndex) {
        (self.lo, self.hi)
    }

    /// Number of feasibility oracle calls made so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations.get()
    }

    #[inline]
    fn slot(&self, c: CellIndex) -> Option<usize> {
        if c.i < self.lo.i || c.j < self.lo.j || c.i > self.hi.i || c.j > self.hi.j {
            return None;
        }
        Some((c.i - self.lo.i) as usize * self.stride + (c.j - self.lo.j) as usize)
    }

    /// Auxiliary surface height at the cell center.
    pub fn height(&self, c: CellIndex) -> f64 {
        match self.slot(c) {
            Some(k) => {
                let cached = self.heights.borrow()[k];
                if !cached.is_nan() {
                    return cached;
                }
                let h = self.surface.height(c);
                self.heights.borrow_mut()[k] = h;
                h
            }
            None => self.surface.height(c),
        }
    }

    /// Surface point above the cell center.
    pub fn lift(&self, c: CellIndex) -> Point3<f64> {
        let xy = self.map.geometry().cell_center(c);
        Point3::new(xy.x, xy.y, self.height(c))
    }

    fn feasible(&self, p: &Point3<f64>) -> bool {
        self.evaluations.set(self.evaluations.get() + 1);
        self.dom.contains(p)
    }

    /// Feasibility of the surface point alone, without connectors.
    pub fn base_member(&self, c: CellIndex) -> bool {
        let Some(k) = self.slot(c) else { return false };
        match self.base.borrow()[k] {
            IN => return true,
            OUT => return false,
            _ => {}
        }
        let inside = self.feasible(&self.lift(c));
        self.base.borrow_mut()[k] = if inside { IN } else { OUT };
        inside
    }

    fn evaluate(&self, c: CellIndex) -> bool {
        if !self.base_member(c) {
            return false;
        }
        if !self.config.cliff_connectors {
            return true;
        }
        let res = self.map.geometry().resolution;
        let (ga, ca, sa) = (self.map.ground_cell(c), self.map.ceiling_cell(c), self.height(c));
        let xy = self.map.geometry().cell_center(c);
        let mut climbs: [(f64, f64); 8] = [(0.0, 0.0); 8];
        let mut count = 0;
        for (di, dj) in MOORE_CLOCKWISE {
            let b = c.offset(di, dj);
            if self.slot(b).is_none() {
                continue;
            }
            // Geometry first: the oracle is only consulted for neighbors
            // that would constrain `c`.
            let lo = ga.max(self.map.ground_cell(b));
            let hi = ca.min(self.map.ceiling_cell(b));
            let target = sa.max(self.height(b)).min(hi);
            let climb = (target - sa).abs() > 0.5 * res;
            if !(lo > hi || climb) || !self.base_member(b) {
                continue;
            }
            if lo > hi {
                return false;
            }
            climbs[count] = (sa.min(target), sa.max(target));
            count += 1;
        }
        if count == 0 {
            return true;
        }
        // Sample the union of the vertical spans once, from the surface outward.
        let (mut bottom, mut top) = (sa, sa);
        for &(a, b) in &climbs[..count] {
            bottom = bottom.min(a);
            top = top.max(b);
        }
        let step = 0.5 * res;
        for (from, to) in [(sa, top), (sa, bottom)] {
            let span = (to - from).abs();
            if span <= 0.0 {
                continue;
            }
            let n = (span / step).ceil() as usize;
            for s in 1..=n {
                let z = from + (to - from) * s as f64 / n as f64;
                if !self.feasible(&Point3::new(xy.x, xy.y, z)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether a foot at `foot` can move in a straight line to the surface
    /// point above `c` through feasible, unoccupied space.
    pub fn connects(&self, foot: &Point3<f64>, c: CellIndex) -> bool {
        let target = self.lift(c);
        let step = 0.5 * self.map.geometry().resolution;
        let n = ((target - foot).norm() / step).ceil().max(1.0) as usize;
        (0..=n).all(|s| {
            let x = foot + (target - foot) * (s as f64 / n as f64);
            !self.map.is_occupied(&x).unwrap_or(true) && self.feasible(&x)
        })
    }

    /// Evaluates every cell in the window.
    pub fn materialize(&self) -> super::BoolGrid {
        super::BoolGrid::from_fn(*self.map.geometry(), |c| self.is_member(c))
    }
}

impl<S: SurfaceSource, D: FeasibleSet> CellSet for IntersectionRegion<'_, S, D> {
    fn geometry(&self) -> &GridGeometry {
        self.map.geometry()
    }

    fn is_member(&self, c: CellIndex) -> bool {
        let Some(k) = self.slot(c) else { return false };
        match self.full.borrow()[k] {
            IN => return true,
            OUT => return false,
            _ => {}
        }
        let inside = self.evaluate(c);
        self.full.borrow_mut()[k] = if inside { IN } else { OUT };
        inside
    }
}
