//! Reachability decision on the intersection of the auxiliary surface with
//! the feasible domain, projected onto the map grid.

mod batch;
mod border;
mod check;
mod concave;
mod graph;
mod region;
mod visibility;

pub use batch::{batch_check, candidate_lattice, BatchConfig, CandidateLattice, ReachabilityMatrix, SurfaceMode, SwingSetup};
pub use border::{trace_border, IntersectionBorder};
pub use check::{check_reachability, check_with_order, check_with_region, flood_component, CheckOrder, ReachConfig, ReachabilityResult, Verdict};
pub use concave::concave_points;
pub use graph::{polyline_length, VisibilityGraph};
pub use region::{IntersectionRegion, RegionConfig};
pub use visibility::{supercover, visible, walk_supercover};

use crate::grid::{CellIndex, GridGeometry};

/// A set of grid cells. Cells outside the grid are never members.
pub trait CellSet {
    fn geometry(&self) -> &GridGeometry;

    fn is_member(&self, c: CellIndex) -> bool;
}

impl<T: CellSet + ?Sized> CellSet for &T {
    fn geometry(&self) -> &GridGeometry {
        (**self).geometry()
    }

    fn is_member(&self, c: CellIndex) -> bool {
        (**self).is_member(c)
    }
}

/// Explicit boolean membership over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoolGrid {
    geometry: GridGeometry,
    cells: Vec<bool>,
}

impl BoolGrid {
    pub fn new(geometry: GridGeometry, cells: Vec<bool>) -> crate::Result<Self> {
        if cells.len() != geometry.len() {
            return Err(crate::error::invalid("membership size does not match grid"));
        }
        Ok(Self { geometry, cells })
    }

    pub fn from_fn(geometry: GridGeometry, f: impl Fn(CellIndex) -> bool) -> Self {
        let cells = geometry.cells().map(f).collect();
        Self { geometry, cells }
    }

    pub fn set(&mut self, c: CellIndex, value: bool) {
        if self.geometry.contains_cell(c) {
            let k = self.geometry.flat(c);
            self.cells[k] = value;
        }
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|v| **v).count()
    }
}

impl CellSet for BoolGrid {
    fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    fn is_member(&self, c: CellIndex) -> bool {
        self.geometry.contains_cell(c) && self.cells[self.geometry.flat(c)]
    }
}
