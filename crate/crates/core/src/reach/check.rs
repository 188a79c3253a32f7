//! Single-query reachability verdict.

use std::cell::OnceCell;
use std::collections::VecDeque;

use nalgebra::{Point2, Point3};
use serde::{Deserialize, Serialize};

use crate::domain::{FeasibleSet, PitdDomain};
use crate::error::{invalid, Result};
use crate::grid::{CellIndex, GridGeometry};
use crate::surface::SurfaceSource;
use crate::terrain::LayeredGridMap;

use super::{concave_points, trace_border, visible, BoolGrid, CellSet, IntersectionBorder, IntersectionRegion, RegionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReachConfig {
    pub region: RegionConfig,
    pub order: CheckOrder,
}

/// When the start-side border is traced. Verdicts agree across orders;
/// only the work done for directly visible goals differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOrder {
    /// Test direct visibility first and trace the border only if it fails.
    #[default]
    VisibleFirst,
    /// Always trace the border and find concave points before any
    /// visibility test.
    BorderFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The goal is directly visible from the start.
    Visible,
    /// The goal is visible from a concave border point.
    ViaConcave,
    /// Border unusable for the visibility argument; decided by flood fill.
    FloodFill,
    /// The start cannot be moved onto the region.
    StartDetached,
    /// The goal cell is not a region member or cannot be reached from it.
    GoalOutside,
    /// No visible connection found.
    Blocked,
}

impl Verdict {
    pub fn reachable(self) -> bool {
        matches!(self, Verdict::Visible | Verdict::ViaConcave | Verdict::FloodFill)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityResult {
    pub reachable: bool,
    pub verdict: Verdict,
    pub p_cell: CellIndex,
    pub q_cell: CellIndex,
    pub border: Option<IntersectionBorder>,
    pub concave: Vec<CellIndex>,
    /// Cell polyline from the start cell to the goal cell when reachable.
    pub witness: Vec<CellIndex>,
}

/// Border structure around the start cell, for goals not directly visible.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub border: IntersectionBorder,
    pub concave: Vec<CellIndex>,
    /// Edge-connected component of the start cell, when the border alone
    /// cannot certify connectivity.
    pub component: Option<BoolGrid>,
}

/// Start-side work for one region, computed on first use and shared by
/// every goal checked against that region.
pub(crate) struct StartSide<'a, 'r, S, D> {
    region: &'a IntersectionRegion<'r, S, D>,
    p: Point3<f64>,
    cell: OnceCell<Option<CellIndex>>,
    prepared: OnceCell<Prepared>,
}

impl<'a, 'r, S: SurfaceSource, D: FeasibleSet> StartSide<'a, 'r, S, D> {
    /// The caller has already checked that `p` itself is feasible.
    pub fn new(region: &'a IntersectionRegion<'r, S, D>, p: Point3<f64>) -> Self {
        Self { region, p, cell: OnceCell::new(), prepared: OnceCell::new() }
    }

    /// Region cell the start is attached to.
    pub fn cell(&self) -> Option<CellIndex> {
        *self.cell.get_or_init(|| {
            anchor_cells(self.region.map().geometry(), &self.p.xy())
                .into_iter()
                .find(|c| attached(self.region, &self.p, *c))
        })
    }

    pub fn prepared(&self, p_cell: CellIndex) -> Result<&Prepared> {
        if let Some(p) = self.prepared.get() {
            return Ok(p);
        }
        let border = trace_border(self.region, p_cell)?;
        let prep = if border.degenerate || border.pinched {
            let component = flood_component(self.region, p_cell);
            Prepared { border, concave: Vec::new(), component: Some(component) }
        } else {
            let concave = concave_points(&border, self.region);
            Prepared { border, concave, component: None }
        };
        Ok(self.prepared.get_or_init(|| prep))
    }
}

/// Cells whose centers surround `xy` (up to four), nearest first.
pub(crate) fn anchor_cells(g: &GridGeometry, xy: &Point2<f64>) -> Vec<CellIndex> {
    let (u, v) = g.continuous_index(xy);
    let (i0, j0) = (u.floor() as isize, v.floor() as isize);
    let mut out: Vec<CellIndex> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|(di, dj)| CellIndex::new(i0 + di, j0 + dj))
        .filter(|c| g.contains_cell(*c))
        .collect();
    let d = |c: &CellIndex| (g.cell_center(*c) - xy).norm_squared();
    out.sort_by(|a, b| d(a).total_cmp(&d(b)));
    out
}

/// Whether `c` is a region member reachable from `foot` in a straight
/// checked line.
fn attached<S: SurfaceSource, D: FeasibleSet>(region: &IntersectionRegion<'_, S, D>, foot: &Point3<f64>, c: CellIndex) -> bool {
    region.is_member(c) && region.connects(foot, c)
}

/// Verdict for one goal. Cheap checks run first: goal attachment, then
/// direct visibility; the border is traced only when both pass and the goal
/// is not in plain sight.
pub(crate) fn answer<S: SurfaceSource, D: FeasibleSet>(
    start: &StartSide<'_, '_, S, D>,
    q: &Point3<f64>,
    order: CheckOrder,
) -> Result<ReachabilityResult> {
    let region = start.region;
    let g = region.map().geometry();
    let q_nearest = g.nearest_cell(&q.xy())?;
    let mut result = ReachabilityResult {
        reachable: false,
        verdict: Verdict::GoalOutside,
        p_cell: g.nearest_cell_unchecked(&start.p.xy()),
        q_cell: q_nearest,
        border: None,
        concave: Vec::new(),
        witness: Vec::new(),
    };
    let mut anchors = anchor_cells(g, &q.xy()).into_iter();
    let Some(first) = anchors.find(|c| attached(region, q, *c)) else {
        return Ok(result);
    };
    result.q_cell = first;
    let Some(p_cell) = start.cell() else {
        result.verdict = Verdict::StartDetached;
        return Ok(result);
    };
    result.p_cell = p_cell;
    let accept = |result: &mut ReachabilityResult, verdict: Verdict, q_cell: CellIndex, witness: Vec<CellIndex>| {
        result.reachable = true;
        result.verdict = verdict;
        result.q_cell = q_cell;
        result.witness = witness;
    };
    if order == CheckOrder::BorderFirst {
        let prep = start.prepared(p_cell)?;
        result.border = Some(prep.border.clone());
        result.concave = prep.concave.clone();
    }
    if visible(region, p_cell, first) {
        accept(&mut result, Verdict::Visible, first, vec![p_cell, first]);
        return Ok(result);
    }
    let mut goals = vec![first];
    for c in anchors.filter(|c| attached(region, q, *c)) {
        if visible(region, p_cell, c) {
            accept(&mut result, Verdict::Visible, c, vec![p_cell, c]);
            return Ok(result);
        }
        goals.push(c);
    }
    let prep = start.prepared(p_cell)?;
    result.border = Some(prep.border.clone());
    result.concave = prep.concave.clone();
    if let Some(component) = &prep.component {
        if let Some(&qc) = goals.iter().find(|c| component.is_member(**c)) {
            accept(&mut result, Verdict::FloodFill, qc, vec![p_cell, qc]);
        }
        return Ok(result);
    }
    for c in &prep.concave {
        if let Some(&qc) = goals.iter().find(|qc| visible(region, *c, **qc)) {
            accept(&mut result, Verdict::ViaConcave, qc, vec![p_cell, *c, qc]);
            return Ok(result);
        }
    }
    result.verdict = Verdict::Blocked;
    Ok(result)
}

/// Decides whether the swing foot can move from `p` to `q` on the auxiliary
/// surface inside the feasible domain. A positive verdict comes with a
/// witness polyline of region cells.
pub fn check_reachability<S: SurfaceSource>(
    map: &LayeredGridMap,
    dom: &PitdDomain<'_>,
    surface: S,
    p: &Point3<f64>,
    q: &Point3<f64>,
    config: &ReachConfig,
) -> Result<ReachabilityResult> {
    let region = IntersectionRegion::new(map, dom, surface, config.region);
    check_with_order(&region, p, q, config.order)
}

pub fn check_with_region<S: SurfaceSource, D: FeasibleSet>(
    region: &IntersectionRegion<'_, S, D>,
    p: &Point3<f64>,
    q: &Point3<f64>,
) -> Result<ReachabilityResult> {
    check_with_order(region, p, q, CheckOrder::default())
}

pub fn check_with_order<S: SurfaceSource, D: FeasibleSet>(
    region: &IntersectionRegion<'_, S, D>,
    p: &Point3<f64>,
    q: &Point3<f64>,
    order: CheckOrder,
) -> Result<ReachabilityResult> {
    region.map().geometry().nearest_cell(&p.xy())?;
    ensure_start_feasible(region.domain(), p)?;
    let mut result = answer(&StartSide::new(region, *p), q, order)?;
    if result.reachable && result.verdict == Verdict::FloodFill {
        if let Some(path) = grid_path(region, result.p_cell, result.q_cell) {
            result.witness = path;
        }
    }
    Ok(result)
}

pub(crate) fn ensure_start_feasible<D: FeasibleSet>(dom: &D, p: &Point3<f64>) -> Result<()> {
    if dom.contains(p) {
        Ok(())
    } else {
        Err(invalid(format!("start foothold ({:.3}, {:.3}, {:.3}) is not feasible", p.x, p.y, p.z)))
    }
}

const EDGE_NEIGHBORS: [(isize, isize); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Edge-connected component of `seed` among members.
pub fn flood_component<M: CellSet>(m: &M, seed: CellIndex) -> BoolGrid {
    let g = *m.geometry();
    let mut out = BoolGrid::from_fn(g, |_| false);
    if !m.is_member(seed) {
        return out;
    }
    let mut queue = VecDeque::from([seed]);
    out.set(seed, true);
    while let Some(c) = queue.pop_front() {
        for (di, dj) in EDGE_NEIGHBORS {
            let n = c.offset(di, dj);
            if !out.is_member(n) && m.is_member(n) {
                out.set(n, true);
                queue.push_back(n);
            }
        }
    }
    out
}

/// Shortest edge-connected member path between two cells (breadth first).
pub(crate) fn grid_path<M: CellSet>(m: &M, from: CellIndex, to: CellIndex) -> Option<Vec<CellIndex>> {
    let g = *m.geometry();
    if !m.is_member(from) || !m.is_member(to) {
        return None;
    }
    let mut parent: Vec<Option<CellIndex>> = vec![None; g.len()];
    let mut seen = vec![false; g.len()];
    seen[g.flat(from)] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        if c == to {
            let mut path = vec![c];
            let mut cur = c;
            while let Some(p) = parent[g.flat(cur)] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for (di, dj) in EDGE_NEIGHBORS {
            let n = c.offset(di, dj);
            if g.contains_cell(n) && !seen[g.flat(n)] && m.is_member(n) {
                seen[g.flat(n)] = true;
                parent[g.flat(n)] = Some(c);
                queue.push_back(n);
            }
        }
    }
    None
}
