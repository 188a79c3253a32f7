//! Reachability over a lattice of candidate footholds.

use std::time::Instant;

use nalgebra::{Point2, Point3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainConfig, PitdDomain};
use crate::error::Result;
use crate::leg::LegModel;
use crate::pose::Pose;
use crate::sdf::SignedDistanceField;
use crate::surface::{default_keypoints, ConvAuxiliary, KeypointAuxiliary};
use crate::terrain::LayeredGridMap;

use super::check::{answer, ensure_start_feasible, CheckOrder, StartSide};
use super::{IntersectionRegion, RegionConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceMode {
    /// Keypoint guide through each candidate; region and border rebuilt per candidate.
    Keypoint,
    /// One convolutional guide; region and border built once per leg.
    Conv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateLattice {
    pub center: [f64; 2],
    pub rows: usize,
    pub cols: usize,
    pub spacing: f64,
}

/// `rows x cols` points spaced `spacing` apart, centered on `center`.
pub fn candidate_lattice(center: Point2<f64>, rows: usize, cols: usize, spacing: f64) -> CandidateLattice {
    CandidateLattice { center: [center.x, center.y], rows, cols, spacing }
}

impl CandidateLattice {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major; row index runs along x.
    pub fn point(&self, row: usize, col: usize) -> Point2<f64> {
        let off = |k: usize, n: usize| (k as f64 - 0.5 * (n as f64 - 1.0)) * self.spacing;
        Point2::new(self.center[0] + off(row, self.rows), self.center[1] + off(col, self.cols))
    }

    pub fn points(&self) -> Vec<Point2<f64>> {
        (0..self.rows).flat_map(|r| (0..self.cols).map(move |c| (r, c))).map(|(r, c)| self.point(r, c)).collect()
    }

    /// Keeps every `step`-th row and column, starting at `offset`.
    pub fn subsample(&self, step: usize, offset: usize) -> Vec<(usize, usize)> {
        (offset..self.rows)
            .step_by(step)
            .flat_map(|r| (offset..self.cols).step_by(step).map(move |c| (r, c)))
            .collect()
    }

    /// Candidate footholds on the ground; `None` outside the map.
    pub fn footholds(&self, map: &LayeredGridMap) -> Vec<Option<Point3<f64>>> {
        self.points()
            .into_iter()
            .map(|xy| map.ground_at(xy).ok().map(|z| Point3::new(xy.x, xy.y, z)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub mode: SurfaceMode,
    pub domain: DomainConfig,
    pub region: RegionConfig,
    pub order: CheckOrder,
    pub keypoint_exponent: f64,
    pub intermediate_keypoints: usize,
    pub conv_kernel: usize,
    pub conv_spacing: f64,
    /// Raise of the convolutional guide above the smoothed ground.
    pub conv_offset: f64,
    /// Evaluate keypoint-mode candidates on the rayon pool.
    pub parallel: bool,
}

impl BatchConfig {
    pub fn keypoint() -> Self {
        Self {
            mode: SurfaceMode::Keypoint,
            domain: DomainConfig::default(),
            region: RegionConfig::default(),
            order: CheckOrder::VisibleFirst,
            keypoint_exponent: 1.0,
            intermediate_keypoints: 3,
            conv_kernel: 5,
            conv_spacing: 0.03,
            conv_offset: 0.02,
            parallel: false,
        }
    }

    pub fn conv() -> Self {
        Self { mode: SurfaceMode::Conv, ..Self::keypoint() }
    }
}

impl Default for BatchConfig {
    fn default() -> Self {
        Self::keypoint()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityMatrix {
    pub rows: usize,
    pub cols: usize,
    pub lattice: CandidateLattice,
    /// Row-major verdicts.
    pub reachable: Vec<bool>,
    /// Row-major per-candidate wall-clock time.
    pub nanos: Vec<u64>,
    /// Wall-clock time of the whole batch, shared setup included.
    pub total_nanos: u64,
    /// Row-major cell polylines of positive verdicts.
    pub witnesses: Vec<Vec<crate::grid::CellIndex>>,
}

impl ReachabilityMatrix {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.reachable[row * self.cols + col]
    }

    pub fn count(&self) -> usize {
        self.reachable.iter().filter(|v| **v).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            let row: Vec<&str> = (0..self.cols).map(|c| if self.get(r, c) { "1" } else { "0" }).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Inputs shared by every candidate of one swing leg.
#[derive(Debug, Clone, Copy)]
pub struct SwingSetup<'a> {
    pub map: &'a LayeredGridMap,
    pub sdf: &'a SignedDistanceField,
    pub leg: &'a LegModel,
    pub leg_index: usize,
    pub start_pose: Pose,
    pub end_pose: Pose,
    /// Lift-off foothold.
    pub p: Point3<f64>,
}

/// Evaluates the candidates selected by `cells` (all when `None`). Cells not
/// selected are reported unreachable with zero time.
pub fn batch_check(
    setup: &SwingSetup<'_>,
    lattice: &CandidateLattice,
    cells: Option<&[(usize, usize)]>,
    config: &BatchConfig,
) -> Result<ReachabilityMatrix> {
    let started = Instant::now();
    let footholds = lattice.footholds(setup.map);
    let all: Vec<(usize, usize)>;
    let cells = match cells {
        Some(c) => c,
        None => {
            all = (0..lattice.rows).flat_map(|r| (0..lattice.cols).map(move |c| (r, c))).collect();
            &all
        }
    };
    let n = lattice.len();
    let mut matrix = ReachabilityMatrix {
        rows: lattice.rows,
        cols: lattice.cols,
        lattice: *lattice,
        reachable: vec![false; n],
        nanos: vec![0; n],
        total_nanos: 0,
        witnesses: vec![Vec::new(); n],
    };
    let center = Point2::new(lattice.center[0], lattice.center[1]);
    let nominal = Point3::new(center.x, center.y, setup.map.ground_at(center).unwrap_or(setup.p.z));
    let domain_for = |q: &Point3<f64>| {
        PitdDomain::new(setup.leg_index, setup.leg, setup.sdf, setup.start_pose, setup.end_pose, (setup.p, *q), config.domain)
    };
    ensure_start_feasible(&domain_for(&nominal), &setup.p)?;
    setup.map.geometry().nearest_cell(&setup.p.xy())?;

    match config.mode {
        SurfaceMode::Keypoint => {
            let run = |&(r, c): &(usize, usize)| -> Result<(usize, bool, u64, Vec<crate::grid::CellIndex>)> {
                let k = r * lattice.cols + c;
                let t0 = Instant::now();
                let Some(q) = footholds[k] else { return Ok((k, false, 0, Vec::new())) };
                let dom = domain_for(&q);
                // Attaching the goal needs `q` itself to be feasible.
                if !dom.contains(&q) {
                    return Ok((k, false, t0.elapsed().as_nanos() as u64, Vec::new()));
                }
                let keypoints = default_keypoints(&setup.p, &q, config.intermediate_keypoints);
                let surface = KeypointAuxiliary::new(setup.map, keypoints, config.keypoint_exponent)?;
                let region = IntersectionRegion::new(setup.map, &dom, surface, config.region);
                let res = answer(&StartSide::new(&region, setup.p), &q, config.order)?;
                Ok((k, res.reachable, t0.elapsed().as_nanos() as u64, res.witness))
            };
            let results: Vec<_> = if config.parallel {
                cells.par_iter().map(run).collect::<Result<Vec<_>>>()?
            } else {
                cells.iter().map(run).collect::<Result<Vec<_>>>()?
            };
            for (k, ok, ns, w) in results {
                matrix.reachable[k] = ok;
                matrix.nanos[k] = ns;
                matrix.witnesses[k] = w;
            }
        }
        SurfaceMode::Conv => {
            let dom = domain_for(&nominal);
            let surface = ConvAuxiliary::new(setup.map, config.conv_kernel, config.conv_spacing, config.conv_offset)?;
            let region = IntersectionRegion::new(setup.map, &dom, surface, config.region);
            let start = StartSide::new(&region, setup.p);
            for &(r, c) in cells {
                let k = r * lattice.cols + c;
                let t0 = Instant::now();
                let Some(q) = footholds[k] else { continue };
                // The shared domain does not place the candidate at the end of
                // the base motion, so touch-down is checked on its own.
                if dom.contains_at(&q, 1.0) {
                    let res = answer(&start, &q, config.order)?;
                    matrix.reachable[k] = res.reachable;
                    matrix.witnesses[k] = res.witness;
                }
                matrix.nanos[k] = t0.elapsed().as_nanos() as u64;
            }
        }
    }
    matrix.total_nanos = started.elapsed().as_nanos() as u64;
    Ok(matrix)
}
