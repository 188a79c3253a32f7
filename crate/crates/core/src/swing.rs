//! Swing trajectories: initialization along the shortest region path,
//! feasibility-preserving smoothing, and the fixed-shape Hermite baseline
//! check.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{Point2, Point3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::PitdDomain;
use crate::error::{invalid, Result};
use crate::grid::CellIndex;
use crate::pose::PoseInterpolator;
use crate::reach::{
    check_with_order, flood_component, visible, BatchConfig, CellSet, IntersectionRegion, ReachabilityResult, SwingSetup,
};
use crate::sdf::SignedDistanceField;
use crate::surface::{default_keypoints, KeypointAuxiliary, SurfaceSource};
use crate::terrain::{Layer, LayeredGridMap};

/// Samples per trajectory, shared by the smoother and the Hermite check.
pub const TRAJECTORY_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    /// Normalized time in `[0, 1]`.
    pub t: f64,
    pub position: [f64; 3],
}

impl Waypoint {
    pub fn point(&self) -> Point3<f64> {
        Point3::from(self.position)
    }
}

/// Time-stamped foot positions, linearly interpolated between waypoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwingTrajectory {
    pub waypoints: Vec<Waypoint>,
}

impl SwingTrajectory {
    pub fn new(waypoints: Vec<Waypoint>) -> Result<Self> {
        let traj = Self { waypoints };
        traj.validate()?;
        Ok(traj)
    }

    /// At least two waypoints, strictly increasing times from 0 to 1.
    pub fn validate(&self) -> Result<()> {
        let w = &self.waypoints;
        if w.len() < 2 {
            return Err(invalid("a trajectory needs at least two waypoints"));
        }
        if w[0].t != 0.0 || w[w.len() - 1].t != 1.0 {
            return Err(invalid("trajectory times must run from 0 to 1"));
        }
        if let Some(k) = w.windows(2).position(|p| !(p[1].t > p[0].t)) {
            return Err(invalid(format!("trajectory time does not increase at waypoint {}", k + 1)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn points(&self) -> Vec<Point3<f64>> {
        self.waypoints.iter().map(Waypoint::point).collect()
    }

    pub fn times(&self) -> Vec<f64> {
        self.waypoints.iter().map(|w| w.t).collect()
    }

    pub fn start(&self) -> Point3<f64> {
        self.waypoints[0].point()
    }

    pub fn end(&self) -> Point3<f64> {
        self.waypoints[self.len() - 1].point()
    }

    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| (w[1].point() - w[0].point()).norm()).sum()
    }

    /// Integral of squared acceleration over normalized time, from second
    /// differences on the (possibly uneven) time stamps.
    pub fn acceleration_cost(&self) -> f64 {
        acceleration_cost(&self.points(), &self.times())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z\n");
        for w in &self.waypoints {
            let [x, y, z] = w.position;
            out.push_str(&format!("{},{},{},{}\n", w.t, x, y, z));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn acceleration_cost(x: &[Point3<f64>], t: &[f64]) -> f64 {
    (1..x.len().saturating_sub(1))
        .map(|k| {
            let (h0, h1) = (t[k] - t[k - 1], t[k + 1] - t[k]);
            let a = ((x[k + 1] - x[k]) / h1 - (x[k] - x[k - 1]) / h0) * (2.0 / (h0 + h1));
            a.norm_squared() * 0.5 * (h0 + h1)
        })
        .sum()
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

fn cell_distance(a: CellIndex, b: CellIndex) -> f64 {
    (((a.i - b.i) * (a.i - b.i) + (a.j - b.j) * (a.j - b.j)) as f64).sqrt()
}

/// Members next to an obstacle corner: a diagonal neighbor is missing while
/// the two cells between them are present. Taut paths bend only here.
pub fn corner_cells<M: CellSet>(m: &M, cells: impl IntoIterator<Item = CellIndex>) -> Vec<CellIndex> {
    cells
        .into_iter()
        .filter(|&c| {
            m.is_member(c)
                && [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().any(|&(di, dj)| {
                    !m.is_member(c.offset(di, dj)) && m.is_member(c.offset(di, 0)) && m.is_member(c.offset(0, dj))
                })
        })
        .collect()
}

/// Shortest polyline of cell centers from `start` to `goal` whose segments
/// only touch member cells, found by A* over the visibility graph of the
/// corner cells in the start's edge-connected component. Lengths in cells.
pub fn shortest_region_path<M: CellSet>(m: &M, start: CellIndex, goal: CellIndex) -> Option<Vec<CellIndex>> {
    let component = flood_component(m, start);
    if !component.is_member(goal) {
        return None;
    }
    let mut nodes = vec![start, goal];
    let members = m.geometry().cells().filter(|c| component.is_member(*c));
    nodes.extend(corner_cells(m, members).into_iter().filter(|c| *c != start && *c != goal));
    let n = nodes.len();
    let mut edges: Vec<Option<Vec<(usize, f64)>>> = vec![None; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut heap = BinaryHeap::from([Entry(cell_distance(start, goal), 0)]);
    best[0] = 0.0;
    while let Some(Entry(_, u)) = heap.pop() {
        if closed[u] {
            continue;
        }
        closed[u] = true;
        if u == 1 {
            let mut path = vec![goal];
            let mut cur = 1;
            while parent[cur] != usize::MAX {
                cur = parent[cur];
                path.push(nodes[cur]);
            }
            path.reverse();
            return Some(path);
        }
        let adjacent = edges[u].get_or_insert_with(|| {
            (0..n)
                .filter(|&v| v != u && visible(m, nodes[u], nodes[v]))
                .map(|v| (v, cell_distance(nodes[u], nodes[v])))
                .collect()
        });
        for &(v, d) in adjacent.iter() {
            let cand = best[u] + d;
            if cand < best[v] {
                best[v] = cand;
                parent[v] = u;
                heap.push(Entry(cand + cell_distance(nodes[v], goal), v));
            }
        }
    }
    None
}

/// Bilinear interpolation of the region's surface heights at cell centers.
fn surface_at<S: SurfaceSource>(region: &IntersectionRegion<'_, S>, xy: &Point2<f64>) -> f64 {
    let g = region.map().geometry();
    let (u, v) = g.continuous_index(xy);
    let clamp = |x: f64, n: usize| x.clamp(0.0, (n - 1) as f64);
    let (u, v) = (clamp(u, g.rows), clamp(v, g.cols));
    let (i0, j0) = (u.floor(), v.floor());
    let (fu, fv) = (u - i0, v - j0);
    let (i0, j0) = (i0 as isize, j0 as isize);
    let i1 = (i0 + 1).min(g.rows as isize - 1);
    let j1 = (j0 + 1).min(g.cols as isize - 1);
    let h = |i, j| region.height(CellIndex::new(i, j));
    let a = h(i0, j0) * (1.0 - fv) + h(i0, j1) * fv;
    let b = h(i1, j0) * (1.0 - fv) + h(i1, j1) * fv;
    a * (1.0 - fu) + b * fu
}

/// Initial trajectory for a positive verdict: the shortest region path,
/// lifted onto the auxiliary surface, entered from `p` and left toward `q`
/// in straight lines, sampled at `samples` points of constant speed.
pub fn initialize_trajectory<S: SurfaceSource>(
    region: &IntersectionRegion<'_, S>,
    result: &ReachabilityResult,
    p: &Point3<f64>,
    q: &Point3<f64>,
    samples: usize,
) -> Result<SwingTrajectory> {
    if !result.reachable {
        return Err(invalid(format!("no trajectory for an unreachable foothold ({:?})", result.verdict)));
    }
    if samples < 2 {
        return Err(invalid("a trajectory needs at least two samples"));
    }
    let g = region.map().geometry();
    let cells = shortest_region_path(region, result.p_cell, result.q_cell)
        .or_else(|| (!result.witness.is_empty()).then(|| result.witness.clone()))
        .ok_or_else(|| invalid("reachable verdict without a region path"))?;
    let mut dense = vec![*p];
    let step = 0.25 * g.resolution;
    for w in cells.windows(2) {
        let (a, b) = (g.cell_center(w[0]), g.cell_center(w[1]));
        let n = ((b - a).norm() / step).ceil().max(1.0) as usize;
        for k in 0..n {
            let xy = a + (b - a) * (k as f64 / n as f64);
            dense.push(Point3::new(xy.x, xy.y, surface_at(region, &xy)));
        }
    }
    dense.push(region.lift(*cells.last().expect("non-empty path")));
    dense.push(*q);
    // Chords of the bilinear layers sag slightly below them; put each
    // resampled point back between ground and ceiling. Region membership is
    // only known at cell centers, so an infeasible interior sample is moved
    // to the nearest feasible height within two cells, when there is one.
    let map = region.map();
    let dom = region.domain();
    let mut traj = resample_polyline(&dense, samples);
    let last = traj.len() - 1;
    for (k, w) in traj.waypoints.iter_mut().enumerate() {
        let xy = Point2::new(w.position[0], w.position[1]);
        let (Ok(g), Ok(c)) = (map.elevation_at(Layer::Ground, xy), map.elevation_at(Layer::Ceiling, xy)) else { continue };
        let z = w.position[2].clamp(g, c);
        w.position[2] = z;
        if k == 0 || k == last || dom.contains(&Point3::new(xy.x, xy.y, z)) {
            continue;
        }
        let step = 0.25 * map.geometry().resolution;
        let repaired = (1..=8)
            .flat_map(|i| [z + i as f64 * step, z - i as f64 * step])
            .filter(|h| (g..=c).contains(h))
            .find(|h| dom.contains(&Point3::new(xy.x, xy.y, *h)));
        if let Some(h) = repaired {
            w.position[2] = h;
        }
    }
    Ok(traj)
}


/// Constant-speed resampling of a 3D polyline; uniform times.
pub fn resample_polyline(points: &[Point3<f64>], samples: usize) -> SwingTrajectory {
    let mut cumulative = Vec::with_capacity(points.len());
    let mut total = 0.0;
    cumulative.push(0.0);
    for w in points.windows(2) {
        total += (w[1] - w[0]).norm();
        cumulative.push(total);
    }
    let last = points.len() - 1;
    let mut seg = 0;
    let waypoints = (0..samples)
        .map(|k| {
            let t = k as f64 / (samples - 1) as f64;
            let x = if k == 0 {
                points[0]
            } else if k == samples - 1 {
                points[last]
            } else {
                let s = t * total;
                while seg + 1 < last && cumulative[seg + 1] < s {
                    seg += 1;
                }
                let span = cumulative[seg + 1] - cumulative[seg];
                let f = if span > 0.0 { ((s - cumulative[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
                points[seg] + (points[seg + 1] - points[seg]) * f
            };
            Waypoint { t, position: [x.x, x.y, x.z] }
        })
        .collect();
    SwingTrajectory { waypoints }
}

/// Sample feasibility used by the smoother.
pub struct TrajectoryFeasibility<'a> {
    pub dom: &'a PitdDomain<'a>,
    pub map: &'a LayeredGridMap,
    /// Minimum foot distance to the occupied domain at interior samples.
    pub clearance: f64,
}

impl TrajectoryFeasibility<'_> {
    pub fn is_feasible(&self, x: &Point3<f64>) -> bool {
        !self.map.is_occupied(x).unwrap_or(true)
            && (self.clearance <= 0.0 || self.dom.sdf().query(x) >= self.clearance)
            && self.dom.contains(x)
    }

    /// Per-sample feasibility; the two contact points are not held to the
    /// clearance.
    pub fn check(&self, traj: &SwingTrajectory) -> Vec<bool> {
        let n = traj.len();
        traj.waypoints
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let x = w.point();
                if k == 0 || k + 1 == n {
                    !self.map.is_occupied(&x).unwrap_or(true) && self.dom.contains(&x)
                } else {
                    self.is_feasible(&x)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothConfig {
    /// Random shortcut attempts.
    pub iterations: usize,
    /// Relaxation sweeps over the interior samples after shortcutting.
    pub sweeps: usize,
    pub clearance: f64,
    pub seed: u64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        Self { iterations: 200, sweeps: 20, clearance: 0.0, seed: 0 }
    }
}

/// Shortcut-and-subdivide smoothing with fixed time stamps. A change is kept
/// only when every moved sample is feasible and the acceleration cost drops,
/// so the output never costs more than the input.
pub fn smooth_trajectory(traj: &SwingTrajectory, feasibility: &TrajectoryFeasibility<'_>, config: &SmoothConfig) -> SwingTrajectory {
    let times = traj.times();
    let mut x = traj.points();
    let n = x.len();
    if n < 3 {
        return traj.clone();
    }
    let mut cost = acceleration_cost(&x, &times);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let try_shortcut = |x: &mut Vec<Point3<f64>>, cost: &mut f64, i: usize, j: usize| -> bool {
        let (a, b) = (x[i], x[j]);
        let mut candidate = x.clone();
        for k in i + 1..j {
            let f = (times[k] - times[i]) / (times[j] - times[i]);
            candidate[k] = a + (b - a) * f;
        }
        if !(i + 1..j).all(|k| feasibility.is_feasible(&candidate[k])) {
            return false;
        }
        let c = acceleration_cost(&candidate, &times);
        if !improves(c, *cost) {
            return false;
        }
        *x = candidate;
        *cost = c;
        true
    };

    // The whole span first, then random spans; a rejected span is split.
    let mut spans = vec![(0, n - 1)];
    for _ in 0..config.iterations {
        let i = rng.gen_range(0..n - 2);
        let j = rng.gen_range(i + 2..n);
        spans.push((i, j));
    }
    for (i, j) in spans {
        let mut stack = vec![(i, j)];
        while let Some((i, j)) = stack.pop() {
            if j - i < 2 || try_shortcut(&mut x, &mut cost, i, j) {
                continue;
            }
            let mid = (i + j) / 2;
            if j - i >= 4 {
                stack.push((i, mid));
                stack.push((mid, j));
            }
        }
    }

    for _ in 0..config.sweeps {
        let mut moved = false;
        for k in 1..n - 1 {
            let f = (times[k] - times[k - 1]) / (times[k + 1] - times[k - 1]);
            let target = x[k - 1] + (x[k + 1] - x[k - 1]) * f;
            for alpha in [1.0, 0.5, 0.25] {
                let y = x[k] + (target - x[k]) * alpha;
                if !feasibility.is_feasible(&y) {
                    continue;
                }
                let old = x[k];
                x[k] = y;
                let c = acceleration_cost(&x, &times);
                if improves(c, cost) {
                    cost = c;
                    moved = true;
                    break;
                }
                x[k] = old;
            }
        }
        if !moved {
            break;
        }
    }

    let waypoints = times.iter().zip(&x).map(|(t, p)| Waypoint { t: *t, position: [p.x, p.y, p.z] }).collect();
    SwingTrajectory { waypoints }
}

/// A decrease beyond rounding noise.
fn improves(candidate: f64, current: f64) -> bool {
    candidate < current - 1e-12 * (1.0 + current)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanConfig {
    /// Keypoint-mode region settings; the surface mode is ignored.
    pub check: BatchConfig,
    pub samples: usize,
    pub smooth: SmoothConfig,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self { check: BatchConfig::keypoint(), samples: TRAJECTORY_SAMPLES, smooth: SmoothConfig::default() }
    }
}

/// Verdict for one candidate and, when reachable, its trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwingPlan {
    pub result: ReachabilityResult,
    pub initial: Option<SwingTrajectory>,
    pub smoothed: Option<SwingTrajectory>,
}

/// Checks `q` on the keypoint surface and, if reachable, initializes and
/// smooths a swing trajectory inside the same feasible domain.
pub fn plan_swing(setup: &SwingSetup<'_>, q: &Point3<f64>, config: &PlanConfig) -> Result<SwingPlan> {
    let c = &config.check;
    let dom = PitdDomain::new(setup.leg_index, setup.leg, setup.sdf, setup.start_pose, setup.end_pose, (setup.p, *q), c.domain);
    let surface = KeypointAuxiliary::new(setup.map, default_keypoints(&setup.p, q, c.intermediate_keypoints), c.keypoint_exponent)?;
    let region = IntersectionRegion::new(setup.map, &dom, surface, c.region);
    let result = check_with_order(&region, &setup.p, q, c.order)?;
    if !result.reachable {
        return Ok(SwingPlan { result, initial: None, smoothed: None });
    }
    let initial = initialize_trajectory(&region, &result, &setup.p, q, config.samples)?;
    let feasibility = TrajectoryFeasibility { dom: &dom, map: setup.map, clearance: config.smooth.clearance };
    let smoothed = smooth_trajectory(&initial, &feasibility, &config.smooth);
    Ok(SwingPlan { result, initial: Some(initial), smoothed: Some(smoothed) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FecConfig {
    /// Evaluated samples along the trajectory.
    pub resolution: usize,
    /// Apex height above the highest ground sampled on the p-q line.
    pub apex_margin: f64,
}

impl Default for FecConfig {
    fn default() -> Self {
        Self { resolution: TRAJECTORY_SAMPLES, apex_margin: 0.05 }
    }
}

/// Cubic Hermite basis applied to one coordinate.
fn hermite(p0: f64, m0: f64, p1: f64, m1: f64, s: f64) -> f64 {
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1
}

/// Two Hermite segments meeting at an apex above the midpoint of `p` and
/// `q`. Horizontal velocity is zero at contact; vertical velocity is zero at
/// the apex, and height rises and falls monotonically.
pub fn hermite_swing(map: &LayeredGridMap, p: &Point3<f64>, q: &Point3<f64>, config: &FecConfig) -> SwingTrajectory {
    let n = config.resolution.max(2);
    let highest = (0..n)
        .map(|k| {
            let xy = p.xy() + (q.xy() - p.xy()) * (k as f64 / (n - 1) as f64);
            map.elevation_at(Layer::Ground, xy).unwrap_or(f64::NEG_INFINITY)
        })
        .fold(p.z.max(q.z), f64::max);
    let apex_z = highest + config.apex_margin;
    let mid = p.xy() + (q.xy() - p.xy()) * 0.5;
    let half = (q.xy() - p.xy()) * 0.5;
    // Horizontal speed at the apex, per segment parameter: 1.5x the mean.
    let apex_speed = half * 1.5;
    let waypoints = (0..n)
        .map(|k| {
            let t = k as f64 / (n - 1) as f64;
            let pos = if k == 0 {
                *p
            } else if k == n - 1 {
                *q
            } else if t <= 0.5 {
                let s = 2.0 * t;
                let x = hermite(p.x, 0.0, mid.x, apex_speed.x, s);
                let y = hermite(p.y, 0.0, mid.y, apex_speed.y, s);
                Point3::new(x, y, hermite(p.z, apex_z - p.z, apex_z, 0.0, s))
            } else {
                let s = 2.0 * t - 1.0;
                let x = hermite(mid.x, apex_speed.x, q.x, 0.0, s);
                let y = hermite(mid.y, apex_speed.y, q.y, 0.0, s);
                Point3::new(x, y, hermite(apex_z, 0.0, q.z, q.z - apex_z, s))
            };
            Waypoint { t, position: [pos.x, pos.y, pos.z] }
        })
        .collect();
    SwingTrajectory { waypoints }
}

/// Outcome of the Hermite check at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCriteria {
    /// An IK solution within joint limits exists.
    pub kinematic: bool,
    /// The foot point is outside the occupied domain.
    pub foot_free: bool,
    /// Some IK solution keeps every non-foot sphere collision-free.
    pub leg_free: bool,
}

impl SampleCriteria {
    pub fn passed(&self) -> bool {
        self.kinematic && self.foot_free && self.leg_free
    }
}

/// Evaluates the predefined Hermite swing at every sample, with the base at
/// the interpolated pose of the sample's time.
pub fn fec_criteria(setup: &SwingSetup<'_>, q: &Point3<f64>, config: &FecConfig) -> Vec<SampleCriteria> {
    let traj = hermite_swing(setup.map, &setup.p, q, config);
    let interp = PoseInterpolator::new(setup.start_pose, setup.end_pose);
    traj.waypoints
        .iter()
        .map(|w| {
            let x = w.point();
            let base = interp.at(w.t);
            let solutions = setup.leg.inverse_kinematics(&x, &base);
            let foot_free = foot_between_layers(setup.map, &x);
            let leg_free = solutions.iter().any(|s| !setup.leg.leg_collides(s, &base, setup.sdf, 0.0, true));
            SampleCriteria { kinematic: !solutions.is_empty(), foot_free, leg_free }
        })
        .collect()
}

/// Whether the predefined Hermite swing passes every check at every sample.
pub fn fec_check(setup: &SwingSetup<'_>, q: &Point3<f64>, config: &FecConfig) -> bool {
    fec_criteria(setup, q, config).iter().all(SampleCriteria::passed)
}

/// Ground contact within a micrometer counts as free.
fn foot_between_layers(map: &LayeredGridMap, x: &Point3<f64>) -> bool {
    let (Ok(g), Ok(c)) = (map.elevation_at(Layer::Ground, x.xy()), map.elevation_at(Layer::Ceiling, x.xy())) else {
        return false;
    };
    x.z >= g - 1e-6 && x.z <= c + 1e-6
}

/// Distance from every sample to the occupied domain.
pub fn clearance_profile(traj: &SwingTrajectory, sdf: &SignedDistanceField) -> Vec<f64> {
    traj.waypoints.iter().map(|w| sdf.query(&w.point())).collect()
}
