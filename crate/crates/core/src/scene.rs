//! Procedural benchmark scenes with scripted gait states.
//!
//! The robot walks along +x in straight steps. Every transition moves the base
//! by one step length while one gait group swings; each swing foot travels two
//! step lengths, from half a step behind its nominal stance point under the
//! lift-off pose to half a step ahead of it under the touch-down pose.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::{Point2, Point3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainConfig, PitdDomain};
use crate::error::{invalid, Error, Result};
use crate::io::{load_map, save_map, Encoding};
use crate::leg::LegModel;
use crate::planner::SwingValidity;
use crate::pose::{pose_from_xyz_rpy, serde_pose, Pose};
use crate::reach::{candidate_lattice, CandidateLattice, SwingSetup};
use crate::robot::RobotModel;
use crate::sdf::{build_sdf, SignedDistanceField};
use crate::terrain::{generate_fractal_scene, BarrierSpec, LayeredGridMap, Obstacle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Sparse,
    Dense,
    /// Low ceiling over scattered blocks.
    Confined,
    /// A wall across the walking direction.
    Barrier,
    /// A bar with an overhead clamp on both sides.
    UClamp,
}

impl SceneKind {
    pub const ALL: [SceneKind; 5] = [SceneKind::Sparse, SceneKind::Dense, SceneKind::Confined, SceneKind::Barrier, SceneKind::UClamp];

    pub fn as_str(self) -> &'static str {
        match self {
            SceneKind::Sparse => "sparse",
            SceneKind::Dense => "dense",
            SceneKind::Confined => "confined",
            SceneKind::Barrier => "barrier",
            SceneKind::UClamp => "u_clamp",
        }
    }
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SceneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SceneKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown scene kind '{s}' (expected sparse, dense, confined, barrier or u_clamp)")))
    }
}

/// Wall dimensions of the barrier scene.
pub const WALL_WIDTH: f64 = 0.12;
pub const WALL_HEIGHT: f64 = 0.19;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub rows: usize,
    pub cols: usize,
    pub resolution: f64,
    pub transitions: usize,
    /// Base travel per transition.
    pub step_length: f64,
}

impl SceneConfig {
    /// 2 m x 2 m at 0.05 m with a single transition.
    pub fn desk() -> Self {
        Self { rows: 40, cols: 40, resolution: 0.05, transitions: 1, step_length: 0.12 }
    }

    /// 3 m along the walking direction, 2 m across, ten transitions.
    pub fn bench() -> Self {
        Self { rows: 60, cols: 40, resolution: 0.05, transitions: 10, step_length: 0.12 }
    }

    /// Same extent at a different cell size.
    pub fn with_resolution(self, resolution: f64) -> Result<Self> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(invalid(format!("resolution must be positive, got {resolution}")));
        }
        let scale = self.resolution / resolution;
        let rows = (self.rows as f64 * scale).round() as usize;
        let cols = (self.cols as f64 * scale).round() as usize;
        Ok(Self { rows, cols, resolution, ..self })
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.rows as f64 * self.resolution, self.cols as f64 * self.resolution)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwingLeg {
    pub leg_index: usize,
    /// Lift-off foothold.
    pub p: [f64; 3],
    /// Scripted touch-down point; candidate lattices are centered on it.
    pub nominal_q: [f64; 3],
}

impl SwingLeg {
    pub fn p(&self) -> Point3<f64> {
        Point3::from(self.p)
    }

    pub fn nominal_q(&self) -> Point3<f64> {
        Point3::from(self.nominal_q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitTransition {
    #[serde(with = "serde_pose")]
    pub start_pose: Pose,
    #[serde(with = "serde_pose")]
    pub end_pose: Pose,
    /// Footholds of every leg at lift-off, in leg order.
    pub stance: Vec<[f64; 3]>,
    /// Swinging legs whose lift-off foothold is feasible.
    pub swing: Vec<SwingLeg>,
}

/// Contact-state sidecar of a generated scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStates {
    pub kind: SceneKind,
    pub seed: u64,
    pub robot: String,
    pub config: SceneConfig,
    pub obstacles: BarrierSpec,
    pub transitions: Vec<GaitTransition>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub map: LayeredGridMap,
    pub states: ScenarioStates,
}

/// Distance field covering every height a leg can reach in the scene.
pub fn scene_sdf(map: &LayeredGridMap, robot: &RobotModel) -> Result<SignedDistanceField> {
    let (lo, hi) = map.ground_range();
    let top = hi + robot.body_height + robot.legs.iter().map(|l| l.link_lengths[1]).fold(0.0, f64::max) + 0.15;
    build_sdf(map, (lo - 0.1, top), map.geometry().resolution)
}

/// Where a leg rests in the nominal stance under `base`, before snapping to
/// the ground.
pub fn nominal_foot(robot: &RobotModel, leg: &LegModel, base: &Pose) -> Point2<f64> {
    let hip = leg.hip_position(base);
    let dir = (base * leg.hip_mount).rotation * Vector3::x();
    let flat = Vector3::new(dir.x, dir.y, 0.0).normalize();
    Point2::new(hip.x + robot.stance_reach * flat.x, hip.y + robot.stance_reach * flat.y)
}

fn obstacles_for(kind: SceneKind, rng: &mut ChaCha8Rng, cfg: &SceneConfig, base_x: f64, body_height: f64) -> (f64, BarrierSpec) {
    let (width, depth) = cfg.extent();
    let mut boxes = |n: usize, h: (f64, f64), size: (f64, f64)| -> Vec<Obstacle> {
        (0..n)
            .map(|_| {
                let (sx, sy) = (rng.gen_range(size.0..size.1), rng.gen_range(size.0..size.1));
                let (cx, cy) = (rng.gen_range(0.0..width), rng.gen_range(0.0..depth));
                Obstacle::GroundBox { min: [cx - 0.5 * sx, cy - 0.5 * sy], max: [cx + 0.5 * sx, cy + 0.5 * sy], top: rng.gen_range(h.0..h.1) }
            })
            .collect()
    };
    match kind {
        SceneKind::Sparse => (0.04, BarrierSpec::with_obstacles(boxes(3, (0.04, 0.12), (0.1, 0.2)))),
        SceneKind::Dense => (0.08, BarrierSpec::with_obstacles(boxes(14, (0.05, 0.2), (0.08, 0.22)))),
        SceneKind::Confined => {
            let obstacles = boxes(16, (0.1, 0.22), (0.1, 0.22));
            let ceiling = body_height + 0.24 + rng.gen_range(0.0..0.04);
            (0.05, BarrierSpec { ceiling: Some(ceiling), obstacles })
        }
        SceneKind::Barrier => {
            let x = base_x + rng.gen_range(0.35..0.6);
            (0.02, BarrierSpec::wall(x, WALL_WIDTH, WALL_HEIGHT))
        }
        SceneKind::UClamp => {
            let x = base_x + rng.gen_range(0.35..0.6);
            (0.02, BarrierSpec::u_clamp(x, 0.08, 0.1, 0.16, 0.06))
        }
    }
}

/// Deterministic scene and gait states for `(kind, seed)`.
pub fn generate_scenario(kind: SceneKind, seed: u64, robot: &RobotModel, cfg: &SceneConfig) -> Result<Scenario> {
    robot.validate()?;
    if cfg.transitions == 0 {
        return Err(invalid("a scenario needs at least one transition"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5CE7_E5EE_D000_0001);
    let (width, depth) = cfg.extent();
    let s = cfg.step_length;
    let base_x0 = 0.5 * width - 0.5 * s * cfg.transitions as f64;
    let base_y = 0.5 * depth;
    let (amplitude, obstacles) = obstacles_for(kind, &mut rng, cfg, base_x0, robot.body_height);
    let map = generate_fractal_scene(seed, (cfg.rows, cfg.cols), cfg.resolution, amplitude, Some(&obstacles))?;
    let sdf = scene_sdf(&map, robot)?;

    let ground = |xy: Point2<f64>| map.ground_at(xy).unwrap_or(0.0);
    let base_pose = |x: f64| {
        let flat = pose_from_xyz_rpy([x, base_y, 0.0], [0.0; 3]);
        let mean = robot.legs.iter().map(|l| ground(nominal_foot(robot, l, &flat))).sum::<f64>() / robot.legs.len() as f64;
        pose_from_xyz_rpy([x, base_y, mean + robot.body_height], [0.0; 3])
    };
    let groups = robot.swing_groups();
    let half = Vector3::new(0.5 * s, 0.0, 0.0).xy();
    let mut transitions = Vec::with_capacity(cfg.transitions);
    for k in 0..cfg.transitions {
        let x = base_x0 + k as f64 * s;
        let (start_pose, end_pose) = (base_pose(x), base_pose(x + s));
        let group = &groups[k % groups.len()];
        let stance = robot
            .legs
            .iter()
            .enumerate()
            .map(|(i, leg)| {
                let shift = if group.contains(&i) { -half } else { half };
                let xy = nominal_foot(robot, leg, &start_pose) + shift;
                [xy.x, xy.y, ground(xy)]
            })
            .collect::<Vec<_>>();
        let mut swing = Vec::new();
        for &i in group {
            let leg = &robot.legs[i];
            let q_xy = nominal_foot(robot, leg, &end_pose) + half;
            let nominal_q = [q_xy.x, q_xy.y, ground(q_xy)];
            let p0 = Point3::from(stance[i]);
            if let Some(p) = feasible_liftoff(&map, &sdf, leg, i, &start_pose, &end_pose, &p0) {
                swing.push(SwingLeg { leg_index: i, p: [p.x, p.y, p.z], nominal_q });
            }
        }
        transitions.push(GaitTransition { start_pose, end_pose, stance, swing });
    }
    let states = ScenarioStates { kind, seed, robot: robot.name.clone(), config: *cfg, obstacles, transitions };
    Ok(Scenario { map, states })
}

/// The scripted lift-off point, or the nearest ground point within 0.1 m
/// that both the reachability domain and the planner accept.
fn feasible_liftoff(
    map: &LayeredGridMap,
    sdf: &SignedDistanceField,
    leg: &LegModel,
    leg_index: usize,
    start: &Pose,
    end: &Pose,
    p0: &Point3<f64>,
) -> Option<Point3<f64>> {
    let step = 0.5 * map.geometry().resolution;
    let mut offsets = vec![(0.0, 0.0)];
    for ring in 1..=((0.1 / step).round() as i32) {
        for a in -ring..=ring {
            for b in -ring..=ring {
                if a.abs().max(b.abs()) == ring {
                    offsets.push((a as f64 * step, b as f64 * step));
                }
            }
        }
    }
    offsets.sort_by(|a, b| (a.0.hypot(a.1)).total_cmp(&b.0.hypot(b.1)));
    offsets.into_iter().find_map(|(dx, dy)| {
        let xy = Point2::new(p0.x + dx, p0.y + dy);
        let p = Point3::new(xy.x, xy.y, map.ground_at(xy).ok()?);
        let setup = SwingSetup { map, sdf, leg, leg_index, start_pose: *start, end_pose: *end, p };
        let dom = PitdDomain::new(leg_index, leg, sdf, *start, *end, (p, p), DomainConfig::default());
        let ok = dom.contains(&p) && !SwingValidity::new(&setup).configurations_at(&p, 0.0).is_empty();
        ok.then_some(p)
    })
}

/// Sidecar holding the gait states of the map stored at `path`.
pub fn states_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".states.json");
    PathBuf::from(s)
}

/// Spacing of the default 30 x 30 candidate lattice.
pub const LATTICE_SPACING: f64 = 0.025;
pub const LATTICE_SIZE: usize = 30;

impl Scenario {
    pub fn generate(kind: SceneKind, seed: u64, robot: &RobotModel, cfg: &SceneConfig) -> Result<Self> {
        generate_scenario(kind, seed, robot, cfg)
    }

    /// Every (transition, swing) pair in order.
    pub fn swings(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.states.transitions.iter().enumerate().flat_map(|(k, t)| (0..t.swing.len()).map(move |s| (k, s)))
    }

    pub fn swing(&self, transition: usize, swing: usize) -> Result<(&GaitTransition, &SwingLeg)> {
        let t = self
            .states
            .transitions
            .get(transition)
            .ok_or_else(|| invalid(format!("transition {transition} out of range")))?;
        let s = t.swing.get(swing).ok_or_else(|| invalid(format!("swing {swing} out of range")))?;
        Ok((t, s))
    }

    pub fn setup<'a>(&'a self, robot: &'a RobotModel, sdf: &'a SignedDistanceField, transition: usize, swing: usize) -> Result<SwingSetup<'a>> {
        let (t, s) = self.swing(transition, swing)?;
        let leg = robot
            .legs
            .get(s.leg_index)
            .ok_or_else(|| invalid(format!("scenario leg {} does not exist on robot {}", s.leg_index, robot.name)))?;
        Ok(SwingSetup { map: &self.map, sdf, leg, leg_index: s.leg_index, start_pose: t.start_pose, end_pose: t.end_pose, p: s.p() })
    }

    /// Writes the map to `path` and the gait states to `<path>.states.json`.
    pub fn save(&self, path: &Path, encoding: Encoding) -> Result<()> {
        save_map(&self.map, path, encoding)?;
        fs::write(states_path(path), serde_json::to_string_pretty(&self.states)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let map = load_map(path)?;
        let states: ScenarioStates = serde_json::from_str(&fs::read_to_string(states_path(path))?)?;
        let g = map.geometry();
        if (g.rows, g.cols) != (states.config.rows, states.config.cols) {
            return Err(Error::Format(format!(
                "states describe a {}x{} grid but the map is {}x{}",
                states.config.rows, states.config.cols, g.rows, g.cols
            )));
        }
        Ok(Self { map, states })
    }

    /// The default candidate lattice around the scripted touch-down point.
    pub fn lattice(&self, transition: usize, swing: usize) -> Result<CandidateLattice> {
        let (_, s) = self.swing(transition, swing)?;
        Ok(candidate_lattice(s.nominal_q().xy(), LATTICE_SIZE, LATTICE_SIZE, LATTICE_SPACING))
    }
}
