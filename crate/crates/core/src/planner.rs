//! Sampling-based swing planning in joint space augmented with normalized
//! time, used as a baseline and, with a generous budget, as the reference
//! reachability oracle.

use std::time::{Duration, Instant};

use nalgebra::Point3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::leg::JointAngles;
use crate::pose::PoseInterpolator;
use crate::reach::SwingSetup;
use crate::terrain::Layer;

/// Foot points this far below the ground (or above the ceiling) still count as free.
const CONTACT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Largest edge length in the weighted joint-time metric.
    pub max_step: f64,
    #[serde(with = "duration_secs")]
    pub max_time: Duration,
    /// Extra attempts with fresh seeds after a failed one.
    pub max_retries: u32,
    pub rng_seed: u64,
    /// Per-attempt cap on sampling iterations; `None` leaves only the time budget.
    pub max_iterations: Option<usize>,
}

impl PlannerConfig {
    pub fn rrt_1ms(seed: u64) -> Self {
        Self { max_step: 0.4, max_time: Duration::from_millis(1), max_retries: 0, rng_seed: seed, max_iterations: None }
    }

    pub fn rrt_50us(seed: u64) -> Self {
        Self { max_time: Duration::from_micros(50), ..Self::rrt_1ms(seed) }
    }

    /// Reference budget for desk-scale scenes.
    pub fn ground_truth(seed: u64) -> Self {
        Self {
            max_step: 0.6,
            max_time: Duration::from_secs(1),
            max_retries: 3,
            rng_seed: seed,
            max_iterations: Some(GROUND_TRUTH_ITERATIONS),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.max_step > 0.0) {
            return Err(invalid(format!("max_step must be positive, got {}", self.max_step)));
        }
        if self.max_time.is_zero() {
            return Err(invalid("max_time must be positive"));
        }
        Ok(())
    }
}

/// Iteration cap per ground-truth attempt. Keeps blocked candidates from
/// burning the full wall-clock budget; open problems connect in far fewer.
pub const GROUND_TRUTH_ITERATIONS: usize = 4000;

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedConfiguration {
    pub q: JointAngles,
    /// Normalized swing time in `[0, 1]`.
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub reachable: bool,
    /// Time strictly increases along the path.
    pub path: Option<Vec<TimedConfiguration>>,
    pub iterations: usize,
    pub attempts: u32,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

type State = [f64; 4];

/// State validity for one swing: joint limits, the base pose at the state's
/// time, a foot point outside the occupied domain and collision-free
/// non-foot spheres.
pub struct SwingValidity<'a> {
    setup: &'a SwingSetup<'a>,
    interp: PoseInterpolator,
}

impl<'a> SwingValidity<'a> {
    pub fn new(setup: &'a SwingSetup<'a>) -> Self {
        Self { setup, interp: PoseInterpolator::new(setup.start_pose, setup.end_pose) }
    }

    pub fn interpolator(&self) -> &PoseInterpolator {
        &self.interp
    }

    pub fn is_valid(&self, c: &TimedConfiguration) -> bool {
        let leg = self.setup.leg;
        if !leg.joint_limits.contains(&c.q, 0.0) || !(0.0..=1.0).contains(&c.t) {
            return false;
        }
        let base = self.interp.at(c.t);
        let frames = leg.frames(&c.q, &base);
        foot_free(self.setup, &frames.foot) && !leg.collides_with_frames(&frames, self.setup.sdf, 0.0, true)
    }

    /// Valid IK solutions for `foot` at time `t`.
    pub fn configurations_at(&self, foot: &Point3<f64>, t: f64) -> Vec<TimedConfiguration> {
        let base = self.interp.at(t);
        self.setup
            .leg
            .inverse_kinematics(foot, &base)
            .into_iter()
            .map(|q| TimedConfiguration { q, t })
            .filter(|c| self.is_valid(c))
            .collect()
    }
}

fn foot_free(setup: &SwingSetup<'_>, foot: &Point3<f64>) -> bool {
    let xy = foot.xy();
    let (Ok(g), Ok(c)) = (setup.map.elevation_at(Layer::Ground, xy), setup.map.elevation_at(Layer::Ceiling, xy)) else {
        return false;
    };
    foot.z >= g - CONTACT_TOLERANCE && foot.z <= c + CONTACT_TOLERANCE
}

struct Node {
    state: State,
    parent: usize,
}

/// One tree grows forward in time from the lift-off configurations, the
/// other backward from the touch-down configurations.
struct Tree {
    nodes: Vec<Node>,
    forward: bool,
}

const ROOT: usize = usize::MAX;

impl Tree {
    fn new(roots: &[State], forward: bool) -> Self {
        Self { nodes: roots.iter().map(|s| Node { state: *s, parent: ROOT }).collect(), forward }
    }

    /// Strict time order between a tree node and a target.
    fn precedes(&self, node: &State, target: &State) -> bool {
        if self.forward {
            node[3] < target[3]
        } else {
            node[3] > target[3]
        }
    }

    fn nearest(&self, target: &State, w: f64) -> Option<usize> {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (k, n) in self.nodes.iter().enumerate() {
            if !self.precedes(&n.state, target) {
                continue;
            }
            let d = distance(&n.state, target, w);
            if d < best_d {
                best_d = d;
                best = Some(k);
            }
        }
        best
    }

    /// States from a root to node `k`.
    fn branch(&self, mut k: usize) -> Vec<State> {
        let mut out = Vec::new();
        while k != ROOT {
            out.push(self.nodes[k].state);
            k = self.nodes[k].parent;
        }
        out.reverse();
        out
    }
}

fn distance(a: &State, b: &State, w: f64) -> f64 {
    let dq = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2);
    (dq + (w * (a[3] - b[3])).powi(2)).sqrt()
}

fn lerp(a: &State, b: &State, f: f64) -> State {
    [a[0] + (b[0] - a[0]) * f, a[1] + (b[1] - a[1]) * f, a[2] + (b[2] - a[2]) * f, a[3] + (b[3] - a[3]) * f]
}

fn to_config(s: &State) -> TimedConfiguration {
    TimedConfiguration { q: JointAngles::new(s[0], s[1], s[2]), t: s[3] }
}

fn to_state(c: &TimedConfiguration) -> State {
    [c.q.yaw, c.q.hip_pitch, c.q.knee_pitch, c.t]
}

enum Extend {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

struct Planner<'a> {
    validity: SwingValidity<'a>,
    step: f64,
    check_step: f64,
    w: f64,
}

impl Planner<'_> {
    fn state_valid(&self, s: &State) -> bool {
        self.validity.is_valid(&to_config(s))
    }

    /// Checks the open segment `(a, b]` at `check_step` spacing.
    fn edge_valid(&self, a: &State, b: &State) -> bool {
        let n = (distance(a, b, self.w) / self.check_step).ceil().max(1.0) as usize;
        (1..=n).all(|k| self.state_valid(&lerp(a, b, k as f64 / n as f64)))
    }

    fn extend(&self, tree: &mut Tree, target: &State) -> Extend {
        let Some(near) = tree.nearest(target, self.w) else { return Extend::Trapped };
        let from = tree.nodes[near].state;
        let d = distance(&from, target, self.w);
        let (to, reached) = if d <= self.step { (*target, true) } else { (lerp(&from, target, self.step / d), false) };
        if !self.edge_valid(&from, &to) {
            return Extend::Trapped;
        }
        tree.nodes.push(Node { state: to, parent: near });
        let k = tree.nodes.len() - 1;
        if reached {
            Extend::Reached(k)
        } else {
            Extend::Advanced(k)
        }
    }

    fn connect(&self, tree: &mut Tree, target: &State) -> Option<usize> {
        loop {
            match self.extend(tree, target) {
                Extend::Reached(k) => return Some(k),
                Extend::Advanced(_) => {}
                Extend::Trapped => return None,
            }
        }
    }
}

/// Weight of normalized time in the configuration metric: the base
/// displacement expressed as an angle swept at femur radius, so a long base
/// motion makes time as costly as a large joint motion.
fn time_weight(setup: &SwingSetup<'_>) -> f64 {
    let d = (setup.end_pose.translation.vector - setup.start_pose.translation.vector).norm();
    (d / setup.leg.link_lengths[1]).max(0.05)
}

/// Bidirectional RRT over (joint angles, time) from the lift-off
/// configuration at `t = 0` to the touch-down configuration at `t = 1`.
/// Infeasible endpoints give an immediate negative. Deterministic for a
/// fixed seed whenever the iteration cap binds before the time budget.
pub fn rrt_connect_reachable(setup: &SwingSetup<'_>, q: &Point3<f64>, cfg: &PlannerConfig) -> Result<PlanResult> {
    cfg.validate()?;
    let started = Instant::now();
    let planner = Planner { validity: SwingValidity::new(setup), step: cfg.max_step, check_step: cfg.max_step / 10.0, w: time_weight(setup) };
    let starts: Vec<State> = planner.validity.configurations_at(&setup.p, 0.0).iter().map(to_state).collect();
    let goals: Vec<State> = planner.validity.configurations_at(q, 1.0).iter().map(to_state).collect();
    let mut result = PlanResult { reachable: false, path: None, iterations: 0, attempts: 0, elapsed: Duration::ZERO };
    if starts.is_empty() || goals.is_empty() {
        result.elapsed = started.elapsed();
        return Ok(result);
    }
    for attempt in 0..=cfg.max_retries {
        result.attempts = attempt + 1;
        let seed = cfg.rng_seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        if let Some(path) = plan_once(&planner, &starts, &goals, seed, cfg, &mut result.iterations) {
            result.reachable = true;
            result.path = Some(path.iter().map(to_config).collect());
            break;
        }
    }
    result.elapsed = started.elapsed();
    Ok(result)
}

/// One attempt with its own time budget.
fn plan_once(
    planner: &Planner<'_>,
    starts: &[State],
    goals: &[State],
    seed: u64,
    cfg: &PlannerConfig,
    iterations: &mut usize,
) -> Option<Vec<State>> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Tree::new(starts, true);
    let mut b = Tree::new(goals, false);
    let limits = planner.validity.setup.leg.joint_limits;
    let mut k = 0usize;
    loop {
        if cfg.max_iterations.is_some_and(|cap| k >= cap) || started.elapsed() >= cfg.max_time {
            return None;
        }
        k += 1;
        *iterations += 1;
        let sample: State = [
            rng.gen_range(limits.min[0]..limits.max[0]),
            rng.gen_range(limits.min[1]..limits.max[1]),
            rng.gen_range(limits.min[2]..limits.max[2]),
            rng.gen_range(0.0..1.0),
        ];
        let new = match planner.extend(&mut a, &sample) {
            Extend::Reached(n) | Extend::Advanced(n) => n,
            Extend::Trapped => {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
        };
        let target = a.nodes[new].state;
        if let Some(m) = planner.connect(&mut b, &target) {
            let (fwd, fk, bwd, bk) = if a.forward { (&a, new, &b, m) } else { (&b, m, &a, new) };
            let mut path = fwd.branch(fk);
            let mut tail = bwd.branch(bk);
            tail.reverse();
            // Both branches end in the same state.
            path.extend(tail.into_iter().skip(1));
            return Some(path);
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Reference verdict: the planner under a generous budget, retried with
/// fresh seeds.
pub fn ground_truth_reachable(setup: &SwingSetup<'_>, q: &Point3<f64>, cfg: &PlannerConfig) -> Result<bool> {
    Ok(rrt_connect_reachable(setup, q, cfg)?.reachable)
}

/// Re-checks every edge of `path` at `subdivisions` times the planner's edge
/// resolution, along with strict time order and the endpoint feet.
pub fn validate_path(setup: &SwingSetup<'_>, q: &Point3<f64>, path: &[TimedConfiguration], cfg: &PlannerConfig, subdivisions: usize) -> bool {
    let validity = SwingValidity::new(setup);
    let w = time_weight(setup);
    let Some((first, last)) = path.first().zip(path.last()) else { return false };
    if first.t != 0.0 || last.t != 1.0 {
        return false;
    }
    let leg = setup.leg;
    let foot_err = |c: &TimedConfiguration, target: &Point3<f64>| {
        (leg.forward_kinematics(&c.q, &validity.interp.at(c.t)) - target).norm()
    };
    if foot_err(first, &setup.p) > 1e-6 || foot_err(last, q) > 1e-6 {
        return false;
    }
    let check = cfg.max_step / 10.0 / subdivisions.max(1) as f64;
    path.windows(2).all(|e| {
        let (a, b) = (to_state(&e[0]), to_state(&e[1]));
        if b[3] <= a[3] {
            return false;
        }
        let n = (distance(&a, &b, w) / check).ceil().max(1.0) as usize;
        (0..=n).all(|k| validity.is_valid(&to_config(&lerp(&a, &b, k as f64 / n as f64))))
    })
}
