//! Acceptance criteria. A single test runs them in sequence so the timing
//! criterion never competes with other test threads, then prints one line
//! per criterion and fails if any of them failed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;

use nalgebra::{Point2, Point3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kcfrc::bench::{bench_swing, BenchConfig, Confusion, Method};
use kcfrc::domain::PitdDomain;
use kcfrc::grid::CellIndex;
use kcfrc::leg::JointAngles;
use kcfrc::pose::{interpolate_pose, pose_from_xyz_rpy, Pose};
use kcfrc::reach::{
    batch_check, check_with_region, flood_component, polyline_length, trace_border, BatchConfig, BoolGrid, CellSet,
    IntersectionRegion,
};
use kcfrc::robot::{a1, elspider_air, RobotModel};
use kcfrc::scaling::{run_scaling, ScalingConfig};
use kcfrc::scene::{scene_sdf, SceneConfig, SceneKind, Scenario};
use kcfrc::surface::{default_keypoints, ConvAuxiliary, HeightSurface, Keypoint, KeypointAuxiliary};
use kcfrc::swing::{
    hermite_swing, initialize_trajectory, shortest_region_path, smooth_trajectory, FecConfig, SmoothConfig,
    TrajectoryFeasibility, TRAJECTORY_SAMPLES,
};
use kcfrc::terrain::{generate_fractal_scene, Layer, LayeredGridMap};

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn scene_for(seed: u64, robot: &RobotModel) -> Scenario {
    let kind = SceneKind::ALL[(seed % 5) as usize];
    Scenario::generate(kind, seed, robot, &SceneConfig::desk()).expect("scene generation")
}

/// Swing leg used for a scene: cycles through the available swings.
fn swing_of(scene: &Scenario, seed: u64) -> (usize, usize) {
    let swings: Vec<_> = scene.swings().collect();
    swings[seed as usize % swings.len()]
}

/// Sub-lattice of 10 x 10 candidates per swing.
const SUBSAMPLE: (usize, usize) = (3, 1);

struct Soundness {
    key: Confusion,
    conv: Confusion,
}

/// Criteria 1 and 2 share one sweep over 200 desk scenes.
fn soundness_sweep(robot: &RobotModel) -> Soundness {
    let mut key = Confusion::default();
    let mut conv = Confusion::default();
    for seed in 0..200 {
        let scene = scene_for(seed, robot);
        let sdf = scene_sdf(&scene.map, robot).unwrap();
        let (k, s) = swing_of(&scene, seed);
        let setup = scene.setup(robot, &sdf, k, s).unwrap();
        let lattice = scene.lattice(k, s).unwrap();
        let config = BenchConfig { seed, repetitions: 1, warmup: false, subsample: Some(SUBSAMPLE), ..BenchConfig::default() };
        let (_, results) = bench_swing(&setup, &lattice, &[Method::KcfrcKey, Method::KcfrcConv], &config).unwrap();
        for r in results {
            match r.method {
                Method::KcfrcKey => key.merge(&r.confusion),
                _ => conv.merge(&r.confusion),
            }
        }
    }
    Soundness { key, conv }
}

fn criterion_1(s: &Soundness) -> Outcome {
    let p = s.key.precision();
    Outcome {
        id: 1,
        name: "soundness, key precision = 1.000 over 200 scenes",
        pass: s.key.fp == 0,
        detail: format!("tp {} fp {} precision {:.4}", s.key.tp, s.key.fp, p.value),
    }
}

fn criterion_2(s: &Soundness) -> Outcome {
    let (k, c) = (s.key.recall().value, s.conv.recall().value);
    Outcome {
        id: 2,
        name: "recall, key >= 0.95 and conv >= 0.90",
        pass: k >= 0.95 && c >= 0.90,
        detail: format!("key {k:.4} ({} fn), conv {c:.4} ({} fn)", s.key.fn_, s.conv.fn_),
    }
}

/// Five independent blocks of 100 confined scenes, pooled.
fn criterion_3(robot: &RobotModel) -> Outcome {
    let mut key = Confusion::default();
    let mut fec = Confusion::default();
    let mut block_gaps = Vec::new();
    for block in 0..5u64 {
        let (mut block_key, mut block_fec) = (Confusion::default(), Confusion::default());
        for seed in block * 1000..block * 1000 + 100 {
            let scene = Scenario::generate(SceneKind::Confined, seed, robot, &SceneConfig::desk()).unwrap();
            let sdf = scene_sdf(&scene.map, robot).unwrap();
            let (k, s) = swing_of(&scene, seed);
            let setup = scene.setup(robot, &sdf, k, s).unwrap();
            let lattice = scene.lattice(k, s).unwrap();
            let config =
                BenchConfig { seed, repetitions: 1, warmup: false, subsample: Some(SUBSAMPLE), ..BenchConfig::default() };
            let (_, results) = bench_swing(&setup, &lattice, &[Method::KcfrcKey, Method::Fec], &config).unwrap();
            for r in results {
                match r.method {
                    Method::KcfrcKey => block_key.merge(&r.confusion),
                    _ => block_fec.merge(&r.confusion),
                }
            }
        }
        block_gaps.push(block_key.recall().value - block_fec.recall().value);
        key.merge(&block_key);
        fec.merge(&block_fec);
    }
    let (k, f) = (key.recall().value, fec.recall().value);
    let lo = block_gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = block_gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        id: 3,
        name: "confined scenes, FEC recall at least 0.05 below key",
        pass: k - f >= 0.05,
        detail: format!(
            "key {k:.4}, fec {f:.4}, gap {:.4} over 500 scenes (per 100-scene block {lo:.4} to {hi:.4}; fec fp {})",
            k - f,
            fec.fp
        ),
    }
}

fn criterion_4(robot: &RobotModel) -> Outcome {
    let methods = [Method::KcfrcConv, Method::KcfrcKey, Method::Rrt1ms];
    let mut sums = [0.0; 3];
    let n = 25;
    for seed in 0..n {
        let scene = scene_for(seed, robot);
        let sdf = scene_sdf(&scene.map, robot).unwrap();
        let (k, s) = swing_of(&scene, seed);
        let setup = scene.setup(robot, &sdf, k, s).unwrap();
        let lattice = scene.lattice(k, s).unwrap();
        let config = BenchConfig { seed, ..BenchConfig::default() };
        let (truth, results) = bench_swing(&setup, &lattice, &methods, &config).unwrap();
        assert_eq!(truth.len(), 900);
        for r in results {
            let i = methods.iter().position(|m| *m == r.method).unwrap();
            sums[i] += r.batch_ms;
        }
    }
    let [conv, key, rrt] = sums.map(|s| s / n as f64);
    Outcome {
        id: 4,
        name: "900-candidate batch, conv < key < rrt_1ms and conv < 25 ms",
        pass: conv < key && key < rrt && conv < 25.0,
        detail: format!(
            "mean over {n} swings: conv {conv:.3} ms, key {key:.3} ms, rrt_1ms {rrt:.3} ms (debug assertions: {})",
            cfg!(debug_assertions)
        ),
    }
}

fn criterion_5() -> Outcome {
    let report = run_scaling(1000, 2024, &ScalingConfig::default()).unwrap();
    let fit = report.fit.expect("border lengths vary");
    Outcome {
        id: 5,
        name: "corridor scaling, slope > 0 and R^2 > 0.5 over 1000 cases",
        pass: fit.slope > 0.0 && fit.r_squared > 0.5,
        detail: format!(
            "slope {:.3e} ms/cell, intercept {:.3e} ms, R^2 {:.3}; median {:.4} ms, p95 {:.4} ms",
            fit.slope, fit.intercept, fit.r_squared, report.median_ms, report.p95_ms
        ),
    }
}

/// Shortest 8-connected member path length in cells, without cutting
/// corners past non-members.
fn grid_dijkstra<M: CellSet>(m: &M, start: CellIndex, goal: CellIndex) -> Option<f64> {
    let g = *m.geometry();
    let mut best = vec![f64::INFINITY; g.len()];
    let mut heap = BinaryHeap::new();
    // Distances are sums of 1 and sqrt(2); scaled integers order them exactly enough.
    let key = |d: f64| Reverse((d * 1e9) as i64);
    best[g.flat(start)] = 0.0;
    heap.push((key(0.0), g.flat(start)));
    while let Some((_, k)) = heap.pop() {
        let c = g.cell_at_flat(k);
        let d = best[k];
        if c == goal {
            return Some(d);
        }
        for a in -1..=1isize {
            for b in -1..=1isize {
                if (a, b) == (0, 0) {
                    continue;
                }
                let n = c.offset(a, b);
                if !m.is_member(n) {
                    continue;
                }
                let diagonal = a != 0 && b != 0;
                if diagonal && !(m.is_member(c.offset(a, 0)) && m.is_member(c.offset(0, b))) {
                    continue;
                }
                let nd = d + if diagonal { std::f64::consts::SQRT_2 } else { 1.0 };
                if nd < best[g.flat(n)] - 1e-12 {
                    best[g.flat(n)] = nd;
                    heap.push((key(nd), g.flat(n)));
                }
            }
        }
    }
    None
}

struct TrajectoryStats {
    trajectories: usize,
    path_violations: usize,
    worst_gap: f64,
    feasible_initial: usize,
    infeasible_smoothed: usize,
    cost_increases: usize,
    timestamp_failures: usize,
}

fn criterion_7(robot: &RobotModel) -> (Outcome, TrajectoryStats) {
    let mut st = TrajectoryStats {
        trajectories: 0,
        path_violations: 0,
        worst_gap: f64::NEG_INFINITY,
        feasible_initial: 0,
        infeasible_smoothed: 0,
        cost_increases: 0,
        timestamp_failures: 0,
    };
    for seed in 0..100 {
        let scene = scene_for(seed + 500, robot);
        let sdf = scene_sdf(&scene.map, robot).unwrap();
        let (k, s) = swing_of(&scene, seed);
        let setup = scene.setup(robot, &sdf, k, s).unwrap();
        let lattice = scene.lattice(k, s).unwrap();
        let cells = lattice.subsample(SUBSAMPLE.0, SUBSAMPLE.1);
        let key = batch_check(&setup, &lattice, Some(&cells), &BatchConfig::keypoint()).unwrap();
        let footholds = lattice.footholds(&scene.map);
        for &(r, c) in &cells {
            if !key.get(r, c) {
                continue;
            }
            let q = footholds[r * lattice.cols + c].unwrap();
            let dom = PitdDomain::new(setup.leg_index, setup.leg, &sdf, setup.start_pose, setup.end_pose, (setup.p, q), Default::default());
            let surface = KeypointAuxiliary::new(&scene.map, default_keypoints(&setup.p, &q, 3), 1.0).unwrap();
            let region = IntersectionRegion::new(&scene.map, &dom, surface, Default::default());
            let result = check_with_region(&region, &setup.p, &q).unwrap();
            assert!(result.reachable);

            let visibility = polyline_length(&shortest_region_path(&region, result.p_cell, result.q_cell).unwrap());
            let dijkstra = grid_dijkstra(&region, result.p_cell, result.q_cell).unwrap();
            st.worst_gap = st.worst_gap.max(visibility - dijkstra);
            if visibility > dijkstra + std::f64::consts::SQRT_2 + 1e-9 {
                st.path_violations += 1;
            }

            let initial = initialize_trajectory(&region, &result, &setup.p, &q, TRAJECTORY_SAMPLES).unwrap();
            let feasibility = TrajectoryFeasibility { dom: &dom, map: &scene.map, clearance: 0.0 };
            let smoothed = smooth_trajectory(&initial, &feasibility, &SmoothConfig { seed, ..SmoothConfig::default() });
            st.trajectories += 1;
            let before = feasibility.check(&initial);
            let after = feasibility.check(&smoothed);
            if before.iter().all(|ok| *ok) {
                st.feasible_initial += 1;
            }
            let lost = before.iter().zip(&after).any(|(b, a)| *b && !*a);
            if lost || smoothed.len() != TRAJECTORY_SAMPLES {
                st.infeasible_smoothed += 1;
            }
            if smoothed.acceleration_cost() > initial.acceleration_cost() {
                st.cost_increases += 1;
            }
            let hermite = hermite_swing(&scene.map, &setup.p, &q, &FecConfig::default());
            for t in [&initial, &smoothed, &hermite] {
                if t.validate().is_err() {
                    st.timestamp_failures += 1;
                }
            }
        }
    }
    let outcome = Outcome {
        id: 7,
        name: "trajectory initialization and smoothing quality",
        pass: st.trajectories > 0 && st.path_violations == 0 && st.infeasible_smoothed == 0 && st.cost_increases == 0,
        detail: format!(
            "{} trajectories on 100 scenes: {} paths beyond Dijkstra + one diagonal (worst gap {:.3} cells), {} smoothings losing a feasible sample, {} cost increases; {} initial trajectories feasible at every sample",
            st.trajectories,
            st.path_violations,
            st.worst_gap,
            st.infeasible_smoothed,
            st.cost_increases,
            st.feasible_initial
        ),
    };
    (outcome, st)
}

/// Random surfaces: keypoint and convolutional auxiliaries over every scene kind.
fn surface_properties(robot: &RobotModel) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let (mut cells, mut clamp_bad, mut occupied) = (0usize, 0usize, 0usize);
    for i in 0..100u64 {
        let scene = scene_for(i + 300, robot);
        let map = &scene.map;
        let (lo, hi) = map.geometry().extent();
        let surface: HeightSurface = if i % 2 == 0 {
            let n = rng.gen_range(1..6);
            let kps = (0..n)
                .map(|_| {
                    let xy = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
                    Keypoint::new(Point3::new(xy.x, xy.y, rng.gen_range(-0.3..0.8)))
                })
                .collect();
            KeypointAuxiliary::new(map, kps, rng.gen_range(0.5..3.0)).unwrap().materialize()
        } else {
            ConvAuxiliary::new(map, 2 * rng.gen_range(1..4) + 1, rng.gen_range(0.01..0.08), rng.gen_range(0.0..0.3))
                .unwrap()
                .materialize()
        };
        for c in map.geometry().cells() {
            cells += 1;
            let v = surface.cell(c);
            if !(map.ground_cell(c) <= v && v <= map.ceiling_cell(c)) {
                clamp_bad += 1;
            }
            let xy = map.geometry().cell_center(c);
            if map.is_occupied(&Point3::new(xy.x, xy.y, v)).unwrap() {
                occupied += 1;
            }
        }
    }
    (
        clamp_bad == 0 && occupied == 0,
        format!("surfaces: {cells} cells, {clamp_bad} outside the layers, {occupied} occupied"),
    )
}

/// Fractal regions: ground heights of a random scene thresholded at a
/// random quantile.
fn border_properties() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let (mut checked, mut bad) = (0, 0);
    for i in 0..100u64 {
        let map = generate_fractal_scene(i, (30, 30), 0.05, 1.0, None).unwrap();
        let g = *map.geometry();
        let mut heights = map.layer(Layer::Ground).to_vec();
        heights.sort_by(f64::total_cmp);
        let cut = heights[rng.gen_range(heights.len() / 4..3 * heights.len() / 4)];
        let region = BoolGrid::from_fn(g, |c| map.ground_cell(c) <= cut);
        let members: Vec<CellIndex> = g.cells().filter(|c| region.is_member(*c)).collect();
        let seed = members[rng.gen_range(0..members.len())];
        let border = trace_border(&region, seed).unwrap();
        if border.degenerate {
            continue;
        }
        checked += 1;
        let on_loop = |c: CellIndex| border.cells.contains(&c);
        let loop_ok = border.cells.iter().all(|c| {
            region.is_member(*c)
                && kcfrc::grid::MOORE_CLOCKWISE.iter().any(|(a, b)| !region.is_member(c.offset(*a, *b)))
        });
        let component = flood_component(&region, seed);
        let enclosed = g.cells().filter(|c| component.is_member(*c)).all(|c| on_loop(c) || border.winding(c) != 0);
        if !(loop_ok && enclosed) {
            bad += 1;
        }
    }
    (bad == 0 && checked > 50, format!("borders: {checked} non-degenerate loops, {bad} failing the flood-fill oracle"))
}

fn kinematics_properties() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let robots = [elspider_air(), a1()];
    let mut worst: f64 = 0.0;
    let mut missing = 0;
    for _ in 0..10_000 {
        let robot = &robots[rng.gen_range(0..2)];
        let leg = &robot.legs[rng.gen_range(0..robot.legs.len())];
        let l = &leg.joint_limits;
        let q = JointAngles::new(
            rng.gen_range(l.min[0]..l.max[0]),
            rng.gen_range(l.min[1]..l.max[1]),
            rng.gen_range(l.min[2]..l.max[2]),
        );
        let base = pose_from_xyz_rpy(
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..0.5)],
            [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3), rng.gen_range(-3.1..3.1)],
        );
        let foot = leg.forward_kinematics(&q, &base);
        let solutions = leg.inverse_kinematics(&foot, &base);
        if solutions.is_empty() {
            missing += 1;
            continue;
        }
        for s in solutions {
            worst = worst.max((leg.forward_kinematics(&s, &base) - foot).norm());
        }
    }
    (
        worst < 1e-9 && missing == 0,
        format!("FK/IK: 10000 configurations, worst round trip {worst:.2e} m, {missing} without a solution"),
    )
}

fn pose_distance(a: &Pose, b: &Pose) -> f64 {
    (a.translation.vector - b.translation.vector).norm() + a.rotation.angle_to(&b.rotation)
}

fn pose_properties() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let (mut endpoint_bad, mut worst) = (0, 0.0f64);
    for _ in 0..1000 {
        let mut random_pose = || {
            pose_from_xyz_rpy(
                [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..0.5)],
                [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-2.5..2.5)],
            )
        };
        let (p, q) = (random_pose(), random_pose());
        if interpolate_pose(&p, &q, 0.0).pose != p || interpolate_pose(&p, &q, 1.0).pose != q {
            endpoint_bad += 1;
        }
        let a: f64 = rng.gen_range(0.05..0.9);
        let r: f64 = rng.gen_range(a + 0.01..0.99);
        let mid = interpolate_pose(&p, &q, a).pose;
        let composed = interpolate_pose(&mid, &q, (r - a) / (1.0 - a)).pose;
        worst = worst.max(pose_distance(&composed, &interpolate_pose(&p, &q, r).pose));
    }
    (
        endpoint_bad == 0 && worst < 1e-9,
        format!("poses: 1000 pairs, {endpoint_bad} inexact endpoints, worst geodesic deviation {worst:.2e}"),
    )
}

/// Raises the ground inside a random box away from the lift-off foothold.
fn with_box(map: &LayeredGridMap, rng: &mut ChaCha8Rng, keep_clear: &Point3<f64>) -> Option<LayeredGridMap> {
    let g = *map.geometry();
    let (lo, hi) = g.extent();
    let half = Vector3::new(rng.gen_range(0.05..0.2), rng.gen_range(0.05..0.2), 0.0);
    let center = Point2::new(
        keep_clear.x + rng.gen_range(-0.4..0.4),
        keep_clear.y + rng.gen_range(-0.4..0.4),
    );
    if (center.x - keep_clear.x).abs() < half.x + 0.1 && (center.y - keep_clear.y).abs() < half.y + 0.1 {
        return None;
    }
    if center.x < lo.x || center.y < lo.y || center.x > hi.x || center.y > hi.y {
        return None;
    }
    let top = keep_clear.z + rng.gen_range(0.05..0.3);
    let ground: Vec<f64> = g
        .cells()
        .map(|c| {
            let xy = g.cell_center(c);
            let inside = (xy.x - center.x).abs() <= half.x && (xy.y - center.y).abs() <= half.y;
            if inside { map.ground_cell(c).max(top) } else { map.ground_cell(c) }
        })
        .collect();
    let ceiling: Vec<f64> = g.cells().map(|c| map.ceiling_cell(c).max(ground[g.flat(c)] + 1e-3)).collect();
    if ceiling.iter().zip(map.layer(Layer::Ceiling)).any(|(a, b)| a != b) {
        return None;
    }
    LayeredGridMap::new(g, ground, ceiling).ok()
}

fn monotonicity_properties(robot: &RobotModel) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(65);
    let (mut pairs, mut compared, mut flips) = (0, 0, 0);
    let mut seed = 700;
    while pairs < 50 {
        seed += 1;
        let scene = scene_for(seed, robot);
        let (k, s) = swing_of(&scene, seed);
        let p = scene.swing(k, s).unwrap().1.p();
        let Some(boxed) = with_box(&scene.map, &mut rng, &p) else { continue };
        let other = Scenario { map: boxed, states: scene.states.clone() };
        let lattice = scene.lattice(k, s).unwrap();
        let cells = lattice.subsample(SUBSAMPLE.0, SUBSAMPLE.1);
        let before_sdf = scene_sdf(&scene.map, robot).unwrap();
        let after_sdf = scene_sdf(&other.map, robot).unwrap();
        let before_setup = scene.setup(robot, &before_sdf, k, s).unwrap();
        let after_setup = other.setup(robot, &after_sdf, k, s).unwrap();
        let before_q = lattice.footholds(&scene.map);
        let after_q = lattice.footholds(&other.map);
        for config in [BatchConfig::keypoint(), BatchConfig::conv()] {
            let before = batch_check(&before_setup, &lattice, Some(&cells), &config).unwrap();
            let Ok(after) = batch_check(&after_setup, &lattice, Some(&cells), &config) else { continue };
            for &(r, c) in &cells {
                let i = r * lattice.cols + c;
                // Only candidates whose foothold the box leaves in place.
                if before_q[i] != after_q[i] {
                    continue;
                }
                compared += 1;
                if after.get(r, c) && !before.get(r, c) {
                    flips += 1;
                }
            }
        }
        pairs += 1;
    }
    (
        flips == 0,
        format!("obstacles: {pairs} scene pairs, {compared} verdicts compared, {flips} false-to-true flips"),
    )
}

fn criterion_6(robot: &RobotModel, trajectories: &TrajectoryStats) -> Outcome {
    let parts = [
        surface_properties(robot),
        border_properties(),
        kinematics_properties(),
        pose_properties(),
        (
            trajectories.timestamp_failures == 0,
            format!(
                "timestamps: {} trajectories, {} not strictly increasing",
                3 * trajectories.trajectories,
                trajectories.timestamp_failures
            ),
        ),
        monotonicity_properties(robot),
    ];
    Outcome {
        id: 6,
        name: "property suites",
        pass: parts.iter().all(|(ok, _)| *ok),
        detail: parts
            .iter()
            .map(|(ok, d)| format!("[{}] {d}", if *ok { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

#[test]
fn acceptance() {
    let robot = elspider_air();
    let soundness = soundness_sweep(&robot);
    let (c7, trajectories) = criterion_7(&robot);
    let outcomes = [
        criterion_1(&soundness),
        criterion_2(&soundness),
        criterion_3(&robot),
        criterion_4(&robot),
        criterion_5(),
        criterion_6(&robot, &trajectories),
        c7,
    ];
    // Written to the handle directly so the lines show without --nocapture.
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for o in &outcomes {
        let status = if o.pass { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {} [{status}] {}: {}", o.id, o.name, o.detail).unwrap();
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
