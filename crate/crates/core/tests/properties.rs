use nalgebra::{Point2, Point3};
use proptest::prelude::*;

use kcfrc::grid::{CellIndex, GridGeometry};
use kcfrc::io::{load_map, save_map, Encoding};
use kcfrc::leg::JointAngles;
use kcfrc::pose::{interpolate_pose, pose_from_xyz_rpy};
use kcfrc::reach::{flood_component, trace_border, BoolGrid, CellSet};
use kcfrc::robot::{a1, elspider_air};
use kcfrc::scaling::{ConvexHull, LinearFit};
use kcfrc::surface::{Keypoint, KeypointAuxiliary};
use kcfrc::terrain::generate_fractal_scene;

fn unit() -> impl Strategy<Value = f64> {
    0.0..1.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ik_inverts_fk(robot_a1 in any::<bool>(), leg in 0usize..6, u in (unit(), unit(), unit()), yaw in -3.1..3.1f64) {
        let robot = if robot_a1 { a1() } else { elspider_air() };
        let leg = &robot.legs[leg % robot.legs.len()];
        let l = &leg.joint_limits;
        let lerp = |i: usize, t: f64| l.min[i] + (l.max[i] - l.min[i]) * t;
        let q = JointAngles::new(lerp(0, u.0), lerp(1, u.1), lerp(2, u.2));
        let base = pose_from_xyz_rpy([0.3, -0.2, 0.4], [0.1, -0.05, yaw]);
        let foot = leg.forward_kinematics(&q, &base);
        let solutions = leg.inverse_kinematics(&foot, &base);
        prop_assert!(!solutions.is_empty());
        for s in solutions {
            prop_assert!((leg.forward_kinematics(&s, &base) - foot).norm() < 1e-9);
        }
    }

    #[test]
    fn pose_interpolation_stays_on_the_geodesic(
        a in (-1.0..1.0f64, -1.0..1.0f64, -0.5..0.5f64, -2.5..2.5f64),
        b in (-1.0..1.0f64, -1.0..1.0f64, -0.5..0.5f64, -2.5..2.5f64),
        s in 0.05..0.9f64,
        t in 0.0..1.0f64,
    ) {
        let p = pose_from_xyz_rpy([a.0, a.1, 0.3], [a.2, -a.2, a.3]);
        let q = pose_from_xyz_rpy([b.0, b.1, 0.2], [b.2, 0.5 * b.2, b.3]);
        prop_assert_eq!(interpolate_pose(&p, &q, 0.0).pose, p);
        prop_assert_eq!(interpolate_pose(&p, &q, 1.0).pose, q);
        let r = s + (1.0 - s) * t;
        let mid = interpolate_pose(&p, &q, s).pose;
        let composed = interpolate_pose(&mid, &q, (r - s) / (1.0 - s)).pose;
        let direct = interpolate_pose(&p, &q, r).pose;
        prop_assert!((composed.translation.vector - direct.translation.vector).norm() < 1e-9);
        prop_assert!(composed.rotation.angle_to(&direct.rotation) < 1e-9);
    }

    #[test]
    fn keypoint_surface_stays_between_layers(seed in 0u64..1000, z in prop::collection::vec(-0.5..1.0f64, 1..5), k in 0.5..3.0f64) {
        let map = generate_fractal_scene(seed, (20, 20), 0.05, 0.6, None).unwrap();
        let (lo, hi) = map.geometry().extent();
        let n = z.len() as f64;
        let keypoints = z
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let xy = lo + (hi - lo) * ((i as f64 + 0.5) / n);
                Keypoint::new(Point3::new(xy.x, xy.y, *h))
            })
            .collect();
        let surface = KeypointAuxiliary::new(&map, keypoints, k).unwrap().materialize();
        for c in map.geometry().cells() {
            let v = surface.cell(c);
            prop_assert!(map.ground_cell(c) <= v && v <= map.ceiling_cell(c));
        }
    }

    #[test]
    fn border_encloses_the_seed_component(bits in prop::collection::vec(any::<bool>(), 144), pick in any::<prop::sample::Index>()) {
        let g = GridGeometry::new(0.1, [0.0, 0.0], 12, 12).unwrap();
        // Majority smoothing turns random bits into blobs.
        let raw = BoolGrid::from_fn(g, |c| bits[g.flat(c)]);
        let region = BoolGrid::from_fn(g, |c| {
            let n = kcfrc::grid::MOORE_CLOCKWISE.iter().filter(|(a, b)| raw.is_member(c.offset(*a, *b))).count();
            n >= 4
        });
        let members: Vec<CellIndex> = g.cells().filter(|c| region.is_member(*c)).collect();
        prop_assume!(!members.is_empty());
        let seed = members[pick.index(members.len())];
        let border = trace_border(&region, seed).unwrap();
        for c in &border.cells {
            prop_assert!(region.is_member(*c));
            prop_assert!(kcfrc::grid::MOORE_CLOCKWISE.iter().any(|(a, b)| !region.is_member(c.offset(*a, *b))));
        }
        if !border.degenerate {
            let component = flood_component(&region, seed);
            for c in g.cells().filter(|c| component.is_member(*c)) {
                prop_assert!(border.cells.contains(&c) || border.winding(c) != 0);
            }
        }
    }

    #[test]
    fn hull_contains_its_points(points in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 4..14)) {
        let points: Vec<Point3<f64>> = points.into_iter().map(|(x, y, z)| Point3::new(x, y, z)).collect();
        if let Ok(hull) = ConvexHull::from_points(&points) {
            let centroid = points.iter().fold(Point3::origin(), |acc, p| acc + p.coords / points.len() as f64);
            prop_assert!(hull.contains(&centroid));
            for p in &points {
                prop_assert!(hull.contains(p));
            }
            let (lo, hi) = hull.bounds();
            prop_assert!(!hull.contains(&(hi + (hi - lo) * 0.01)));
        }
    }

    #[test]
    fn linear_fit_recovers_exact_lines(slope in -5.0..5.0f64, intercept in -3.0..3.0f64, n in 3usize..40) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * 1.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| slope * x + intercept).collect();
        let fit = LinearFit::fit(&xs, &ys).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-9);
        prop_assert!((fit.intercept - intercept).abs() < 1e-9);
        if slope.abs() > 1e-6 {
            prop_assert!((fit.r_squared - 1.0).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn maps_round_trip_bit_exact(seed in 0u64..10_000, json in any::<bool>()) {
        let map = generate_fractal_scene(seed, (16, 24), 0.05, 0.8, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let encoding = if json { Encoding::Json } else { Encoding::Binary };
        let path = dir.path().join(if json { "map.json" } else { "map.bin" });
        save_map(&map, &path, encoding).unwrap();
        let back = load_map(&path).unwrap();
        prop_assert_eq!(&back, &map);
        let probe = Point2::new(0.37, 0.52);
        prop_assert_eq!(back.ground_at(probe).unwrap().to_bits(), map.ground_at(probe).unwrap().to_bits());
    }
}
