//! Single reachability query with its verdict and witness polyline.

use kcfrc::domain::PitdDomain;
use kcfrc::reach::{check_reachability, ReachConfig};
use kcfrc::robot::elspider_air;
use kcfrc::scene::{scene_sdf, SceneConfig, SceneKind, Scenario};
use kcfrc::surface::{default_keypoints, KeypointAuxiliary};

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let scene = Scenario::generate(SceneKind::Barrier, 1, &robot, &SceneConfig::desk())?;
    let sdf = scene_sdf(&scene.map, &robot)?;
    let setup = scene.setup(&robot, &sdf, 0, 0)?;
    let lattice = scene.lattice(0, 0)?;
    let footholds = lattice.footholds(&scene.map);
    for (r, c) in [(15, 15), (5, 25), (25, 5)] {
        let Some(q) = footholds[r * lattice.cols + c] else { continue };
        let dom = PitdDomain::new(setup.leg_index, setup.leg, &sdf, setup.start_pose, setup.end_pose, (setup.p, q), Default::default());
        let surface = KeypointAuxiliary::new(&scene.map, default_keypoints(&setup.p, &q, 3), 1.0)?;
        let result = check_reachability(&scene.map, &dom, surface, &setup.p, &q, &ReachConfig::default())?;
        let witness: Vec<String> = result.witness.iter().map(|c| format!("({},{})", c.i, c.j)).collect();
        println!(
            "candidate ({r},{c}) at ({:.3}, {:.3}, {:.3}): {:?}, witness {}",
            q.x,
            q.y,
            q.z,
            result.verdict,
            if witness.is_empty() { "-".into() } else { witness.join(" -> ") }
        );
    }
    Ok(())
}
