//! Sampling-based planners and the fixed-shape baseline on a few candidates,
//! next to the keypoint check.

use kcfrc::planner::{ground_truth_reachable, rrt_connect_reachable, PlannerConfig};
use kcfrc::reach::{batch_check, BatchConfig};
use kcfrc::robot::elspider_air;
use kcfrc::scene::{scene_sdf, SceneConfig, SceneKind, Scenario};
use kcfrc::swing::{fec_check, FecConfig};

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let scene = Scenario::generate(SceneKind::Confined, 8, &robot, &SceneConfig::desk())?;
    let sdf = scene_sdf(&scene.map, &robot)?;
    let setup = scene.setup(&robot, &sdf, 0, 0)?;
    let lattice = scene.lattice(0, 0)?;
    let cells = lattice.subsample(6, 2);
    let key = batch_check(&setup, &lattice, Some(&cells), &BatchConfig::keypoint())?;
    let footholds = lattice.footholds(&scene.map);
    println!("cell     truth key fec rrt_1ms (iterations)");
    for (n, &(r, c)) in cells.iter().enumerate() {
        let Some(q) = footholds[r * lattice.cols + c] else { continue };
        let truth = ground_truth_reachable(&setup, &q, &PlannerConfig::ground_truth(n as u64))?;
        let fast = rrt_connect_reachable(&setup, &q, &PlannerConfig::rrt_1ms(n as u64))?;
        let fec = fec_check(&setup, &q, &FecConfig::default());
        let mark = |b: bool| if b { "yes" } else { "no" };
        println!(
            "({r:2},{c:2})  {:5} {:3} {:3} {:3} ({})",
            mark(truth),
            mark(key.get(r, c)),
            mark(fec),
            mark(fast.reachable),
            fast.iterations
        );
    }
    Ok(())
}
