//! Initialize and smooth a swing trajectory, then write it as CSV.

use kcfrc::robot::elspider_air;
use kcfrc::scene::{scene_sdf, SceneConfig, SceneKind, Scenario};
use kcfrc::swing::{plan_swing, PlanConfig};

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let scene = Scenario::generate(SceneKind::UClamp, 5, &robot, &SceneConfig::desk())?;
    let sdf = scene_sdf(&scene.map, &robot)?;
    let setup = scene.setup(&robot, &sdf, 0, 0)?;
    let lattice = scene.lattice(0, 0)?;
    let footholds = lattice.footholds(&scene.map);
    // Farthest reachable candidate from the lift-off point.
    let mut best = None;
    for q in footholds.iter().flatten() {
        let plan = plan_swing(&setup, q, &PlanConfig::default())?;
        let d = (q - setup.p).norm();
        if plan.result.reachable && best.as_ref().is_none_or(|(bd, _)| d > *bd) {
            best = Some((d, plan));
        }
    }
    let Some((distance, plan)) = best else {
        println!("no reachable candidate");
        return Ok(());
    };
    let (initial, smoothed) = (plan.initial.unwrap(), plan.smoothed.unwrap());
    println!(
        "{:.3} m step, {:?}: path {:.3} -> {:.3} m, acceleration cost {:.3} -> {:.3}",
        distance,
        plan.result.verdict,
        initial.length(),
        smoothed.length(),
        initial.acceleration_cost(),
        smoothed.acceleration_cost()
    );
    let path = std::env::temp_dir().join("kcfrc-swing.csv");
    std::fs::write(&path, smoothed.to_csv())?;
    println!("smoothed samples written to {}", path.display());
    Ok(())
}
