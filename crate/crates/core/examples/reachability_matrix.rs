//! Full 30 x 30 candidate matrix in both surface modes, drawn as text.

use kcfrc::reach::{batch_check, BatchConfig};
use kcfrc::robot::elspider_air;
use kcfrc::scene::{scene_sdf, SceneConfig, SceneKind, Scenario};

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let scene = Scenario::generate(SceneKind::Confined, 2, &robot, &SceneConfig::desk())?;
    let sdf = scene_sdf(&scene.map, &robot)?;
    let setup = scene.setup(&robot, &sdf, 0, 0)?;
    let lattice = scene.lattice(0, 0)?;
    let key = batch_check(&setup, &lattice, None, &BatchConfig::keypoint())?;
    let conv = batch_check(&setup, &lattice, None, &BatchConfig::conv())?;
    println!(
        "keypoint: {} reachable in {:.2} ms; convolutional: {} reachable in {:.2} ms",
        key.count(),
        key.total_nanos as f64 * 1e-6,
        conv.count(),
        conv.total_nanos as f64 * 1e-6
    );
    println!("# both, k keypoint only, c convolutional only");
    for r in 0..lattice.rows {
        let row: String = (0..lattice.cols)
            .map(|c| match (key.get(r, c), conv.get(r, c)) {
                (true, true) => '#',
                (true, false) => 'k',
                (false, true) => 'c',
                (false, false) => '.',
            })
            .collect();
        println!("{row}");
    }
    Ok(())
}
