//! Compare the keypoint and convolutional auxiliary surfaces of one swing.

use kcfrc::robot::elspider_air;
use kcfrc::scene::{SceneConfig, SceneKind, Scenario};
use kcfrc::surface::{default_keypoints, ConvAuxiliary, HeightSurface, KeypointAuxiliary};

fn summary(name: &str, s: &HeightSurface, ground: &[f64]) {
    let lift: Vec<f64> = s.values().iter().zip(ground).map(|(v, g)| v - g).collect();
    let max = lift.iter().cloned().fold(0.0, f64::max);
    let raised = lift.iter().filter(|d| **d > 1e-9).count();
    println!("{name}: {raised} of {} cells above ground, highest lift {max:.3} m", lift.len());
}

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let scene = Scenario::generate(SceneKind::Dense, 4, &robot, &SceneConfig::desk())?;
    let (_, swing) = scene.swing(0, 0)?;
    let (p, q) = (swing.p(), swing.nominal_q());
    let ground = scene.map.layer(kcfrc::terrain::Layer::Ground);
    let key = KeypointAuxiliary::new(&scene.map, default_keypoints(&p, &q, 3), 1.0)?.materialize();
    let conv = ConvAuxiliary::new(&scene.map, 5, 0.03, 0.02)?.materialize();
    summary("keypoint", &key, ground);
    summary("convolutional", &conv, ground);
    Ok(())
}
