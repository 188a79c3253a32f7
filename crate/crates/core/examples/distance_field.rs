//! Build the signed distance field of a barrier scene and probe it on a
//! vertical line through the wall.

use kcfrc::sdf::build_sdf_default;
use kcfrc::terrain::{generate_fractal_scene, BarrierSpec};
use nalgebra::Point3;

fn main() -> kcfrc::Result<()> {
    let wall = BarrierSpec::wall(1.0, 0.12, 0.19);
    let map = generate_fractal_scene(3, (40, 40), 0.05, 0.0, Some(&wall))?;
    let started = std::time::Instant::now();
    let sdf = build_sdf_default(&map, (-0.1, 0.6))?;
    let [a, b, c] = sdf.dims();
    println!("{a} x {b} x {c} voxels in {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    for x in [0.7, 0.85, 0.95, 1.0] {
        let d: Vec<String> = [0.05, 0.15, 0.25, 0.35]
            .iter()
            .map(|z| format!("{:+.3}", sdf.query(&Point3::new(x, 1.0, *z))))
            .collect();
        println!("x = {x:.2}: distance at z = 0.05/0.15/0.25/0.35 -> {}", d.join(" "));
    }
    Ok(())
}
