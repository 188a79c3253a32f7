//! Generate a fractal scene with a wall, round-trip it through both container
//! encodings and report the layer statistics.

use kcfrc::io::{load_map, save_map, Encoding};
use kcfrc::terrain::{generate_fractal_scene, BarrierSpec};

fn main() -> kcfrc::Result<()> {
    let wall = BarrierSpec::wall(1.0, 0.12, 0.19);
    let map = generate_fractal_scene(11, (40, 40), 0.05, 0.04, Some(&wall))?;
    let (lo, hi) = map.ground_range();
    println!("ground in [{lo:.3}, {hi:.3}] m, minimum clearance {:.3} m", map.min_clearance());

    let dir = std::env::temp_dir().join("kcfrc-terrain-io");
    std::fs::create_dir_all(&dir)?;
    for (name, encoding) in [("scene.kcfr", Encoding::Binary), ("scene.json", Encoding::Json)] {
        let path = dir.join(name);
        save_map(&map, &path, encoding)?;
        let back = load_map(&path)?;
        let bytes = std::fs::metadata(&path)?.len();
        println!("{name}: {bytes} bytes, identical after reload: {}", back == map);
    }
    Ok(())
}
