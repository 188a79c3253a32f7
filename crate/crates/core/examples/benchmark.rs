//! Benchmark every method on one scene per kind over a 10 x 10 sub-lattice.

use kcfrc::bench::{bench_scenario, BenchConfig, Method};
use kcfrc::robot::elspider_air;
use kcfrc::scene::{SceneConfig, SceneKind, Scenario};

fn main() -> kcfrc::Result<()> {
    let robot = elspider_air();
    let config = BenchConfig { subsample: Some((3, 1)), ..BenchConfig::default() };
    println!("{:10} {:10} {:>9} {:>9} {:>7} {:>9}", "scene", "method", "precision", "recall", "acc", "time ms");
    for (seed, kind) in SceneKind::ALL.into_iter().enumerate() {
        let scene = Scenario::generate(kind, seed as u64, &robot, &SceneConfig::desk())?;
        let report = bench_scenario(&scene, &robot, &Method::ALL, &config)?;
        for m in &report.methods {
            println!(
                "{:10} {:10} {:9.3} {:9.3} {:7.3} {:9.3}",
                kind.as_str(),
                m.method.as_str(),
                m.precision.value,
                m.recall.value,
                m.accuracy.value,
                m.avg_time_ms
            );
        }
    }
    Ok(())
}
