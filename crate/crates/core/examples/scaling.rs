//! Check time against intersection border length on random corridors.

use kcfrc::scaling::{run_scaling, ScalingConfig};

fn main() -> kcfrc::Result<()> {
    let cases = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let report = run_scaling(cases, 1, &ScalingConfig::default())?;
    if let Some(fit) = report.fit {
        println!(
            "{cases} cases: time = {:.3e} ms/cell * border + {:.3e} ms, R^2 {:.3}",
            fit.slope, fit.intercept, fit.r_squared
        );
    }
    println!("median {:.4} ms, 95th percentile {:.4} ms", report.median_ms, report.p95_ms);
    Ok(())
}
