//! Spatial monitoring followed by tracking a drifting field with the learned
//! number of levels and margin.

use contour_monitor::scenario::{run_replicate, ScenarioConfig};

fn main() -> contour_monitor::Result<()> {
    env_logger::init();
    let cfg = ScenarioConfig::from_text("periods = 30\ndrift_per_period = 1.5\n")?;
    let report = run_replicate(&cfg, 0)?;
    println!(
        "spatial: {} iterations, final M {:?}, margin {:.5}",
        report.spatial.len(),
        report.final_m(),
        report.final_delta().unwrap_or(f64::NAN)
    );
    println!("{:>6} {:>7} {:>8} {:>8}", "period", "reports", "fraction", "error");
    for t in &report.temporal {
        println!("{:>6} {:>7} {:>8.4} {:>8.4}", t.period, t.reports, t.fraction, t.error_vs_truth);
    }
    println!("mean fraction {:.4}", report.mean_temporal_fraction().unwrap_or(0.0));
    Ok(())
}
