//! Margin traces from several initial margins on a noiseless field.

use contour_monitor::scenario::{sweep_initial_delta, ScenarioConfig};

fn main() -> contour_monitor::Result<()> {
    let cfg = ScenarioConfig::from_text("noise_sigma = 0\nreplicates = 2\nm_max = 22\neps_stop = 0\n")?;
    let scales = [0.5, 1.0, 2.0];
    let sweep = sweep_initial_delta(&cfg, &scales, None)?;
    for r in 0..cfg.replicates {
        println!("replicate {r}");
        for (scale, per) in scales.iter().zip(&sweep.traces) {
            let trace = &per[r];
            let first = trace.first().map_or(f64::NAN, |d| d.1);
            let last = trace.last().map_or(f64::NAN, |d| d.1);
            println!("  scale {scale:>3}: delta {first:.5} -> {last:.5}");
        }
        println!("  spread of final margins {:.2}x", sweep.final_spread(r));
    }
    Ok(())
}
