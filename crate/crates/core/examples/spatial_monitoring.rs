//! One spatial monitoring run: the fusion center adds a level per iteration
//! while it learns the range, the level placement and the margin.

use contour_monitor::field::{NoiseModel, SensorField};
use contour_monitor::monitoring::{run_spatial_monitoring, Scheme};
use contour_monitor::scenario::{replicate_world, ScenarioConfig};

fn main() -> contour_monitor::Result<()> {
    env_logger::init();
    let mut cfg = ScenarioConfig::default();
    cfg.monitoring.scheme = std::env::args()
        .nth(1)
        .map(|s| s.parse::<Scheme>())
        .transpose()
        .map_err(contour_monitor::Error::InvalidArgument)?
        .unwrap_or(Scheme::LmSg);

    let (field, deployment) = replicate_world(&cfg, 0);
    let seeds = cfg.seeds(0);
    let noise = NoiseModel { sigma: cfg.noise_sigma, taps: cfg.taps };
    let mut sensors = SensorField::new(&field, deployment, noise, seeds.noise);
    let (state, report) = run_spatial_monitoring(&cfg.monitoring, &field, &mut sensors, seeds.probe)?;

    println!("scheme {}", cfg.monitoring.scheme);
    println!("{:>3} {:>3} {:>9} {:>7} {:>8} {:>8} {:>8}", "n", "M", "delta", "reports", "cum", "proxy", "truth");
    for r in &report.spatial {
        println!(
            "{:>3} {:>3} {:>9.5} {:>7} {:>8} {:>8.4} {:>8.4}",
            r.n, r.m, r.delta, r.reports, r.cumulative_cost, r.error_proxy, r.error_vs_truth
        );
    }
    println!("learned range [{:.3}, {:.3}], next levels {}", state.range.0, state.range.1, state.levels.len());
    Ok(())
}
