//! Cumulative cost and error of the three level schemes on shared replicates.
//! Pass an output directory to also write the merged tables.

use std::path::PathBuf;

use contour_monitor::monitoring::Scheme;
use contour_monitor::scenario::{compare_schemes, ScenarioConfig};

fn main() -> contour_monitor::Result<()> {
    env_logger::init();
    let out = std::env::args().nth(1).map(PathBuf::from);
    let cfg = ScenarioConfig::from_text("replicates = 4\nperiods = 0\neps_stop = 0\n")?;
    let cmp = compare_schemes(&cfg, &Scheme::ALL, out.as_deref())?;
    for scheme in Scheme::ALL {
        let mean = cmp.mean_spatial(scheme).unwrap_or_default();
        let at = |m: usize| mean.iter().find(|r| r.m == m).map_or(f64::NAN, |r| r.error_vs_truth);
        if let Some(last) = mean.last() {
            println!(
                "{scheme:>9}: cumulative cost {:>9.0}  error at M=5 {:.4}  at M=20 {:.4}",
                last.cumulative_cost, at(5), at(20)
            );
        }
    }
    Ok(())
}
