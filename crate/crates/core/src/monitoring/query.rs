//! Range probing and contour-band sensor queries.

use rand::seq::index;

use crate::error::{Error, Result};
use crate::field::{ObservationSet, SensorDeployment};
use crate::quantization::ContourLevelSet;
use crate::seed;

/// One transmission to the fusion center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Report {
    pub sensor_id: u32,
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportingSet {
    pub reports: Vec<Report>,
    /// Zero-based indices of the levels each report falls near.
    pub matched_levels: Vec<Vec<usize>>,
}

impl ReportingSet {
    /// Number of transmitting sensors.
    pub fn cost(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.reports.iter().map(|r| (r.x, r.y)).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.reports.iter().map(|r| r.value).collect()
    }
}

/// Min and max of the readings of `probe_count` distinct sensors chosen at random.
pub fn initial_range_probe(
    deployment: &SensorDeployment,
    observations: &ObservationSet,
    probe_count: usize,
    rng_seed: u64,
) -> Result<(f64, f64)> {
    if probe_count < 2 {
        return Err(Error::InvalidArgument(format!("probe count must be >= 2, got {probe_count}")));
    }
    let n = deployment.len().min(observations.len());
    if probe_count > n {
        return Err(Error::ProbeCount {
            requested: probe_count,
            available: n,
        });
    }
    let mut rng = seed::rng(rng_seed);
    let picked = index::sample(&mut rng, n, probe_count);
    Ok(picked
        .iter()
        .map(|i| observations.readings[i].value)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))))
}

/// Every sensor whose reading lies within `delta` of some level reports once.
pub fn query_sensors(
    deployment: &SensorDeployment,
    observations: &ObservationSet,
    levels: &ContourLevelSet,
    delta: f64,
) -> ReportingSet {
    debug_assert!(delta > 0.0);
    let levels = levels.levels();
    let mut out = ReportingSet::default();
    for (r, s) in observations.readings.iter().zip(&deployment.sensors) {
        debug_assert_eq!(r.sensor_id, s.id);
        let v = r.value;
        let start = levels.partition_point(|&l| l < v - delta);
        let matched: Vec<usize> = (start..levels.len())
            .take_while(|&i| levels[i] <= v + delta)
            .filter(|&i| levels[i] - delta <= v && v <= levels[i] + delta)
            .collect();
        if !matched.is_empty() {
            out.reports.push(Report {
                sensor_id: s.id,
                x: s.x,
                y: s.y,
                value: v,
            });
            out.matched_levels.push(matched);
        }
    }
    out
}
