//! The fusion-center engine.
//!
//! Spatial monitoring grows the number of contour levels by one per
//! iteration while it learns the signal range, the level placement and the
//! reporting margin. Temporal monitoring then tracks a changing field with
//! the number of levels and the margin frozen.

mod delta;
mod query;
mod report;
mod spatial;
mod temporal;

use std::fmt;
use std::str::FromStr;

pub use delta::{
    delta_floor, normalized_multiplier, update_delta, update_delta_mu, DeltaState, DELTA_FLOOR_REL,
};
pub use query::{initial_range_probe, query_sensors, Report, ReportingSet};
pub use report::{
    read_table, IterationRecord, MonitoringReport, TemporalRecord, DELTA_HEADER, SPATIAL_HEADER,
    TEMPORAL_HEADER,
};
pub use spatial::{initial_state, run_spatial_monitoring, spatial_iteration, IterationFailure};
pub use temporal::run_temporal_monitoring;

use crate::error::Result;
use crate::field::SyntheticFieldModel;
use crate::interpolation::{
    evaluate_spline, fit_biharmonic_spline, value_range, GridSpec, Reconstruction,
};
use crate::quantization::{EmpiricalPdf, DEFAULT_BIN_COUNT};

/// Level placement and margin policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Uniform levels, adapted margin, range learned from reconstructions.
    USg,
    /// Lloyd-Max levels from the known pdf and range, fixed margin.
    LmFixed,
    /// Lloyd-Max levels from the estimated pdf, adapted margin.
    LmSg,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::USg, Scheme::LmFixed, Scheme::LmSg];

    pub fn adapts_delta(self) -> bool {
        !matches!(self, Scheme::LmFixed)
    }

    pub fn uses_lloyd_max(self) -> bool {
        !matches!(self, Scheme::USg)
    }

    pub fn knows_signal(self) -> bool {
        matches!(self, Scheme::LmFixed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::USg => "U-SG",
            Scheme::LmFixed => "LM-fixed",
            Scheme::LmSg => "LM-SG",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "u-sg" | "usg" => Ok(Scheme::USg),
            "lm-fixed" | "lmfixed" => Ok(Scheme::LmFixed),
            "lm-sg" | "lmsg" => Ok(Scheme::LmSg),
            other => Err(format!("unknown scheme `{other}` (expected U-SG, LM-fixed or LM-SG)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitoringConfig {
    pub scheme: Scheme,
    pub initial_m: usize,
    /// Spatial monitoring stops after the iteration that used this many levels.
    pub m_max: usize,
    pub probe_count: usize,
    /// Stop early once the successive-reconstruction error stays below this
    /// fraction of the discovered span for two iterations. 0 disables.
    pub eps_stop: f64,
    pub bin_count: usize,
    /// Multiplies the half-spacing initial margin.
    pub initial_delta_scale: f64,
    /// Reports beyond this count are binned spatially before the spline fit.
    pub max_fit_points: usize,
    pub grid: GridSpec,
    /// Fixed-step margin rule instead of the normalized one.
    pub mu: Option<f64>,
    /// Keep adapting the margin during temporal monitoring.
    pub temporal_adapt_delta: bool,
}

impl Default for MonitoringConfig {
    fn default() -> Self {
        MonitoringConfig {
            scheme: Scheme::LmSg,
            initial_m: 3,
            m_max: 25,
            probe_count: 2,
            eps_stop: 0.01,
            bin_count: DEFAULT_BIN_COUNT,
            initial_delta_scale: 1.0,
            max_fit_points: 900,
            grid: GridSpec::standard(),
            mu: None,
            temporal_adapt_delta: false,
        }
    }
}

/// Range and pdf handed to the scheme that is told the signal statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownSignal {
    pub range: (f64, f64),
    pub pdf: EmpiricalPdf,
}

impl KnownSignal {
    /// Histogram of the true field sampled on `grid`.
    pub fn from_field(model: &SyntheticFieldModel, grid: &GridSpec, bin_count: usize) -> Result<Self> {
        let truth = truth_grid(model, grid);
        let pdf = EmpiricalPdf::from_samples(&truth.grid, bin_count)?;
        Ok(KnownSignal {
            range: value_range(&truth),
            pdf,
        })
    }
}

/// The true field on the reconstruction lattice.
pub fn truth_grid(model: &SyntheticFieldModel, grid: &GridSpec) -> Reconstruction {
    Reconstruction::from_fn(*grid, |x, y| model.evaluate(x, y))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitoringState {
    pub config: MonitoringConfig,
    pub levels: crate::quantization::ContourLevelSet,
    pub m: usize,
    pub delta_state: DeltaState,
    pub last_reconstruction: Option<Reconstruction>,
    pub iteration: usize,
    pub cost_log: Vec<usize>,
    /// Current (L_min, L_max).
    pub range: (f64, f64),
    pub known: Option<KnownSignal>,
    /// Ground truth for evaluation only; never feeds back into the loop.
    pub truth: Option<Reconstruction>,
    /// Consecutive iterations whose error fell below the stop threshold.
    pub quiet_streak: usize,
    pub total_sensors: usize,
}

impl MonitoringState {
    pub fn delta(&self) -> f64 {
        self.delta_state.delta
    }

    pub fn scheme(&self) -> Scheme {
        self.config.scheme
    }
}

/// Averages reports falling in the same cell of a `k x k` lattice, with `k`
/// chosen so at most `cap` cells exist. Returns the inputs untouched when
/// they already fit.
pub fn thin_reports(
    points: &[(f64, f64)],
    values: &[f64],
    cap: usize,
    width: f64,
    height: f64,
) -> (Vec<(f64, f64)>, Vec<f64>) {
    if points.len() <= cap || cap < 4 {
        return (points.to_vec(), values.to_vec());
    }
    let k = (cap as f64).sqrt().floor() as usize;
    let cell = |v: f64, extent: f64| ((v / extent * k as f64) as usize).min(k - 1);
    let mut acc = vec![(0.0f64, 0.0f64, 0.0f64, 0usize); k * k];
    for (p, v) in points.iter().zip(values) {
        let idx = cell(p.0, width) * k + cell(p.1, height);
        let a = &mut acc[idx];
        a.0 += p.0;
        a.1 += p.1;
        a.2 += v;
        a.3 += 1;
    }
    let mut out_p = Vec::new();
    let mut out_v = Vec::new();
    for (sx, sy, sv, n) in acc.into_iter().filter(|a| a.3 > 0) {
        let n = n as f64;
        out_p.push((sx / n, sy / n));
        out_v.push(sv / n);
    }
    (out_p, out_v)
}

/// Fits and evaluates a spline through the reports. `None` when fewer than
/// two distinct sensors reported.
pub(crate) fn reconstruct(
    reports: &ReportingSet,
    config: &MonitoringConfig,
    iteration: usize,
) -> Result<Option<Reconstruction>> {
    let (pts, vals) = thin_reports(
        &reports.points(),
        &reports.values(),
        config.max_fit_points,
        config.grid.width,
        config.grid.height,
    );
    match fit_biharmonic_spline(&pts, &vals) {
        Ok(model) => {
            let mut recon = evaluate_spline(&model, &config.grid);
            recon.iteration = iteration;
            Ok(Some(recon))
        }
        Err(crate::error::Error::DegenerateInput { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert!("lm".parse::<Scheme>().is_err());
    }

    #[test]
    fn thinning_bounds_point_count() {
        let pts: Vec<(f64, f64)> = (0..2000)
            .map(|i| ((i % 50) as f64 * 2.0 + 0.5, (i / 50) as f64 * 2.5 + 0.1))
            .collect();
        let vals: Vec<f64> = (0..2000).map(|i| i as f64).collect();
        let (p, v) = thin_reports(&pts, &vals, 400, 100.0, 100.0);
        assert!(p.len() <= 400 && p.len() == v.len());
        let (p, _) = thin_reports(&pts, &vals, 5000, 100.0, 100.0);
        assert_eq!(p.len(), 2000);
    }

    #[test]
    fn thinning_averages_within_cells() {
        let pts = vec![(1.0, 1.0), (2.0, 2.0), (90.0, 90.0), (91.0, 91.0), (50.0, 1.0)];
        let vals = vec![1.0, 3.0, 10.0, 20.0, 7.0];
        let (p, v) = thin_reports(&pts, &vals, 4, 100.0, 100.0);
        assert_eq!(p, vec![(1.5, 1.5), (50.0, 1.0), (90.5, 90.5)]);
        assert_eq!(v, vec![2.0, 7.0, 15.0]);
    }
}
