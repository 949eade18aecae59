use std::fmt;

use log::{debug, warn};

use super::report::{IterationRecord, MonitoringReport};
use super::{
    delta_floor, initial_range_probe, query_sensors, reconstruct, truth_grid, DeltaState,
    KnownSignal, MonitoringConfig, MonitoringState, Scheme,
};
use crate::error::{Error, Result};
use crate::field::{ObservationSet, SensorDeployment, SensorField, SyntheticFieldModel};
use crate::interpolation::{value_range, Reconstruction};
use crate::metrics::mean_abs_diff;
use crate::quantization::{
    estimate_pdf, lloyd_max, quantile_levels, uniform_levels, ContourLevelSet, EmpiricalPdf, LloydMaxOptions,
};

/// An iteration that could not complete, with the state from before it.
#[derive(Debug)]
pub struct IterationFailure {
    pub state: MonitoringState,
    pub source: Error,
}

impl fmt::Display for IterationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iteration {} failed: {}", self.state.iteration + 1, self.source)
    }
}

impl std::error::Error for IterationFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

impl From<Box<IterationFailure>> for Error {
    fn from(f: Box<IterationFailure>) -> Self {
        f.source
    }
}

fn lloyd_max_or_last(pdf: &EmpiricalPdf, m: usize) -> Result<ContourLevelSet> {
    let initial = quantile_levels(pdf, m)?;
    match lloyd_max(pdf, &initial, LloydMaxOptions::default()) {
        Ok(r) => Ok(r.levels),
        Err(Error::NoConvergence { last, last_move, .. }) => {
            debug!("Lloyd-Max stopped at max iterations (move {last_move:e}); using last iterate");
            Ok(last)
        }
        Err(e) => Err(e),
    }
}

/// The `m` levels for the next query under `scheme`.
pub(crate) fn next_levels(
    scheme: Scheme,
    m: usize,
    range: (f64, f64),
    recon: &Reconstruction,
    known: Option<&KnownSignal>,
    bin_count: usize,
) -> Result<ContourLevelSet> {
    match scheme {
        Scheme::USg => uniform_levels(range.0, range.1, m),
        Scheme::LmSg => match estimate_pdf(recon, bin_count) {
            Ok(pdf) => lloyd_max_or_last(&pdf, m),
            Err(Error::DegeneratePdf(_)) => uniform_levels(range.0, range.1, m),
            Err(e) => Err(e),
        },
        Scheme::LmFixed => {
            let known = known.ok_or_else(|| {
                Error::InvalidArgument("LM-fixed needs the known signal statistics".into())
            })?;
            lloyd_max_or_last(&known.pdf, m)
        }
    }
}

/// One pass of the spatial loop: query, reconstruct, score, learn range, pdf
/// and margin, then add a level and place the new level set.
pub fn spatial_iteration(
    mut state: MonitoringState,
    deployment: &SensorDeployment,
    observations: &ObservationSet,
) -> std::result::Result<(MonitoringState, IterationRecord), Box<IterationFailure>> {
    let snapshot = state.clone();
    let fail = move |source: Error| {
        Box::new(IterationFailure {
            state: snapshot,
            source,
        })
    };
    let n = state.iteration + 1;
    let scheme = state.config.scheme;
    let delta_used = state.delta();
    let m_used = state.m;

    let reports = query_sensors(deployment, observations, &state.levels, delta_used);
    let fresh = match reconstruct(&reports, &state.config, n) {
        Ok(r) => r,
        Err(e) => return Err(fail(e)),
    };
    let baseline = state
        .last_reconstruction
        .clone()
        .unwrap_or_else(|| Reconstruction::zeros(state.config.grid));
    let got_fresh = fresh.is_some();
    let (recon, error_proxy) = match fresh {
        Some(r) => {
            let e = match mean_abs_diff(&r, &baseline) {
                Ok(e) => e,
                Err(e) => return Err(fail(e)),
            };
            (r, e)
        }
        None => {
            warn!("iteration {n}: {} reports, keeping previous reconstruction", reports.cost());
            let carried = state.delta_state.error_history.last().copied().unwrap_or(0.0);
            (baseline, carried)
        }
    };
    let error_vs_truth = state
        .truth
        .as_ref()
        .and_then(|t| mean_abs_diff(&recon, t).ok())
        .unwrap_or(f64::NAN);

    if !scheme.knows_signal() && got_fresh {
        let (lo, hi) = value_range(&recon);
        if hi > lo {
            state.range = (lo, hi);
        }
    }

    state.delta_state.record(error_proxy);
    if scheme.adapts_delta() {
        state.delta_state.adapt(delta_floor(state.range));
    }

    state.m += 1;
    state.levels = match next_levels(
        scheme,
        state.m,
        state.range,
        &recon,
        state.known.as_ref(),
        state.config.bin_count,
    ) {
        Ok(l) => l,
        Err(e) => return Err(fail(e)),
    };

    state.cost_log.push(reports.cost());
    state.iteration = n;
    state.last_reconstruction = Some(recon);

    let span = state.range.1 - state.range.0;
    if state.config.eps_stop > 0.0 && got_fresh && error_proxy < state.config.eps_stop * span {
        state.quiet_streak += 1;
    } else {
        state.quiet_streak = 0;
    }

    let record = IterationRecord {
        n,
        m: m_used,
        delta: delta_used,
        reports: reports.cost(),
        cumulative_cost: state.cost_log.iter().sum(),
        error_proxy,
        error_vs_truth,
        range: state.range,
    };
    Ok((state, record))
}

fn validate(config: &MonitoringConfig) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidArgument(m));
    if config.initial_m == 0 {
        return bad("initial M must be at least 1".into());
    }
    if config.m_max < config.initial_m {
        return bad(format!("M_max {} below initial M {}", config.m_max, config.initial_m));
    }
    if config.bin_count == 0 {
        return bad("bin count must be positive".into());
    }
    if !(config.initial_delta_scale > 0.0) {
        return bad("initial delta scale must be positive".into());
    }
    if let Some(mu) = config.mu {
        if !(mu > 0.0) {
            return bad("mu must be positive".into());
        }
    }
    if !(config.eps_stop >= 0.0) {
        return bad("eps_stop must be non-negative".into());
    }
    Ok(())
}

/// Probes the range, places equally spaced initial levels and sets the
/// initial margin to half their spacing.
pub fn initial_state(
    config: &MonitoringConfig,
    field: &SyntheticFieldModel,
    sensors: &mut SensorField,
    probe_seed: u64,
) -> Result<MonitoringState> {
    validate(config)?;
    let known = if config.scheme.knows_signal() {
        Some(KnownSignal::from_field(field, &config.grid, config.bin_count)?)
    } else {
        None
    };
    let range = match &known {
        Some(k) => k.range,
        None => {
            let probe = sensors.sense();
            initial_range_probe(sensors.deployment(), &probe, config.probe_count, probe_seed)?
        }
    };
    let levels = uniform_levels(range.0, range.1, config.initial_m)?;
    let spacing = (range.1 - range.0) / (config.initial_m + 1) as f64;
    let delta = config.initial_delta_scale * spacing / 2.0;
    Ok(MonitoringState {
        config: config.clone(),
        levels,
        m: config.initial_m,
        delta_state: DeltaState::new(delta, config.mu),
        last_reconstruction: None,
        iteration: 0,
        cost_log: Vec::new(),
        range,
        known,
        truth: Some(truth_grid(field, &config.grid)),
        quiet_streak: 0,
        total_sensors: sensors.deployment().len(),
    })
}

/// Runs spatial monitoring until `m_max` levels have been used or the error
/// has stayed below the stop threshold for two iterations.
pub fn run_spatial_monitoring(
    config: &MonitoringConfig,
    field: &SyntheticFieldModel,
    sensors: &mut SensorField,
    probe_seed: u64,
) -> Result<(MonitoringState, MonitoringReport)> {
    let mut state = initial_state(config, field, sensors, probe_seed)?;
    let mut report = MonitoringReport {
        total_sensors: state.total_sensors,
        delta_trace: vec![(0, state.delta())],
        ..MonitoringReport::default()
    };
    loop {
        let obs = sensors.sense();
        let (next, record) = spatial_iteration(state, sensors.deployment(), &obs)?;
        state = next;
        debug!(
            "{} n={} M={} delta={:.4} reports={} err={:.4} truth={:.4}",
            config.scheme, record.n, record.m, record.delta, record.reports, record.error_proxy,
            record.error_vs_truth
        );
        report.delta_trace.push((record.n, state.delta()));
        let done = record.m >= config.m_max || state.quiet_streak >= 2;
        report.spatial.push(record);
        if done {
            break;
        }
    }
    Ok((state, report))
}
