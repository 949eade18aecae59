use log::warn;

use super::report::{MonitoringReport, TemporalRecord};
use super::spatial::next_levels;
use super::{delta_floor, query_sensors, reconstruct, truth_grid, KnownSignal, MonitoringState};
use crate::error::{Error, Result};
use crate::field::{SensorField, SyntheticFieldModel};
use crate::interpolation::{value_range, Reconstruction};
use crate::metrics::{mean_abs_diff, reporting_fraction};

/// Tracks a field sequence with the number of levels frozen.
///
/// Each period senses the current field, queries with the current levels and
/// margin, reconstructs, refreshes the range and recomputes the same number
/// of levels. The margin stays fixed unless `temporal_adapt_delta` is set.
pub fn run_temporal_monitoring(
    mut state: MonitoringState,
    field_sequence: &[SyntheticFieldModel],
    sensors: &mut SensorField,
) -> Result<(MonitoringState, MonitoringReport)> {
    let scheme = state.config.scheme;
    let m = state.m;
    let total = sensors.deployment().len();
    if total == 0 {
        return Err(Error::InvalidArgument("empty deployment".into()));
    }
    let mut report = MonitoringReport {
        total_sensors: total,
        ..MonitoringReport::default()
    };
    for (idx, model) in field_sequence.iter().enumerate() {
        let period = idx + 1;
        sensors.set_field(model);
        let obs = sensors.sense();
        let truth = truth_grid(model, &state.config.grid);
        let delta_used = state.delta();

        let reports = query_sensors(sensors.deployment(), &obs, &state.levels, delta_used);
        let fresh = reconstruct(&reports, &state.config, state.iteration + period)?;
        let baseline = state
            .last_reconstruction
            .clone()
            .unwrap_or_else(|| Reconstruction::zeros(state.config.grid));
        let got_fresh = fresh.is_some();
        let recon = match fresh {
            Some(r) => r,
            None => {
                warn!("period {period}: {} reports, keeping previous reconstruction", reports.cost());
                baseline.clone()
            }
        };
        let error_proxy = if got_fresh {
            mean_abs_diff(&recon, &baseline)?
        } else {
            state.delta_state.error_history.last().copied().unwrap_or(0.0)
        };
        let error_vs_truth = mean_abs_diff(&recon, &truth)?;

        if state.config.temporal_adapt_delta && scheme.adapts_delta() {
            state.delta_state.record(error_proxy);
            state.delta_state.adapt(delta_floor(state.range));
        }

        if scheme.knows_signal() {
            let known = KnownSignal::from_field(model, &state.config.grid, state.config.bin_count)?;
            state.range = known.range;
            state.known = Some(known);
        } else if got_fresh {
            let (lo, hi) = value_range(&recon);
            if hi > lo {
                state.range = (lo, hi);
            }
        }
        state.levels = next_levels(
            scheme,
            m,
            state.range,
            &recon,
            state.known.as_ref(),
            state.config.bin_count,
        )?;
        state.last_reconstruction = Some(recon);
        state.truth = Some(truth);

        report.temporal.push(TemporalRecord {
            period,
            reports: reports.cost(),
            fraction: reporting_fraction(reports.cost(), total),
            error_vs_truth,
            error_proxy,
            delta: delta_used,
        });
    }
    debug_assert_eq!(state.m, m);
    Ok((state, report))
}
