//! Reporting-margin adaptation driven by the trend of the reconstruction error.

use log::warn;

use crate::error::{Error, Result};

/// Errors below this are treated as zero by the normalized update.
pub const ZERO_ERROR: f64 = 1e-12;

/// Lower bound on the margin, relative to the current signal span.
pub const DELTA_FLOOR_REL: f64 = 1e-6;

pub fn delta_floor(range: (f64, f64)) -> f64 {
    (DELTA_FLOOR_REL * (range.1 - range.0)).max(f64::MIN_POSITIVE)
}

/// The normalized update factor `1 + (e1 - e2) / (e1 + e2)`.
///
/// Evaluated as `2 e1 / (e1 + e2)`, which avoids cancellation when `e1` is
/// much smaller than `e2`. Lies strictly inside (0, 2) for positive errors.
#[inline]
pub fn normalized_multiplier(err_prev: f64, err_prev2: f64) -> f64 {
    2.0 * err_prev / (err_prev + err_prev2)
}

/// Normalized stochastic-gradient margin update.
///
/// `err_prev` is the most recent error, `err_prev2` the one before it. A
/// growing error widens the margin (more sensors report), a shrinking error
/// narrows it.
pub fn update_delta(delta_prev: f64, err_prev: f64, err_prev2: f64) -> Result<f64> {
    if !(delta_prev > 0.0) || !delta_prev.is_finite() {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta_prev}")));
    }
    if err_prev.abs() < ZERO_ERROR && err_prev2.abs() < ZERO_ERROR {
        return Ok(delta_prev);
    }
    if !(err_prev > 0.0 && err_prev2 > 0.0) || !err_prev.is_finite() || !err_prev2.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "errors must be positive, got {err_prev} and {err_prev2}"
        )));
    }
    Ok(delta_prev * normalized_multiplier(err_prev, err_prev2))
}

/// Un-normalized update with a fixed step `mu`. Not self-stabilizing: a
/// non-positive result is replaced by `floor`.
pub fn update_delta_mu(delta_prev: f64, err_prev: f64, err_prev2: f64, mu: f64, floor: f64) -> f64 {
    let raw = delta_prev * (1.0 + mu * (err_prev - err_prev2));
    if raw <= 0.0 || !raw.is_finite() {
        warn!("margin update with mu = {mu} gave {raw}; clamping to {floor}");
        floor
    } else {
        raw
    }
}

/// Margin plus the error history that drives it.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaState {
    pub delta: f64,
    pub error_history: Vec<f64>,
    /// When set, the fixed-step rule is used instead of the normalized one.
    pub mu: Option<f64>,
}

impl DeltaState {
    pub fn new(delta: f64, mu: Option<f64>) -> Self {
        DeltaState {
            delta,
            error_history: Vec::new(),
            mu,
        }
    }

    pub fn record(&mut self, error: f64) {
        self.error_history.push(error);
    }

    /// Applies one update from the last two recorded errors; no-op with fewer than two.
    pub fn adapt(&mut self, floor: f64) {
        let n = self.error_history.len();
        if n < 2 {
            return;
        }
        let (e1, e2) = (self.error_history[n - 1], self.error_history[n - 2]);
        let next = match self.mu {
            Some(mu) => update_delta_mu(self.delta, e1, e2, mu, floor),
            None => match update_delta(self.delta, e1, e2) {
                Ok(d) => d,
                Err(e) => {
                    warn!("keeping delta {}: {e}", self.delta);
                    self.delta
                }
            },
        };
        self.delta = next.max(floor);
    }
}
