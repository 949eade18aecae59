//! Synthetic ground-truth field, sensor deployment and noisy observations.
//!
//! The field is a sum of two sets of isotropic, unnormalized Gaussian bumps:
//! a wide set and a narrow set. One of the two sets can be marked as drifting;
//! [`SyntheticFieldModel::shift_components`] moves it horizontally and wraps it
//! around the field width.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub amplitude: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub sigma: f64,
}

impl GaussianComponent {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.amplitude * (-(dx * dx + dy * dy) / (2.0 * self.sigma * self.sigma)).exp()
    }
}

/// Which component set moves under temporal drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftSet {
    A,
    #[default]
    B,
}

impl FromStr for DriftSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(DriftSet::A),
            "b" => Ok(DriftSet::B),
            other => Err(format!("unknown drift set `{other}` (expected a or b)")),
        }
    }
}

impl std::fmt::Display for DriftSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DriftSet::A => "a",
            DriftSet::B => "b",
        })
    }
}

/// Parameters for drawing a random field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldParams {
    pub n_a: usize,
    pub n_b: usize,
    pub sigma_a: f64,
    pub sigma_b: f64,
    /// Amplitudes are drawn uniformly from `(amplitude_min, amplitude_max]`.
    pub amplitude_min: f64,
    pub amplitude_max: f64,
    pub width: f64,
    pub height: f64,
    pub drift: DriftSet,
}

impl Default for FieldParams {
    fn default() -> Self {
        FieldParams {
            n_a: 150,
            n_b: 150,
            sigma_a: 10.0,
            sigma_b: 3.0,
            amplitude_min: 0.0,
            amplitude_max: 1.0,
            width: 100.0,
            height: 100.0,
            drift: DriftSet::B,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticFieldModel {
    pub components_a: Vec<GaussianComponent>,
    pub components_b: Vec<GaussianComponent>,
    pub width: f64,
    pub height: f64,
    pub drift: DriftSet,
}

impl SyntheticFieldModel {
    pub fn empty(width: f64, height: f64) -> Self {
        SyntheticFieldModel {
            components_a: Vec::new(),
            components_b: Vec::new(),
            width,
            height,
            drift: DriftSet::B,
        }
    }

    /// Draws a field with means uniform over the rectangle.
    pub fn random(params: &FieldParams, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let mut draw = |n: usize, sigma: f64| -> Vec<GaussianComponent> {
            (0..n)
                .map(|_| {
                    let u: f64 = rng.gen();
                    GaussianComponent {
                        amplitude: params.amplitude_max
                            - u * (params.amplitude_max - params.amplitude_min),
                        mean_x: rng.gen::<f64>() * params.width,
                        mean_y: rng.gen::<f64>() * params.height,
                        sigma,
                    }
                })
                .collect()
        };
        let components_a = draw(params.n_a, params.sigma_a);
        let components_b = draw(params.n_b, params.sigma_b);
        SyntheticFieldModel {
            components_a,
            components_b,
            width: params.width,
            height: params.height,
            drift: params.drift,
        }
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let a: f64 = self.components_a.iter().map(|c| c.eval(x, y)).sum();
        let b: f64 = self.components_b.iter().map(|c| c.eval(x, y)).sum();
        a + b
    }

    /// Moves the drifting set by `dx`, wrapping means modulo the field width.
    pub fn shift_components(&self, dx: f64) -> Self {
        let mut out = self.clone();
        let width = self.width;
        let set = match self.drift {
            DriftSet::A => &mut out.components_a,
            DriftSet::B => &mut out.components_b,
        };
        for c in set.iter_mut() {
            c.mean_x = (c.mean_x + dx).rem_euclid(width);
        }
        out
    }

    /// `steps` successive drifts of `dx`, starting with the unshifted model.
    pub fn drift_sequence(&self, dx: f64, steps: usize) -> Vec<SyntheticFieldModel> {
        let mut seq = Vec::with_capacity(steps);
        let mut current = self.clone();
        for _ in 0..steps {
            let next = current.shift_components(dx);
            seq.push(current);
            current = next;
        }
        seq
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("# contour-monitor field model v1\n");
        s.push_str("# a|b <amplitude> <mean_x> <mean_y> <sigma>\n");
        let _ = writeln!(s, "width {}", self.width);
        let _ = writeln!(s, "height {}", self.height);
        let _ = writeln!(s, "drift {}", self.drift);
        for (tag, set) in [("a", &self.components_a), ("b", &self.components_b)] {
            for c in set {
                let _ = writeln!(
                    s,
                    "{tag} {} {} {} {}",
                    c.amplitude, c.mean_x, c.mean_y, c.sigma
                );
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut width = None;
        let mut height = None;
        let mut model = SyntheticFieldModel::empty(0.0, 0.0);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::FieldSchema { line, message };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .map_err(|e| err(format!("bad number `{s}`: {e}")))
            };
            match fields[0] {
                "width" | "height" if fields.len() == 2 => {
                    let v = num(fields[1])?;
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(err(format!("{} must be positive", fields[0])));
                    }
                    if fields[0] == "width" {
                        width = Some(v);
                    } else {
                        height = Some(v);
                    }
                }
                "drift" if fields.len() == 2 => {
                    model.drift = fields[1].parse().map_err(err)?;
                }
                tag @ ("a" | "b") if fields.len() == 5 => {
                    let c = GaussianComponent {
                        amplitude: num(fields[1])?,
                        mean_x: num(fields[2])?,
                        mean_y: num(fields[3])?,
                        sigma: num(fields[4])?,
                    };
                    if !(c.amplitude > 0.0) || !(c.sigma > 0.0) {
                        return Err(err("amplitude and sigma must be positive".into()));
                    }
                    if tag == "a" {
                        model.components_a.push(c);
                    } else {
                        model.components_b.push(c);
                    }
                }
                other => return Err(err(format!("unrecognized entry `{other}`"))),
            }
        }
        model.width = width.ok_or(Error::FieldSchema {
            line: 0,
            message: "missing width".into(),
        })?;
        model.height = height.ok_or(Error::FieldSchema {
            line: 0,
            message: "missing height".into(),
        })?;
        for c in model.components_a.iter().chain(&model.components_b) {
            if !(0.0..=model.width).contains(&c.mean_x) || !(0.0..=model.height).contains(&c.mean_y)
            {
                return Err(Error::FieldSchema {
                    line: 0,
                    message: format!("component mean ({}, {}) outside the field", c.mean_x, c.mean_y),
                });
            }
        }
        Ok(model)
    }
}

/// Free function form of [`SyntheticFieldModel::evaluate`].
pub fn evaluate_field(model: &SyntheticFieldModel, x: f64, y: f64) -> f64 {
    model.evaluate(x, y)
}

pub fn shift_components(model: &SyntheticFieldModel, dx: f64) -> SyntheticFieldModel {
    model.shift_components(dx)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensor {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorDeployment {
    pub sensors: Vec<Sensor>,
    pub width: f64,
    pub height: f64,
}

impl SensorDeployment {
    /// `count` sensors scattered uniformly over the rectangle, ids `0..count`.
    pub fn uniform(count: usize, width: f64, height: f64, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        let sensors = (0..count)
            .map(|i| Sensor {
                id: i as u32,
                x: rng.gen::<f64>() * width,
                y: rng.gen::<f64>() * height,
            })
            .collect();
        SensorDeployment {
            sensors,
            width,
            height,
        }
    }

    /// Builds a deployment from explicit positions, checking id uniqueness and bounds.
    pub fn from_sensors(sensors: Vec<Sensor>, width: f64, height: f64) -> Result<Self> {
        let mut ids: Vec<u32> = sensors.iter().map(|s| s.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate sensor id".into()));
        }
        if let Some(s) = sensors
            .iter()
            .find(|s| !(0.0..=width).contains(&s.x) || !(0.0..=height).contains(&s.y))
        {
            return Err(Error::InvalidArgument(format!(
                "sensor {} at ({}, {}) is outside the field",
                s.id, s.x, s.y
            )));
        }
        Ok(SensorDeployment {
            sensors,
            width,
            height,
        })
    }

    pub fn len(&self) -> usize {
        self.sensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sensors.is_empty()
    }

    /// True field value at every sensor, in deployment order.
    pub fn sample(&self, model: &SyntheticFieldModel) -> Vec<f64> {
        self.sensors.iter().map(|s| model.evaluate(s.x, s.y)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reading {
    pub sensor_id: u32,
    pub value: f64,
}

/// One reading per sensor, in deployment order.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    pub readings: Vec<Reading>,
    pub timestamp_index: u64,
}

impl ObservationSet {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.readings.iter().map(|r| r.value)
    }

    pub fn len(&self) -> usize {
        self.readings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.readings.is_empty()
    }

    /// Writes `timestamp_index,sensor_id,x,y,value` rows.
    pub fn write_csv<W: Write>(
        &self,
        deployment: &SensorDeployment,
        header: bool,
        mut w: W,
    ) -> io::Result<()> {
        if header {
            writeln!(w, "timestamp_index,sensor_id,x,y,value")?;
        }
        for (r, s) in self.readings.iter().zip(&deployment.sensors) {
            debug_assert_eq!(r.sensor_id, s.id);
            writeln!(
                w,
                "{},{},{},{},{}",
                self.timestamp_index, r.sensor_id, s.x, s.y, r.value
            )?;
        }
        Ok(())
    }
}

/// Adds i.i.d. zero-mean Gaussian noise to precomputed true values.
pub fn observe_values(
    deployment: &SensorDeployment,
    truth: &[f64],
    noise_sigma: f64,
    rng_seed: u64,
    timestamp_index: u64,
) -> ObservationSet {
    assert_eq!(truth.len(), deployment.len());
    let readings = if noise_sigma > 0.0 {
        let normal = Normal::new(0.0, noise_sigma).expect("finite noise sigma");
        let mut rng = seed::rng(rng_seed);
        deployment
            .sensors
            .iter()
            .zip(truth)
            .map(|(s, &v)| Reading {
                sensor_id: s.id,
                value: v + normal.sample(&mut rng),
            })
            .collect()
    } else {
        deployment
            .sensors
            .iter()
            .zip(truth)
            .map(|(s, &v)| Reading {
                sensor_id: s.id,
                value: v,
            })
            .collect()
    };
    ObservationSet {
        readings,
        timestamp_index,
    }
}

pub fn observe(
    model: &SyntheticFieldModel,
    deployment: &SensorDeployment,
    noise_sigma: f64,
    rng_seed: u64,
) -> ObservationSet {
    let truth = deployment.sample(model);
    observe_values(deployment, &truth, noise_sigma, rng_seed, 0)
}

/// Per-sensor mean of the last `m` sets of `series`.
///
/// The result carries the timestamp of the newest set.
pub fn moving_average(series: &[ObservationSet], m: usize) -> Result<ObservationSet> {
    if m == 0 {
        return Err(Error::InvalidArgument("moving average needs m >= 1".into()));
    }
    if series.len() < m {
        return Err(Error::InsufficientHistory {
            needed: m,
            available: series.len(),
        });
    }
    let window = &series[series.len() - m..];
    let latest = window.last().expect("m >= 1");
    for set in window {
        if set.readings.len() != latest.readings.len()
            || set
                .readings
                .iter()
                .zip(&latest.readings)
                .any(|(a, b)| a.sensor_id != b.sensor_id)
        {
            return Err(Error::DeploymentMismatch(format!(
                "timestamps {} and {}",
                set.timestamp_index, latest.timestamp_index
            )));
        }
    }
    if m == 1 {
        return Ok(latest.clone());
    }
    let mut sums = vec![0.0; latest.readings.len()];
    for set in window {
        for (acc, r) in sums.iter_mut().zip(&set.readings) {
            *acc += r.value;
        }
    }
    let readings = latest
        .readings
        .iter()
        .zip(sums)
        .map(|(r, s)| Reading {
            sensor_id: r.sensor_id,
            value: s / m as f64,
        })
        .collect();
    Ok(ObservationSet {
        readings,
        timestamp_index: latest.timestamp_index,
    })
}

/// Noise configuration for repeated sensing of a field.
///
/// `sigma` is the noise std left after the `taps`-tap moving average, so the
/// raw per-sample std is `sigma * sqrt(taps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma: f64,
    pub taps: usize,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            sigma: 0.0,
            taps: 1,
        }
    }

    pub fn raw_sigma(&self) -> f64 {
        self.sigma * (self.taps.max(1) as f64).sqrt()
    }
}

/// A deployment observing a (possibly changing) field through per-sensor
/// moving-average filters.
///
/// Every sensor keeps its last `taps` raw noise samples. Each call to
/// [`SensorField::sense`] takes one new raw sample per sensor and returns the
/// current field plus the window mean, so consecutive queries share
/// `taps - 1` samples. The field is treated as static across one window.
#[derive(Debug, Clone)]
pub struct SensorField {
    deployment: SensorDeployment,
    truth: Vec<f64>,
    noise: NoiseModel,
    noise_seed: u64,
    next_timestamp: u64,
    window: VecDeque<ObservationSet>,
}

impl SensorField {
    pub fn new(
        model: &SyntheticFieldModel,
        deployment: SensorDeployment,
        noise: NoiseModel,
        noise_seed: u64,
    ) -> Self {
        let truth = deployment.sample(model);
        SensorField {
            deployment,
            truth,
            noise,
            noise_seed,
            next_timestamp: 0,
            window: VecDeque::new(),
        }
    }

    pub fn deployment(&self) -> &SensorDeployment {
        &self.deployment
    }

    pub fn truth(&self) -> &[f64] {
        &self.truth
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn set_field(&mut self, model: &SyntheticFieldModel) {
        self.truth = self.deployment.sample(model);
    }

    fn push_raw_noise(&mut self) {
        let ts = self.next_timestamp;
        self.next_timestamp += 1;
        let zeros = vec![0.0; self.deployment.len()];
        let sample = observe_values(
            &self.deployment,
            &zeros,
            self.noise.raw_sigma(),
            seed::derive(self.noise_seed, &[ts]),
            ts,
        );
        self.window.push_back(sample);
        if self.window.len() > self.noise.taps.max(1) {
            self.window.pop_front();
        }
    }

    pub fn sense(&mut self) -> ObservationSet {
        let taps = self.noise.taps.max(1);
        if self.window.is_empty() {
            for _ in 1..taps {
                self.push_raw_noise();
            }
        }
        self.push_raw_noise();
        let history = self.window.make_contiguous();
        let filtered = moving_average(history, taps).expect("window holds `taps` sets");
        let readings = filtered
            .readings
            .iter()
            .zip(&self.truth)
            .map(|(r, &t)| Reading {
                sensor_id: r.sensor_id,
                value: t + r.value,
            })
            .collect();
        ObservationSet {
            readings,
            timestamp_index: filtered.timestamp_index,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn single(amplitude: f64, mx: f64, my: f64, sigma: f64) -> SyntheticFieldModel {
        let mut m = SyntheticFieldModel::empty(100.0, 100.0);
        m.components_a.push(GaussianComponent {
            amplitude,
            mean_x: mx,
            mean_y: my,
            sigma,
        });
        m
    }

    fn sample_std(values: impl Iterator<Item = f64>) -> f64 {
        let v: Vec<f64> = values.collect();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    }

    #[test]
    fn empty_field_is_zero() {
        let m = SyntheticFieldModel::empty(100.0, 100.0);
        assert_eq!(evaluate_field(&m, 12.0, -3.0), 0.0);
    }

    #[test]
    fn peak_equals_amplitude() {
        assert_eq!(evaluate_field(&single(1.0, 50.0, 50.0, 10.0), 50.0, 50.0), 1.0);
    }

    #[test]
    fn kernel_one_sigma_off_peak() {
        // 2 * exp(-1/2), computed by hand: 1.2130613194252668
        let v = evaluate_field(&single(2.0, 0.0, 0.0, 1.0), 1.0, 0.0);
        assert_relative_eq!(v, 1.213_061_319_425_266_8, epsilon = 1e-12);
    }

    #[test]
    fn shifts_compose_and_wrap() {
        let mut m = single(1.0, 50.0, 50.0, 3.0);
        m.components_b = m.components_a.clone();
        let same = m.shift_components(0.0);
        assert_eq!(same, m);

        let s = m.shift_components(5.0);
        assert_eq!(s.components_b[0].mean_x, 55.0);
        assert_eq!(s.components_a[0].mean_x, 50.0);

        let twice = m.shift_components(10.0).shift_components(10.0);
        let once = m.shift_components(20.0);
        assert_relative_eq!(twice.components_b[0].mean_x, once.components_b[0].mean_x);

        let wrapped = m.shift_components(60.0);
        assert_relative_eq!(wrapped.components_b[0].mean_x, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn drift_set_a_moves_only_a() {
        let mut m = single(1.0, 20.0, 50.0, 10.0);
        m.components_b = m.components_a.clone();
        m.drift = DriftSet::A;
        let s = m.shift_components(5.0);
        assert_eq!(s.components_a[0].mean_x, 25.0);
        assert_eq!(s.components_b[0].mean_x, 20.0);
    }

    #[test]
    fn noiseless_observation_is_exact() {
        let model = SyntheticFieldModel::random(&FieldParams::default(), 3);
        let dep = SensorDeployment::uniform(200, 100.0, 100.0, 4);
        let obs = observe(&model, &dep, 0.0, 9);
        for (r, s) in obs.readings.iter().zip(&dep.sensors) {
            assert_eq!(r.value, model.evaluate(s.x, s.y));
        }
    }

    #[test]
    fn same_seed_same_observations() {
        let model = SyntheticFieldModel::random(&FieldParams::default(), 3);
        let dep = SensorDeployment::uniform(300, 100.0, 100.0, 4);
        assert_eq!(observe(&model, &dep, 0.3, 11), observe(&model, &dep, 0.3, 11));
        assert_ne!(observe(&model, &dep, 0.3, 11), observe(&model, &dep, 0.3, 12));
    }

    #[test]
    fn noise_std_matches_configuration() {
        // standard error of a sample std at n = 10_000 is 0.3 / sqrt(2n) ~ 0.0021
        let model = SyntheticFieldModel::empty(100.0, 100.0);
        let dep = SensorDeployment::uniform(10_000, 100.0, 100.0, 1);
        let obs = observe(&model, &dep, 0.3, 2);
        let std = sample_std(obs.values());
        assert!((0.29..=0.31).contains(&std), "std = {std}");
    }

    #[test]
    fn single_tap_average_is_identity() {
        let model = SyntheticFieldModel::random(&FieldParams::default(), 5);
        let dep = SensorDeployment::uniform(50, 100.0, 100.0, 6);
        let a = observe(&model, &dep, 0.3, 1);
        let b = observe(&model, &dep, 0.3, 2);
        let out = moving_average(&[a, b.clone()], 1).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn constant_readings_average_to_constant() {
        let dep = SensorDeployment::uniform(20, 100.0, 100.0, 6);
        let set = observe_values(&dep, &vec![2.5; 20], 0.0, 0, 0);
        let out = moving_average(&vec![set; 4], 4).unwrap();
        assert!(out.values().all(|v| v == 2.5));
    }

    #[test]
    fn short_history_is_rejected() {
        let dep = SensorDeployment::uniform(5, 100.0, 100.0, 6);
        let set = observe_values(&dep, &[0.0; 5], 0.0, 0, 0);
        assert!(matches!(
            moving_average(&[set.clone(), set], 3),
            Err(Error::InsufficientHistory { needed: 3, available: 2 })
        ));
    }

    #[test]
    fn nine_taps_cut_noise_std_by_three() {
        let model = SyntheticFieldModel::empty(100.0, 100.0);
        let dep = SensorDeployment::uniform(5000, 100.0, 100.0, 1);
        let series: Vec<_> = (0..9)
            .map(|t| observe_values(&dep, &[0.0; 5000], 0.3, 100 + t, t))
            .collect();
        let out = moving_average(&series, 9).unwrap();
        let std = sample_std(out.values());
        assert!((0.09..=0.11).contains(&std), "std = {std}");
        let _ = model;
    }

    #[test]
    fn sensor_field_post_filter_sigma() {
        let model = SyntheticFieldModel::empty(100.0, 100.0);
        let dep = SensorDeployment::uniform(5000, 100.0, 100.0, 1);
        let mut sf = SensorField::new(&model, dep, NoiseModel { sigma: 0.3, taps: 4 }, 8);
        let first = sf.sense();
        let std = sample_std(first.values());
        assert!((std - 0.3).abs() < 0.3 * 0.05, "std = {std}");
        // consecutive outputs share 3 of 4 samples: corr(a, b) = 3/4
        let second = sf.sense();
        let diff_std = sample_std(first.values().zip(second.values()).map(|(a, b)| a - b));
        let expect = 0.3 * (2.0f64 / 4.0).sqrt();
        assert!((diff_std - expect).abs() < expect * 0.05, "diff std = {diff_std}");
    }

    #[test]
    fn sensor_field_is_reproducible() {
        let model = SyntheticFieldModel::random(&FieldParams::default(), 2);
        let dep = SensorDeployment::uniform(100, 100.0, 100.0, 1);
        let mut a = SensorField::new(&model, dep.clone(), NoiseModel { sigma: 0.3, taps: 9 }, 8);
        let mut b = SensorField::new(&model, dep, NoiseModel { sigma: 0.3, taps: 9 }, 8);
        for _ in 0..3 {
            assert_eq!(a.sense(), b.sense());
        }
        let mut quiet = SensorField::new(&model, a.deployment().clone(), NoiseModel::noiseless(), 8);
        assert_eq!(quiet.sense().values().collect::<Vec<_>>(), quiet.truth().to_vec());
    }

    #[test]
    fn text_schema_round_trip() {
        let model = SyntheticFieldModel::random(
            &FieldParams {
                n_a: 4,
                n_b: 3,
                ..FieldParams::default()
            },
            21,
        );
        let back = SyntheticFieldModel::from_text(&model.to_text()).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn text_schema_reports_line() {
        let err = SyntheticFieldModel::from_text("width 100\nheight 100\na 1 2 x 3\n").unwrap_err();
        assert!(matches!(err, Error::FieldSchema { line: 3, .. }), "{err}");
    }

    #[test]
    fn random_field_respects_invariants() {
        let p = FieldParams::default();
        let m = SyntheticFieldModel::random(&p, 77);
        assert_eq!(m.components_a.len(), 150);
        assert_eq!(m.components_b.len(), 150);
        for c in m.components_a.iter().chain(&m.components_b) {
            assert!(c.amplitude > 0.0 && c.amplitude <= 1.0);
            assert!((0.0..=100.0).contains(&c.mean_x));
            assert!((0.0..=100.0).contains(&c.mean_y));
        }
    }

    #[test]
    fn csv_rows() {
        let dep = SensorDeployment::from_sensors(
            vec![Sensor { id: 7, x: 1.5, y: 2.0 }],
            10.0,
            10.0,
        )
        .unwrap();
        let obs = observe_values(&dep, &[0.25], 0.0, 0, 3);
        let mut buf = Vec::new();
        obs.write_csv(&dep, true, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "timestamp_index,sensor_id,x,y,value\n3,7,1.5,2,0.25\n"
        );
    }
}
