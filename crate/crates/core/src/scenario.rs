//! Scenario configuration, seeded replicates and the CSV artifacts.
//!
//! A scenario file is flat `key = value` text. Blank lines and `#` comments
//! are ignored, unknown keys are errors, and every key has a default, so an
//! empty file is the reference scenario. The emitted `manifest.txt` is the
//! fully resolved configuration in the same format followed by the derived
//! seeds as comments, so it parses back into the exact configuration.
//!
//! | key                   | default  | meaning                                        |
//! |-----------------------|----------|------------------------------------------------|
//! | `n_a`, `n_b`          | 150, 150 | wide and narrow Gaussian counts                |
//! | `sigma_a`, `sigma_b`  | 10, 3    | their widths                                   |
//! | `amplitude_min/max`   | 0, 1     | amplitudes uniform in `(min, max]`             |
//! | `width`, `height`     | 100, 100 | field rectangle                                |
//! | `drift_set`           | b        | Gaussian set that moves during tracking        |
//! | `sensor_count`        | 5000     | uniformly scattered sensors                    |
//! | `noise_sigma`         | 0.3      | noise std after the moving average             |
//! | `taps`                | 9        | moving-average length                          |
//! | `scheme`              | LM-SG    | `U-SG`, `LM-fixed` or `LM-SG`                  |
//! | `initial_m`, `m_max`  | 3, 25    | first and last number of levels                |
//! | `probe_count`         | 2        | sensors asked for the initial range            |
//! | `eps_stop`            | 0.01     | early stop threshold, fraction of the span     |
//! | `bin_count`           | 64       | histogram bins for the pdf                     |
//! | `initial_delta_scale` | 1        | multiplies the half-spacing initial margin     |
//! | `max_fit_points`      | 900      | spline fit size cap                            |
//! | `grid_p`, `grid_q`    | 101, 101 | reconstruction lattice                         |
//! | `mu`                  | none     | fixed-step margin rule when set                |
//! | `temporal_adapt_delta`| false    | keep adapting the margin while tracking        |
//! | `periods`             | 20       | tracking periods                               |
//! | `drift_per_period`    | 1        | horizontal shift of the drifting set           |
//! | `master_seed`         | 1        | root of every random stream                    |
//! | `replicates`          | 20       | seeded repetitions                             |
//! | `output_dir`          | out      | artifact directory                             |
//!
//! Artifacts of [`run_scenario`]:
//!
//! ```text
//! <output_dir>/manifest.txt
//! <output_dir>/replicate_000/spatial.csv
//! <output_dir>/replicate_000/temporal.csv
//! <output_dir>/replicate_000/delta_trace.csv
//! ```

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use log::info;

use crate::error::{Error, Result};
use crate::field::{FieldParams, NoiseModel, SensorDeployment, SensorField, SyntheticFieldModel};
use crate::interpolation::GridSpec;
use crate::monitoring::{
    run_spatial_monitoring, run_temporal_monitoring, MonitoringConfig, MonitoringReport, Scheme,
};
use crate::seed::{self, Purpose};

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const SPATIAL_FILE: &str = "spatial.csv";
pub const TEMPORAL_FILE: &str = "temporal.csv";
pub const DELTA_FILE: &str = "delta_trace.csv";
pub const COMPARE_FILE: &str = "compare.csv";
pub const COMPARE_MEAN_FILE: &str = "compare_mean.csv";
pub const COMPARE_TEMPORAL_FILE: &str = "compare_temporal_mean.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

pub const COMPARE_HEADER: &str =
    "scheme,replicate,n,M,delta,reports,cumulative_cost,error_proxy,error_vs_truth";
pub const COMPARE_MEAN_HEADER: &str =
    "scheme,n,M,replicates,delta,reports,cumulative_cost,error_proxy,error_vs_truth";
pub const COMPARE_TEMPORAL_HEADER: &str = "scheme,period,replicates,fraction,error_vs_truth";
pub const SWEEP_HEADER: &str = "initial_delta_scale,replicate,n,delta";

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub field: FieldParams,
    pub sensor_count: usize,
    pub noise_sigma: f64,
    pub taps: usize,
    pub monitoring: MonitoringConfig,
    pub periods: usize,
    pub drift_per_period: f64,
    pub output_dir: PathBuf,
    pub master_seed: u64,
    pub replicates: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            field: FieldParams::default(),
            sensor_count: 5000,
            noise_sigma: 0.3,
            taps: 9,
            monitoring: MonitoringConfig::default(),
            periods: 20,
            drift_per_period: 1.0,
            output_dir: PathBuf::from("out"),
            master_seed: 1,
            replicates: 20,
        }
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("`{value}`: {e}"))
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{value}` is not a boolean")),
    }
}

impl ScenarioConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let value = value.trim();
        let m = &mut self.monitoring;
        match key.trim() {
            "n_a" => self.field.n_a = parse_num(value)?,
            "n_b" => self.field.n_b = parse_num(value)?,
            "sigma_a" => self.field.sigma_a = parse_num(value)?,
            "sigma_b" => self.field.sigma_b = parse_num(value)?,
            "amplitude_min" => self.field.amplitude_min = parse_num(value)?,
            "amplitude_max" => self.field.amplitude_max = parse_num(value)?,
            "width" => self.field.width = parse_num(value)?,
            "height" => self.field.height = parse_num(value)?,
            "drift_set" => self.field.drift = parse_num(value)?,
            "sensor_count" => self.sensor_count = parse_num(value)?,
            "noise_sigma" => self.noise_sigma = parse_num(value)?,
            "taps" => self.taps = parse_num(value)?,
            "scheme" => m.scheme = parse_num(value)?,
            "initial_m" => m.initial_m = parse_num(value)?,
            "m_max" => m.m_max = parse_num(value)?,
            "probe_count" => m.probe_count = parse_num(value)?,
            "eps_stop" => m.eps_stop = parse_num(value)?,
            "bin_count" => m.bin_count = parse_num(value)?,
            "initial_delta_scale" => m.initial_delta_scale = parse_num(value)?,
            "max_fit_points" => m.max_fit_points = parse_num(value)?,
            "grid_p" => m.grid.p = parse_num(value)?,
            "grid_q" => m.grid.q = parse_num(value)?,
            "mu" => {
                m.mu = match value {
                    "none" | "" => None,
                    v => Some(parse_num(v)?),
                }
            }
            "temporal_adapt_delta" => m.temporal_adapt_delta = parse_bool(value)?,
            "periods" => self.periods = parse_num(value)?,
            "drift_per_period" => self.drift_per_period = parse_num(value)?,
            "master_seed" => self.master_seed = parse_num(value)?,
            "replicates" => self.replicates = parse_num(value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, found `{body}`"),
            })?;
            self.set(key, value).map_err(|message| Error::Config {
                line,
                message: format!("{}: {message}", key.trim()),
            })?;
        }
        self.sync_grid();
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ScenarioConfig::from_text(&text)
    }

    /// The reconstruction grid always covers the field rectangle.
    fn sync_grid(&mut self) {
        self.monitoring.grid.width = self.field.width;
        self.monitoring.grid.height = self.field.height;
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |message: String| Err(Error::InvalidArgument(message));
        let f = &self.field;
        if !(f.width > 0.0 && f.height > 0.0) {
            return bad(format!("field size {}x{} must be positive", f.width, f.height));
        }
        if !(f.sigma_a > 0.0 && f.sigma_b > 0.0) {
            return bad("Gaussian widths must be positive".into());
        }
        if !(f.amplitude_min >= 0.0 && f.amplitude_max > f.amplitude_min) {
            return bad(format!(
                "amplitude range ({}, {}] must be positive and non-empty",
                f.amplitude_min, f.amplitude_max
            ));
        }
        if self.sensor_count < 2 {
            return bad("sensor_count must be at least 2".into());
        }
        if !(self.noise_sigma >= 0.0) {
            return bad("noise_sigma must be non-negative".into());
        }
        if self.taps == 0 {
            return bad("taps must be positive".into());
        }
        let m = &self.monitoring;
        if m.initial_m == 0 || m.m_max < m.initial_m {
            return bad(format!("need 1 <= initial_m <= m_max, got {} and {}", m.initial_m, m.m_max));
        }
        if m.probe_count < 2 || m.probe_count > self.sensor_count {
            return bad(format!("probe_count {} outside 2..={}", m.probe_count, self.sensor_count));
        }
        if m.bin_count == 0 || m.max_fit_points < 4 {
            return bad("bin_count must be positive and max_fit_points at least 4".into());
        }
        if !(m.eps_stop >= 0.0) || !(m.initial_delta_scale > 0.0) {
            return bad("eps_stop must be >= 0 and initial_delta_scale > 0".into());
        }
        if matches!(m.mu, Some(mu) if !(mu > 0.0)) {
            return bad("mu must be positive".into());
        }
        GridSpec::new(m.grid.p, m.grid.q, f.width, f.height)?;
        if !self.drift_per_period.is_finite() {
            return bad("drift_per_period must be finite".into());
        }
        Ok(())
    }

    /// The resolved configuration as parseable text.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let m = &self.monitoring;
        let mu = m.mu.map_or_else(|| "none".to_string(), |v| v.to_string());
        let rows: [(&str, String); 29] = [
            ("n_a", f.n_a.to_string()),
            ("n_b", f.n_b.to_string()),
            ("sigma_a", f.sigma_a.to_string()),
            ("sigma_b", f.sigma_b.to_string()),
            ("amplitude_min", f.amplitude_min.to_string()),
            ("amplitude_max", f.amplitude_max.to_string()),
            ("width", f.width.to_string()),
            ("height", f.height.to_string()),
            ("drift_set", f.drift.to_string()),
            ("sensor_count", self.sensor_count.to_string()),
            ("noise_sigma", self.noise_sigma.to_string()),
            ("taps", self.taps.to_string()),
            ("scheme", m.scheme.to_string()),
            ("initial_m", m.initial_m.to_string()),
            ("m_max", m.m_max.to_string()),
            ("probe_count", m.probe_count.to_string()),
            ("eps_stop", m.eps_stop.to_string()),
            ("bin_count", m.bin_count.to_string()),
            ("initial_delta_scale", m.initial_delta_scale.to_string()),
            ("max_fit_points", m.max_fit_points.to_string()),
            ("grid_p", m.grid.p.to_string()),
            ("grid_q", m.grid.q.to_string()),
            ("mu", mu),
            ("temporal_adapt_delta", m.temporal_adapt_delta.to_string()),
            ("periods", self.periods.to_string()),
            ("drift_per_period", self.drift_per_period.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("replicates", self.replicates.to_string()),
            ("output_dir", self.output_dir.display().to_string()),
        ];
        let mut s = String::new();
        for (k, v) in rows {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    /// Seeds for one replicate.
    pub fn seeds(&self, replicate: usize) -> ReplicateSeeds {
        let r = replicate as u64;
        ReplicateSeeds {
            field: seed::replicate_seed(self.master_seed, r, Purpose::Field),
            deployment: seed::replicate_seed(self.master_seed, r, Purpose::Deployment),
            noise: seed::replicate_seed(self.master_seed, r, Purpose::Noise),
            probe: seed::replicate_seed(self.master_seed, r, Purpose::Probe),
        }
    }

    /// Manifest text: the configuration plus every replicate's seeds.
    pub fn manifest(&self) -> String {
        let mut s = String::from("# contour-monitor scenario manifest\n");
        s.push_str(&self.to_text());
        s.push_str("# replicate field_seed deployment_seed noise_seed probe_seed\n");
        for r in 0..self.replicates {
            let sd = self.seeds(r);
            let _ = writeln!(s, "# {r} {} {} {} {}", sd.field, sd.deployment, sd.noise, sd.probe);
        }
        s
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        let mut c = self.clone();
        c.monitoring.scheme = scheme;
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicateSeeds {
    pub field: u64,
    pub deployment: u64,
    pub noise: u64,
    pub probe: u64,
}

/// The field and deployment of one replicate. Identical across schemes.
pub fn replicate_world(config: &ScenarioConfig, replicate: usize) -> (SyntheticFieldModel, SensorDeployment) {
    let sd = config.seeds(replicate);
    let f = &config.field;
    let field = SyntheticFieldModel::random(f, sd.field);
    let deployment = SensorDeployment::uniform(config.sensor_count, f.width, f.height, sd.deployment);
    (field, deployment)
}

/// Spatial then temporal monitoring for one replicate, in memory.
pub fn run_replicate(config: &ScenarioConfig, replicate: usize) -> Result<MonitoringReport> {
    let sd = config.seeds(replicate);
    let (field, deployment) = replicate_world(config, replicate);
    let noise = NoiseModel {
        sigma: config.noise_sigma,
        taps: config.taps,
    };
    let mut sensors = SensorField::new(&field, deployment, noise, sd.noise);
    let (state, mut report) = run_spatial_monitoring(&config.monitoring, &field, &mut sensors, sd.probe)?;
    if config.periods > 0 {
        let sequence = field.drift_sequence(config.drift_per_period, config.periods);
        let (_, tracked) = run_temporal_monitoring(state, &sequence, &mut sensors)?;
        report.temporal = tracked.temporal;
    }
    Ok(report)
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory cannot fail");
    buf
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

pub fn replicate_dir(root: &Path, replicate: usize) -> PathBuf {
    root.join(format!("replicate_{replicate:03}"))
}

/// Writes the three tables of one report into `dir`.
pub fn write_report(dir: &Path, report: &MonitoringReport) -> Result<()> {
    create_dir(dir)?;
    write_atomic(&dir.join(SPATIAL_FILE), &render(|b| report.write_spatial_csv(b)))?;
    write_atomic(&dir.join(TEMPORAL_FILE), &render(|b| report.write_temporal_csv(b)))?;
    write_atomic(&dir.join(DELTA_FILE), &render(|b| report.write_delta_csv(b)))
}

fn write_manifest(config: &ScenarioConfig, root: &Path) -> Result<()> {
    create_dir(root)?;
    write_atomic(&root.join(MANIFEST_FILE), config.manifest().as_bytes())
}

/// Runs every replicate of `config` and writes its artifacts under
/// `output_dir`. Returns the reports in replicate order.
pub fn run_scenario(config: &ScenarioConfig) -> Result<Vec<MonitoringReport>> {
    config.validate()?;
    let root = &config.output_dir;
    write_manifest(config, root)?;
    let mut reports = Vec::with_capacity(config.replicates);
    for r in 0..config.replicates {
        let report = run_replicate(config, r)?;
        write_report(&replicate_dir(root, r), &report)?;
        info!(
            "{} replicate {r}: final M {:?}, cumulative cost {:?}, mean tracking fraction {:?}",
            config.monitoring.scheme,
            report.final_m(),
            report.cumulative_cost().last(),
            report.mean_temporal_fraction()
        );
        reports.push(report);
    }
    Ok(reports)
}

/// Per-scheme reports, replicate-major, from a scheme comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub schemes: Vec<Scheme>,
    pub reports: Vec<Vec<MonitoringReport>>,
}

/// Seed average of one scheme's spatial traces at iteration `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanIteration {
    pub n: usize,
    pub m: usize,
    pub replicates: usize,
    pub delta: f64,
    pub reports: f64,
    pub cumulative_cost: f64,
    pub error_proxy: f64,
    pub error_vs_truth: f64,
}

/// Averages spatial records by iteration over the replicates that reached it.
pub fn mean_spatial(reports: &[MonitoringReport]) -> Vec<MeanIteration> {
    let longest = reports.iter().map(|r| r.spatial.len()).max().unwrap_or(0);
    (0..longest)
        .map(|i| {
            let rows: Vec<_> = reports.iter().filter_map(|r| r.spatial.get(i)).collect();
            let k = rows.len() as f64;
            let avg = |f: &dyn Fn(&crate::monitoring::IterationRecord) -> f64| {
                rows.iter().map(|r| f(r)).sum::<f64>() / k
            };
            MeanIteration {
                n: rows[0].n,
                m: rows[0].m,
                replicates: rows.len(),
                delta: avg(&|r| r.delta),
                reports: avg(&|r| r.reports as f64),
                cumulative_cost: avg(&|r| r.cumulative_cost as f64),
                error_proxy: avg(&|r| r.error_proxy),
                error_vs_truth: avg(&|r| r.error_vs_truth),
            }
        })
        .collect()
}

impl Comparison {
    pub fn mean_spatial(&self, scheme: Scheme) -> Option<Vec<MeanIteration>> {
        let idx = self.schemes.iter().position(|&s| s == scheme)?;
        Some(mean_spatial(&self.reports[idx]))
    }

    pub fn write_merged_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{COMPARE_HEADER}")?;
        for (scheme, reps) in self.schemes.iter().zip(&self.reports) {
            for (r, rep) in reps.iter().enumerate() {
                for x in &rep.spatial {
                    writeln!(
                        w,
                        "{scheme},{r},{},{},{},{},{},{},{}",
                        x.n, x.m, x.delta, x.reports, x.cumulative_cost, x.error_proxy, x.error_vs_truth
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn write_mean_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{COMPARE_MEAN_HEADER}")?;
        for (scheme, reps) in self.schemes.iter().zip(&self.reports) {
            for x in mean_spatial(reps) {
                writeln!(
                    w,
                    "{scheme},{},{},{},{},{},{},{},{}",
                    x.n, x.m, x.replicates, x.delta, x.reports, x.cumulative_cost, x.error_proxy,
                    x.error_vs_truth
                )?;
            }
        }
        Ok(())
    }

    pub fn write_temporal_mean_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{COMPARE_TEMPORAL_HEADER}")?;
        for (scheme, reps) in self.schemes.iter().zip(&self.reports) {
            let longest = reps.iter().map(|r| r.temporal.len()).max().unwrap_or(0);
            for i in 0..longest {
                let rows: Vec<_> = reps.iter().filter_map(|r| r.temporal.get(i)).collect();
                let k = rows.len() as f64;
                let frac = rows.iter().map(|t| t.fraction).sum::<f64>() / k;
                let err = rows.iter().map(|t| t.error_vs_truth).sum::<f64>() / k;
                writeln!(w, "{scheme},{},{},{frac},{err}", rows[0].period, rows.len())?;
            }
        }
        Ok(())
    }
}

fn scheme_dir(root: &Path, scheme: Scheme) -> PathBuf {
    root.join(scheme.as_str().to_ascii_lowercase())
}

/// Runs each scheme on the same fields, deployments and seeds. Without an
/// output directory nothing is written.
pub fn compare_schemes(
    config: &ScenarioConfig,
    schemes: &[Scheme],
    output: Option<&Path>,
) -> Result<Comparison> {
    if schemes.len() < 2 {
        return Err(Error::InvalidArgument("comparison needs at least two schemes".into()));
    }
    config.validate()?;
    let mut reports = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let cfg = config.with_scheme(scheme);
        let mut per = Vec::with_capacity(cfg.replicates);
        for r in 0..cfg.replicates {
            let rep = run_replicate(&cfg, r)?;
            if let Some(root) = output {
                write_report(&replicate_dir(&scheme_dir(root, scheme), r), &rep)?;
            }
            per.push(rep);
        }
        info!("{scheme}: {} replicates done", per.len());
        reports.push(per);
    }
    let cmp = Comparison {
        schemes: schemes.to_vec(),
        reports,
    };
    if let Some(root) = output {
        write_manifest(config, root)?;
        write_atomic(&root.join(COMPARE_FILE), &render(|b| cmp.write_merged_csv(b)))?;
        write_atomic(&root.join(COMPARE_MEAN_FILE), &render(|b| cmp.write_mean_csv(b)))?;
        write_atomic(
            &root.join(COMPARE_TEMPORAL_FILE),
            &render(|b| cmp.write_temporal_mean_csv(b)),
        )?;
    }
    Ok(cmp)
}

/// Margin traces for several initial-margin scales on the same replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub scales: Vec<f64>,
    /// `traces[s][r]` is the `(n, delta)` trace of scale `s`, replicate `r`.
    pub traces: Vec<Vec<Vec<(usize, f64)>>>,
}

impl Sweep {
    /// Final margin of every scale for replicate `r`.
    pub fn finals(&self, replicate: usize) -> Vec<f64> {
        self.traces
            .iter()
            .map(|per| per[replicate].last().map_or(f64::NAN, |d| d.1))
            .collect()
    }

    /// Largest over smallest final margin of replicate `r`.
    pub fn final_spread(&self, replicate: usize) -> f64 {
        let f = self.finals(replicate);
        let hi = f.iter().cloned().fold(f64::MIN, f64::max);
        let lo = f.iter().cloned().fold(f64::MAX, f64::min);
        hi / lo
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{SWEEP_HEADER}")?;
        for (scale, per) in self.scales.iter().zip(&self.traces) {
            for (r, trace) in per.iter().enumerate() {
                for (n, d) in trace {
                    writeln!(w, "{scale},{r},{n},{d}")?;
                }
            }
        }
        Ok(())
    }
}

/// Spatial monitoring only, once per initial-margin scale and replicate.
pub fn sweep_initial_delta(
    config: &ScenarioConfig,
    scales: &[f64],
    output: Option<&Path>,
) -> Result<Sweep> {
    if scales.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one scale".into()));
    }
    let mut traces = Vec::with_capacity(scales.len());
    for &scale in scales {
        let mut cfg = config.clone();
        cfg.monitoring.initial_delta_scale = scale;
        cfg.periods = 0;
        cfg.validate()?;
        let mut per = Vec::with_capacity(cfg.replicates);
        for r in 0..cfg.replicates {
            let rep = run_replicate(&cfg, r)?;
            if let Some(root) = output {
                write_report(&replicate_dir(&root.join(format!("scale_{scale}")), r), &rep)?;
            }
            per.push(rep.delta_trace);
        }
        traces.push(per);
    }
    let sweep = Sweep {
        scales: scales.to_vec(),
        traces,
    };
    if let Some(root) = output {
        write_manifest(config, root)?;
        write_atomic(&root.join(SWEEP_FILE), &render(|b| sweep.write_csv(b)))?;
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_the_default() {
        assert_eq!(ScenarioConfig::from_text("").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = ScenarioConfig::default();
        cfg.field.amplitude_max = 2.5;
        cfg.noise_sigma = 0.1 + 0.2;
        cfg.monitoring.scheme = Scheme::USg;
        cfg.monitoring.mu = Some(0.05);
        cfg.output_dir = PathBuf::from("some/where");
        let back = ScenarioConfig::from_text(&cfg.manifest()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ScenarioConfig::from_text("# c\n\ntaps = 4\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 4, .. }), "{err}");
        let err = ScenarioConfig::from_text("taps = four").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
        let err = ScenarioConfig::from_text("taps 4").unwrap_err();
        assert!(matches!(err, Error::Config { line: 1, .. }));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in ["taps = 0", "m_max = 2", "probe_count = 1", "noise_sigma = -1", "grid_p = 1"] {
            assert!(ScenarioConfig::from_text(text).is_err(), "{text}");
        }
    }

    #[test]
    fn seeds_depend_on_master_only() {
        let a = ScenarioConfig::default();
        let mut b = a.clone();
        b.master_seed = 2;
        assert_ne!(a.seeds(0), b.seeds(0));
        assert_ne!(a.seeds(0), a.seeds(1));
        assert_eq!(a.to_text().replace("master_seed = 1", ""), b.to_text().replace("master_seed = 2", ""));
    }
}
