//! Contour level placement: equally spaced levels, or Lloyd-Max levels
//! optimal in mean squared error against a histogram pdf.
//!
//! Every integral over the pdf is evaluated in closed form bin by bin, so
//! centroids and distortion are exact for the piecewise-constant density.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::interpolation::{value_range, Reconstruction};

pub const DEFAULT_BIN_COUNT: usize = 64;

/// Lloyd-Max stops once no level moves by more than this fraction of the support.
pub const LLOYD_MAX_REL_TOL: f64 = 1e-6;
pub const LLOYD_MAX_MAX_ITERS: usize = 500;

/// Strictly increasing levels inside the open interval `range`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourLevelSet {
    levels: Vec<f64>,
    range: (f64, f64),
}

impl ContourLevelSet {
    pub fn new(levels: Vec<f64>, range: (f64, f64)) -> Result<Self> {
        let (lo, hi) = range;
        if levels.is_empty() {
            return Err(Error::InvalidLevels("need at least one level".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidRange { min: lo, max: hi });
        }
        if levels.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidLevels(format!("levels not strictly increasing: {levels:?}")));
        }
        if !(lo < levels[0] && levels[levels.len() - 1] < hi) {
            return Err(Error::InvalidLevels(format!(
                "levels {levels:?} not strictly inside ({lo}, {hi})"
            )));
        }
        Ok(ContourLevelSet { levels, range })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "index,level,range_min,range_max")?;
        for (i, l) in self.levels.iter().enumerate() {
            writeln!(w, "{},{},{},{}", i + 1, l, self.range.0, self.range.1)?;
        }
        Ok(())
    }
}

pub fn uniform_levels(l_min: f64, l_max: f64, m: usize) -> Result<ContourLevelSet> {
    if !(l_min < l_max) || !l_min.is_finite() || !l_max.is_finite() {
        return Err(Error::InvalidRange {
            min: l_min,
            max: l_max,
        });
    }
    if m == 0 {
        return Err(Error::InvalidLevels("need at least one level".into()));
    }
    let step = (l_max - l_min) / (m + 1) as f64;
    let levels = (1..=m).map(|i| l_min + i as f64 * step).collect();
    ContourLevelSet::new(levels, (l_min, l_max))
}

/// Piecewise-constant density over strictly increasing bin edges.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPdf {
    edges: Vec<f64>,
    densities: Vec<f64>,
}

impl EmpiricalPdf {
    /// Builds a pdf from bin edges and non-negative weights, normalizing the weights
    /// to unit mass.
    pub fn from_weights(edges: Vec<f64>, weights: &[f64]) -> Result<Self> {
        if edges.len() < 2 || edges.len() != weights.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "{} edges for {} bins",
                edges.len(),
                weights.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("bin edges must be strictly increasing".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("bin weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidArgument("pdf has zero total mass".into()));
        }
        let densities = weights
            .iter()
            .zip(edges.windows(2))
            .map(|(w, e)| w / total / (e[1] - e[0]))
            .collect();
        Ok(EmpiricalPdf { edges, densities })
    }

    /// Equal-width histogram of `values` over their own min..max.
    pub fn from_samples(values: &[f64], bin_count: usize) -> Result<Self> {
        if bin_count == 0 {
            return Err(Error::InvalidArgument("bin count must be positive".into()));
        }
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if values.is_empty() || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument("no finite samples".into()));
        }
        if !(hi > lo) || (hi - lo) <= f64::EPSILON * lo.abs().max(hi.abs()) * 4.0 {
            return Err(Error::DegeneratePdf(lo));
        }
        let width = (hi - lo) / bin_count as f64;
        let mut counts = vec![0usize; bin_count];
        for &v in values {
            let k = (((v - lo) / width) as usize).min(bin_count - 1);
            counts[k] += 1;
        }
        let mut edges: Vec<f64> = (0..=bin_count).map(|k| lo + k as f64 * width).collect();
        edges[bin_count] = hi;
        let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        EmpiricalPdf::from_weights(edges, &weights)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn support(&self) -> (f64, f64) {
        (self.edges[0], self.edges[self.edges.len() - 1])
    }

    /// Integrates `f`, `x f` over `[a, b]`.
    pub fn moments(&self, a: f64, b: f64) -> (f64, f64) {
        let mut mass = 0.0;
        let mut first = 0.0;
        for (e, &d) in self.edges.windows(2).zip(&self.densities) {
            let x1 = e[0].max(a);
            let x2 = e[1].min(b);
            if x2 > x1 && d > 0.0 {
                mass += d * (x2 - x1);
                first += d * (x2 * x2 - x1 * x1) * 0.5;
            }
        }
        (mass, first)
    }

    /// `integral over [a, b] of (x - level)^2 f(x)`.
    pub fn distortion(&self, a: f64, b: f64, level: f64) -> f64 {
        let mut total = 0.0;
        for (e, &d) in self.edges.windows(2).zip(&self.densities) {
            let x1 = e[0].max(a);
            let x2 = e[1].min(b);
            if x2 > x1 && d > 0.0 {
                let u1 = x1 - level;
                let u2 = x2 - level;
                total += d * (u2 * u2 * u2 - u1 * u1 * u1) / 3.0;
            }
        }
        total
    }

    pub fn total_mass(&self) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.densities)
            .map(|(e, d)| d * (e[1] - e[0]))
            .sum()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "bin_lo,bin_hi,density")?;
        for (e, d) in self.edges.windows(2).zip(&self.densities) {
            writeln!(w, "{},{},{}", e[0], e[1], d)?;
        }
        Ok(())
    }
}

/// Histogram of the reconstruction grid over its own value range.
pub fn estimate_pdf(recon: &Reconstruction, bin_count: usize) -> Result<EmpiricalPdf> {
    let (lo, hi) = value_range(recon);
    if !(hi > lo) {
        return Err(Error::DegeneratePdf(lo));
    }
    EmpiricalPdf::from_samples(&recon.grid, bin_count)
}

/// Cell boundaries for sorted `levels`: support ends, then midpoints.
fn cell_boundaries(levels: &[f64], support: (f64, f64)) -> Vec<f64> {
    let mut b = Vec::with_capacity(levels.len() + 1);
    b.push(support.0);
    for w in levels.windows(2) {
        b.push(((w[0] + w[1]) * 0.5).clamp(support.0, support.1));
    }
    b.push(support.1);
    b
}

fn mse_of(pdf: &EmpiricalPdf, levels: &[f64]) -> f64 {
    let b = cell_boundaries(levels, pdf.support());
    levels
        .iter()
        .enumerate()
        .map(|(i, &l)| pdf.distortion(b[i], b[i + 1], l))
        .sum()
}

/// Mean squared quantization error of `levels` under `pdf`.
pub fn quantizer_mse(pdf: &EmpiricalPdf, levels: &ContourLevelSet) -> f64 {
    mse_of(pdf, levels.levels())
}

/// Same as [`quantizer_mse`] for a raw ascending slice.
pub fn quantizer_mse_raw(pdf: &EmpiricalPdf, levels: &[f64]) -> f64 {
    mse_of(pdf, levels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydMaxOptions {
    pub rel_tol: f64,
    pub max_iters: usize,
}

impl Default for LloydMaxOptions {
    fn default() -> Self {
        LloydMaxOptions {
            rel_tol: LLOYD_MAX_REL_TOL,
            max_iters: LLOYD_MAX_MAX_ITERS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LloydMax {
    pub levels: ContourLevelSet,
    pub iterations: usize,
    /// Distortion of the initial levels followed by one entry per iteration.
    pub mse_trace: Vec<f64>,
}

/// One boundary/centroid update. Cells without mass keep their level.
fn lloyd_step(pdf: &EmpiricalPdf, levels: &[f64]) -> Vec<f64> {
    let b = cell_boundaries(levels, pdf.support());
    levels
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let (mass, first) = pdf.moments(b[i], b[i + 1]);
            if mass > 0.0 {
                (first / mass).clamp(b[i], b[i + 1])
            } else {
                l
            }
        })
        .collect()
}

pub fn lloyd_max(
    pdf: &EmpiricalPdf,
    initial: &ContourLevelSet,
    opts: LloydMaxOptions,
) -> Result<LloydMax> {
    let support = pdf.support();
    if initial
        .levels()
        .iter()
        .any(|&l| !(support.0 <= l && l <= support.1))
    {
        return Err(Error::InvalidLevels(format!(
            "initial levels {:?} outside pdf support {support:?}",
            initial.levels()
        )));
    }
    let tol = opts.rel_tol * (support.1 - support.0);
    let mut levels = initial.levels().to_vec();
    let mut mse_trace = vec![mse_of(pdf, &levels)];
    let mut last_move = f64::INFINITY;
    for it in 1..=opts.max_iters {
        let next = lloyd_step(pdf, &levels);
        last_move = next
            .iter()
            .zip(&levels)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        levels = next;
        mse_trace.push(mse_of(pdf, &levels));
        if last_move < tol {
            let levels = ContourLevelSet::new(levels, support)?;
            return Ok(LloydMax {
                levels,
                iterations: it,
                mse_trace,
            });
        }
    }
    let last = ContourLevelSet::new(levels, support)?;
    Err(Error::NoConvergence {
        iterations: opts.max_iters,
        last_move,
        last,
    })
}

/// Levels at the `(i - 1/2) / m` quantiles of `pdf`.
///
/// A starting point for Lloyd-Max that puts every level where the pdf has
/// mass. Equally spaced starts can leave a level stranded in an empty gap.
pub fn quantile_levels(pdf: &EmpiricalPdf, m: usize) -> Result<ContourLevelSet> {
    if m == 0 {
        return Err(Error::InvalidLevels("need at least one level".into()));
    }
    let total = pdf.total_mass();
    let mut levels = Vec::with_capacity(m);
    let mut bins = pdf.edges.windows(2).zip(&pdf.densities);
    let mut below = 0.0;
    let mut current = bins.next();
    for i in 0..m {
        let target = (i as f64 + 0.5) / m as f64 * total;
        while let Some((e, &d)) = current {
            let mass = d * (e[1] - e[0]);
            if d > 0.0 && below + mass >= target {
                levels.push(e[0] + (target - below) / d);
                break;
            }
            below += mass;
            current = bins.next();
        }
    }
    if levels.len() != m {
        return Err(Error::DegeneratePdf(total));
    }
    ContourLevelSet::new(levels, pdf.support())
}

/// Lloyd-Max levels for `m` cells starting from `initial`, default tolerances.
pub fn lloyd_max_levels(
    pdf: &EmpiricalPdf,
    m: usize,
    initial: &ContourLevelSet,
) -> Result<ContourLevelSet> {
    if initial.len() != m {
        return Err(Error::InvalidLevels(format!(
            "initial set has {} levels, expected {m}",
            initial.len()
        )));
    }
    lloyd_max(pdf, initial, LloydMaxOptions::default()).map(|r| r.levels)
}
