//! Bi-harmonic spline interpolation of scattered reports.
//!
//! The interpolant is a pure Green's function expansion
//! `s(p) = sum_k c_k * g(|p - p_k|)` with `g(r) = r^2 (ln r - 1)`, the
//! biharmonic Green's function in two dimensions. Coefficients come from a
//! dense LU solve of `G c = v`.

use std::io::{self, Write};

use log::debug;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Points closer than this are merged before fitting.
pub const MERGE_DISTANCE: f64 = 1e-9;

/// Exactness bound applied at fit points, relative to `1 + |value|`.
pub const EXACTNESS_TOL: f64 = 1e-6;

const RIDGE_SCALE: f64 = 1e-8;

#[inline]
pub fn greens_function(r: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        r * r * (r.ln() - 1.0)
    }
}

/// `greens_function(sqrt(r2))` without the square root.
#[inline]
fn greens_sq(r2: f64) -> f64 {
    if r2 <= 0.0 {
        0.0
    } else {
        r2 * (0.5 * r2.ln() - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplineModel {
    pub centers: Vec<(f64, f64)>,
    pub coefficients: Vec<f64>,
    /// Diagonal ridge added during the fit, 0 for a plain solve.
    pub ridge: f64,
}

impl SplineModel {
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.coefficients)
            .map(|(&(cx, cy), &c)| {
                let dx = x - cx;
                let dy = y - cy;
                c * greens_sq(dx * dx + dy * dy)
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Merges points closer than [`MERGE_DISTANCE`], averaging their values.
///
/// Output order follows the first occurrence of each merged cluster.
pub fn merge_coincident(points: &[(f64, f64)], values: &[f64]) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].0.total_cmp(&points[b].0));
    let mut owner: Vec<usize> = (0..points.len()).collect();
    for (pos, &i) in order.iter().enumerate() {
        if owner[i] != i {
            continue;
        }
        for &j in &order[pos + 1..] {
            if points[j].0 - points[i].0 > MERGE_DISTANCE {
                break;
            }
            if owner[j] == j {
                let dx = points[j].0 - points[i].0;
                let dy = points[j].1 - points[i].1;
                if (dx * dx + dy * dy).sqrt() < MERGE_DISTANCE {
                    owner[j] = i;
                }
            }
        }
    }
    let mut slot = vec![usize::MAX; points.len()];
    let mut out_points = Vec::new();
    let mut sums: Vec<(f64, usize)> = Vec::new();
    for i in 0..points.len() {
        let root = owner[i];
        if slot[root] == usize::MAX {
            slot[root] = out_points.len();
            out_points.push(points[root]);
            sums.push((0.0, 0));
        }
        let s = &mut sums[slot[root]];
        s.0 += values[i];
        s.1 += 1;
    }
    let out_values = sums.into_iter().map(|(s, n)| s / n as f64).collect();
    (out_points, out_values)
}

fn greens_matrix(points: &[(f64, f64)]) -> DMatrix<f64> {
    let n = points.len();
    let mut g = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        for j in 0..k {
            let dx = points[j].0 - points[k].0;
            let dy = points[j].1 - points[k].1;
            let v = greens_sq(dx * dx + dy * dy);
            g[(j, k)] = v;
            g[(k, j)] = v;
        }
    }
    g
}

fn max_scaled_residual(g: &DMatrix<f64>, c: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let r = g * c - v;
    r.iter()
        .zip(v.iter())
        .map(|(r, v)| r.abs() / (1.0 + v.abs()))
        .fold(0.0, f64::max)
}

pub fn fit_biharmonic_spline(points: &[(f64, f64)], values: &[f64]) -> Result<SplineModel> {
    if points.len() != values.len() {
        return Err(Error::LengthMismatch {
            points: points.len(),
            values: values.len(),
        });
    }
    if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite()))
        || values.iter().any(|v| !v.is_finite())
    {
        return Err(Error::InvalidArgument("non-finite fit input".into()));
    }
    let (centers, vals) = merge_coincident(points, values);
    let n = centers.len();
    if n < 2 {
        return Err(Error::DegenerateInput { distinct: n });
    }
    let g = greens_matrix(&centers);
    let v = DVector::from_vec(vals);

    let plain = g.clone().lu().solve(&v);
    let plain_residual = plain
        .as_ref()
        .map(|c| max_scaled_residual(&g, c, &v))
        .unwrap_or(f64::INFINITY);
    if plain_residual <= EXACTNESS_TOL * 1e-2 {
        return Ok(SplineModel {
            centers,
            coefficients: plain.expect("finite residual implies a solution").data.into(),
            ridge: 0.0,
        });
    }

    // The diagonal of G is zero, so the ridge scales with the mean off-diagonal magnitude.
    let mean_abs = g.iter().map(|x| x.abs()).sum::<f64>() / (n * n) as f64;
    let ridge = RIDGE_SCALE * mean_abs.max(f64::MIN_POSITIVE);
    debug!("plain spline solve residual {plain_residual:e}, retrying with ridge {ridge:e}");
    let mut gr = g.clone();
    for i in 0..n {
        gr[(i, i)] += ridge;
    }
    let ridged = gr.lu().solve(&v);
    let ridged_residual = ridged
        .as_ref()
        .map(|c| max_scaled_residual(&g, c, &v))
        .unwrap_or(f64::INFINITY);
    let (c, residual, ridge) = if ridged_residual < plain_residual {
        (ridged, ridged_residual, ridge)
    } else {
        (plain, plain_residual, 0.0)
    };
    match c {
        Some(c) if residual <= EXACTNESS_TOL => Ok(SplineModel {
            centers,
            coefficients: c.data.into(),
            ridge,
        }),
        _ => Err(Error::Conditioning {
            points: n,
            residual,
            ridge,
        }),
    }
}

/// Regular `p x q` lattice spanning `[0, width] x [0, height]`, edges included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub p: usize,
    pub q: usize,
    pub width: f64,
    pub height: f64,
}

impl GridSpec {
    pub fn new(p: usize, q: usize, width: f64, height: f64) -> Result<Self> {
        if p < 2 || q < 2 {
            return Err(Error::InvalidArgument(format!("grid must be at least 2x2, got {p}x{q}")));
        }
        if !(width > 0.0 && height > 0.0) {
            return Err(Error::InvalidArgument("grid extent must be positive".into()));
        }
        Ok(GridSpec {
            p,
            q,
            width,
            height,
        })
    }

    /// Unit-spaced 101 x 101 grid over the default 100 x 100 field.
    pub fn standard() -> Self {
        GridSpec {
            p: 101,
            q: 101,
            width: 100.0,
            height: 100.0,
        }
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.width * i as f64 / (self.p - 1) as f64
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.height * j as f64 / (self.q - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.p * self.q
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates in storage order (`i` major).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.p).flat_map(move |i| (0..self.q).map(move |j| (self.x(i), self.y(j))))
    }
}

/// Field values on a [`GridSpec`], stored with `i` (x index) major.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub grid: Vec<f64>,
    pub spec: GridSpec,
    pub iteration: usize,
}

impl Reconstruction {
    pub fn zeros(spec: GridSpec) -> Self {
        Reconstruction {
            grid: vec![0.0; spec.len()],
            spec,
            iteration: 0,
        }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        Reconstruction {
            grid: spec.points().map(|(x, y)| f(x, y)).collect(),
            spec,
            iteration: 0,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.grid[i * self.spec.q + j]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "i,j,x,y,value")?;
        for i in 0..self.spec.p {
            for j in 0..self.spec.q {
                writeln!(
                    w,
                    "{i},{j},{},{},{}",
                    self.spec.x(i),
                    self.spec.y(j),
                    self.get(i, j)
                )?;
            }
        }
        Ok(())
    }
}

pub fn evaluate_spline(model: &SplineModel, spec: &GridSpec) -> Reconstruction {
    let mut grid = Vec::with_capacity(spec.len());
    for i in 0..spec.p {
        let x = spec.x(i);
        for j in 0..spec.q {
            grid.push(model.evaluate(x, spec.y(j)));
        }
    }
    Reconstruction {
        grid,
        spec: *spec,
        iteration: 0,
    }
}

pub fn value_range(recon: &Reconstruction) -> (f64, f64) {
    recon
        .grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_points(n: usize, s: u64) -> Vec<(f64, f64)> {
        let mut rng = seed::rng(s);
        (0..n)
            .map(|_| (rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0))
            .collect()
    }

    #[test]
    fn greens_function_values() {
        assert_eq!(greens_function(0.0), 0.0);
        assert_eq!(greens_function(1.0), -1.0);
        assert!(greens_function(std::f64::consts::E).abs() < 1e-15);
        assert!(greens_function(1e-12).abs() <= 1e-20);
        assert_relative_eq!(greens_sq(4.0), greens_function(2.0), epsilon = 1e-15);
    }

    #[test]
    fn zero_data_gives_zero_interpolant() {
        let m = fit_biharmonic_spline(&[(0.0, 0.0), (3.0, 4.0)], &[0.0, 0.0]).unwrap();
        assert_eq!(m.evaluate(0.0, 0.0), 0.0);
        assert_eq!(m.evaluate(3.0, 4.0), 0.0);
    }

    #[test]
    fn reproduces_plane_at_nodes() {
        let pts = random_points(5, 99);
        let vals: Vec<f64> = pts.iter().map(|p| 0.1 * p.0 + 0.2 * p.1).collect();
        let m = fit_biharmonic_spline(&pts, &vals).unwrap();
        for (p, v) in pts.iter().zip(&vals) {
            assert!((m.evaluate(p.0, p.1) - v).abs() <= 1e-6 * v.abs().max(1.0));
        }
    }

    #[test]
    fn coincident_points_are_merged() {
        let pts = [(1.0, 1.0), (1.0, 1.0 + 1e-12), (5.0, 2.0)];
        let m = fit_biharmonic_spline(&pts, &[1.0, 3.0, 0.0]).unwrap();
        assert_eq!(m.len(), 2);
        assert_relative_eq!(m.evaluate(1.0, 1.0), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_biharmonic_spline(&[(1.0, 1.0)], &[1.0]),
            Err(Error::DegenerateInput { distinct: 1 })
        ));
        assert!(matches!(
            fit_biharmonic_spline(&[(1.0, 1.0), (1.0, 1.0)], &[1.0, 2.0]),
            Err(Error::DegenerateInput { distinct: 1 })
        ));
        assert!(matches!(
            fit_biharmonic_spline(&[(1.0, 1.0), (2.0, 1.0)], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn zero_coefficients_give_zero_grid() {
        let m = SplineModel {
            centers: vec![(10.0, 10.0), (50.0, 20.0)],
            coefficients: vec![0.0, 0.0],
            ridge: 0.0,
        };
        let r = evaluate_spline(&m, &GridSpec::new(5, 4, 100.0, 100.0).unwrap());
        assert!(r.grid.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_distance_from_single_center() {
        let m = SplineModel {
            centers: vec![(0.0, 1.0)],
            coefficients: vec![1.0],
            ridge: 0.0,
        };
        let r = evaluate_spline(&m, &GridSpec::new(2, 2, 1.0, 1.0).unwrap());
        // grid point (0, 0) is at distance 1 from the center
        assert_relative_eq!(r.get(0, 0), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn evaluation_is_linear_in_coefficients() {
        let centers = random_points(6, 5);
        let c1: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let c2: Vec<f64> = (0..6).map(|i| (i * i) as f64 * 0.1).collect();
        let mk = |c: Vec<f64>| SplineModel {
            centers: centers.clone(),
            coefficients: c,
            ridge: 0.0,
        };
        let spec = GridSpec::new(7, 9, 100.0, 100.0).unwrap();
        let sum: Vec<f64> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
        let a = evaluate_spline(&mk(c1), &spec);
        let b = evaluate_spline(&mk(c2), &spec);
        let s = evaluate_spline(&mk(sum), &spec);
        for k in 0..spec.len() {
            assert_relative_eq!(s.grid[k], a.grid[k] + b.grid[k], max_relative = 1e-12, epsilon = 1e-9);
        }
    }

    #[test]
    fn value_range_extremes() {
        let spec = GridSpec::new(2, 2, 1.0, 1.0).unwrap();
        assert_eq!(value_range(&Reconstruction::zeros(spec)), (0.0, 0.0));
        let r = Reconstruction {
            grid: vec![-1.0, 0.0, 5.0, 0.0],
            spec,
            iteration: 0,
        };
        assert_eq!(value_range(&r), (-1.0, 5.0));
    }

    #[test]
    fn grid_includes_edges() {
        let s = GridSpec::standard();
        assert_eq!(s.x(0), 0.0);
        assert_eq!(s.x(100), 100.0);
        assert_eq!(s.y(37), 37.0);
        assert!(GridSpec::new(1, 5, 1.0, 1.0).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let spec = GridSpec::new(2, 2, 1.0, 1.0).unwrap();
        let r = Reconstruction::from_fn(spec, |x, y| x + 10.0 * y);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "i,j,x,y,value\n0,0,0,0,0\n0,1,0,1,10\n1,0,1,0,1\n1,1,1,1,11\n");
    }
}
