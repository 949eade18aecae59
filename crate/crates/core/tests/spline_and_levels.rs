use approx::assert_relative_eq;
use contour_monitor::interpolation::{evaluate_spline, fit_biharmonic_spline, GridSpec};
use contour_monitor::quantization::{
    lloyd_max, lloyd_max_levels, quantile_levels, quantizer_mse_raw, uniform_levels, EmpiricalPdf,
    LloydMaxOptions,
};
use contour_monitor::seed;
use rand::Rng;

fn random_points(n: usize, s: u64) -> (Vec<(f64, f64)>, Vec<f64>, Vec<f64>) {
    let mut rng = seed::rng(s);
    let pts = (0..n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
    let a = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
    (pts, a, b)
}

#[test]
fn spline_superposition() {
    let (pts, a, b) = random_points(40, 1);
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let grid = GridSpec::new(21, 21, 100.0, 100.0).unwrap();
    let ga = evaluate_spline(&fit_biharmonic_spline(&pts, &a).unwrap(), &grid);
    let gb = evaluate_spline(&fit_biharmonic_spline(&pts, &b).unwrap(), &grid);
    let gs = evaluate_spline(&fit_biharmonic_spline(&pts, &sum).unwrap(), &grid);
    for k in 0..grid.len() {
        assert_relative_eq!(gs.grid[k], ga.grid[k] + gb.grid[k], epsilon = 1e-7, max_relative = 1e-7);
    }
}

#[test]
fn spline_translation_invariance() {
    let (pts, a, _) = random_points(30, 2);
    let shifted: Vec<(f64, f64)> = pts.iter().map(|p| (p.0 + 13.5, p.1 - 7.25)).collect();
    let m0 = fit_biharmonic_spline(&pts, &a).unwrap();
    let m1 = fit_biharmonic_spline(&shifted, &a).unwrap();
    let mut rng = seed::rng(3);
    for _ in 0..50 {
        let (x, y) = (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        assert_relative_eq!(m0.evaluate(x, y), m1.evaluate(x + 13.5, y - 7.25), epsilon = 1e-8, max_relative = 1e-8);
    }
}

fn triangular(bins: usize) -> EmpiricalPdf {
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    // Mass of f(x) = 2x over each bin.
    let masses: Vec<f64> = edges.windows(2).map(|e| e[1] * e[1] - e[0] * e[0]).collect();
    EmpiricalPdf::from_weights(edges, &masses).unwrap()
}

/// Best level pair on a 1e-3 grid, scored by the closed form for f(x) = 2x.
fn brute_force_pair() -> (f64, f64) {
    let mse = |a: f64, b: f64| {
        let t = (a + b) / 2.0;
        // integral of (x - l)^2 2x over [lo, hi]
        let part = |lo: f64, hi: f64, l: f64| {
            let f = |x: f64| x.powi(4) / 2.0 - 4.0 * l * x.powi(3) / 3.0 + l * l * x * x;
            f(hi) - f(lo)
        };
        part(0.0, t, a) + part(t, 1.0, b)
    };
    let mut best = (f64::MAX, 0.0, 0.0);
    for i in 1..1000 {
        for j in i + 1..1000 {
            let (a, b) = (i as f64 * 1e-3, j as f64 * 1e-3);
            let v = mse(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    (best.1, best.2)
}

#[test]
fn triangular_pdf_two_levels_match_search() {
    // A fine histogram of f(x) = 2x is piecewise constant, so allow its
    // discretization on top of the search resolution.
    let pdf = triangular(4000);
    let levels = lloyd_max_levels(&pdf, 2, &uniform_levels(0.0, 1.0, 2).unwrap()).unwrap();
    let (a, b) = brute_force_pair();
    assert!((levels.levels()[0] - a).abs() <= 2e-3, "{:?} vs {a}", levels.levels());
    assert!((levels.levels()[1] - b).abs() <= 2e-3, "{:?} vs {b}", levels.levels());
}

#[test]
fn lloyd_max_output_is_a_fixed_point() {
    let pdf = EmpiricalPdf::from_weights(vec![0.0, 1.0, 2.0, 3.0, 4.0], &[1.0, 4.0, 2.0, 0.5]).unwrap();
    for m in 1..6 {
        let first = lloyd_max_levels(&pdf, m, &quantile_levels(&pdf, m).unwrap()).unwrap();
        let again = lloyd_max(&pdf, &first, LloydMaxOptions::default()).unwrap();
        for (x, y) in first.levels().iter().zip(again.levels.levels()) {
            assert!((x - y).abs() <= 1e-5 * 4.0, "M={m}: {x} -> {y}");
        }
    }
}

#[test]
fn lloyd_max_is_affine_equivariant() {
    let weights = [0.5, 3.0, 1.0, 0.2, 2.0];
    let edges: Vec<f64> = (0..=5).map(|i| i as f64).collect();
    let (scale, shift) = (2.5, -4.0);
    let moved: Vec<f64> = edges.iter().map(|e| scale * e + shift).collect();
    let p0 = EmpiricalPdf::from_weights(edges, &weights).unwrap();
    let p1 = EmpiricalPdf::from_weights(moved, &weights).unwrap();
    for m in 1..5 {
        let l0 = lloyd_max_levels(&p0, m, &quantile_levels(&p0, m).unwrap()).unwrap();
        let l1 = lloyd_max_levels(&p1, m, &quantile_levels(&p1, m).unwrap()).unwrap();
        for (a, b) in l0.levels().iter().zip(l1.levels()) {
            assert_relative_eq!(scale * a + shift, *b, epsilon = 1e-4);
        }
        assert_relative_eq!(
            quantizer_mse_raw(&p0, l0.levels()) * scale * scale,
            quantizer_mse_raw(&p1, l1.levels()),
            max_relative = 1e-6
        );
    }
}

#[test]
fn mse_never_increases_across_iterations() {
    let mut rng = seed::rng(44);
    for _ in 0..50 {
        let bins = rng.gen_range(2..12);
        let edges: Vec<f64> = (0..=bins).map(|i| i as f64).collect();
        let w: Vec<f64> = (0..bins).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.1..5.0) }).collect();
        let Ok(pdf) = EmpiricalPdf::from_weights(edges, &w) else { continue };
        let m = rng.gen_range(1..6);
        let init = uniform_levels(0.0, bins as f64, m).unwrap();
        let trace = match lloyd_max(&pdf, &init, LloydMaxOptions::default()) {
            Ok(r) => r.mse_trace,
            Err(e) => panic!("{e}"),
        };
        for w in trace.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-15, "{trace:?}");
        }
    }
}
