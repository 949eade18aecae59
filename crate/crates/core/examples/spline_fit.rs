//! Reconstructs a field from scattered samples with the bi-harmonic spline.

use contour_monitor::field::{FieldParams, SensorDeployment, SyntheticFieldModel};
use contour_monitor::interpolation::{evaluate_spline, fit_biharmonic_spline, GridSpec, Reconstruction};
use contour_monitor::metrics::mean_abs_diff;

fn main() -> contour_monitor::Result<()> {
    let field = SyntheticFieldModel::random(&FieldParams::default(), 11);
    let grid = GridSpec::standard();
    let truth = Reconstruction::from_fn(grid, |x, y| field.evaluate(x, y));

    for count in [50, 200, 800] {
        let sensors = SensorDeployment::uniform(count, 100.0, 100.0, 5);
        let points: Vec<_> = sensors.sensors.iter().map(|s| (s.x, s.y)).collect();
        let values = sensors.sample(&field);

        let spline = fit_biharmonic_spline(&points, &values)?;
        let worst = points
            .iter()
            .zip(&values)
            .map(|(&(x, y), v)| (spline.evaluate(x, y) - v).abs())
            .fold(0.0, f64::max);
        let recon = evaluate_spline(&spline, &grid);
        println!(
            "{count:4} samples: max misfit at samples {worst:.2e}, mean |error| on grid {:.4}",
            mean_abs_diff(&recon, &truth)?
        );
    }
    Ok(())
}
