//! Draws a sum-of-Gaussians field, samples it with noisy sensors and shows
//! what the moving average does to the noise.

use contour_monitor::field::{
    moving_average, observe, FieldParams, SensorDeployment, SyntheticFieldModel,
};
use contour_monitor::seed::{self, Purpose};

fn std_dev(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

fn main() -> contour_monitor::Result<()> {
    let master = 7;
    let params = FieldParams::default();
    let field = SyntheticFieldModel::random(&params, seed::replicate_seed(master, 0, Purpose::Field));
    let sensors = SensorDeployment::uniform(5000, 100.0, 100.0, seed::replicate_seed(master, 0, Purpose::Deployment));

    let truth = sensors.sample(&field);
    let lo = truth.iter().cloned().fold(f64::MAX, f64::min);
    let hi = truth.iter().cloned().fold(f64::MIN, f64::max);
    println!("{} + {} Gaussians, sensor readings span [{lo:.3}, {hi:.3}]",
        field.components_a.len(), field.components_b.len());

    // Nine raw snapshots with std 0.3, then their per-sensor mean.
    let raw_sigma = 0.3;
    let snapshots: Vec<_> = (0..9)
        .map(|t| observe(&field, &sensors, raw_sigma, seed::derive(master, &[3, t])))
        .collect();
    let filtered = moving_average(&snapshots, 9)?;
    let residual = |values: Vec<f64>| -> Vec<f64> { values.iter().zip(&truth).map(|(v, t)| v - t).collect() };
    println!("raw noise std      {:.4}", std_dev(&residual(snapshots[0].values().collect())));
    println!("filtered noise std {:.4}  (expected {:.4})", std_dev(&residual(filtered.values().collect())), raw_sigma / 3.0);

    // The narrow set drifts to the right and wraps at the edge.
    let later = field.shift_components(25.0);
    println!("g(50, 50) now {:.4}, after a 25-unit drift {:.4}", field.evaluate(50.0, 50.0), later.evaluate(50.0, 50.0));

    let text = field.to_text();
    let back = SyntheticFieldModel::from_text(&text)?;
    assert_eq!(back, field);
    println!("model text: {} lines, round-trips exactly", text.lines().count());
    Ok(())
}
