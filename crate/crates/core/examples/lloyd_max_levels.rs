//! Places contour levels for a field's value distribution and compares
//! Lloyd-Max with equal spacing.

use contour_monitor::field::{FieldParams, SyntheticFieldModel};
use contour_monitor::interpolation::{GridSpec, Reconstruction};
use contour_monitor::quantization::{
    estimate_pdf, lloyd_max_levels, quantizer_mse, uniform_levels, DEFAULT_BIN_COUNT,
};

fn main() -> contour_monitor::Result<()> {
    let field = SyntheticFieldModel::random(&FieldParams::default(), 3);
    let truth = Reconstruction::from_fn(GridSpec::standard(), |x, y| field.evaluate(x, y));
    let pdf = estimate_pdf(&truth, DEFAULT_BIN_COUNT)?;
    let (lo, hi) = pdf.support();
    println!("value support [{lo:.3}, {hi:.3}]");
    println!("{:>3} {:>12} {:>12}", "M", "uniform mse", "lloyd-max");
    for m in [2, 4, 8, 16] {
        let uniform = uniform_levels(lo, hi, m)?;
        let optimal = lloyd_max_levels(&pdf, m, &uniform)?;
        println!("{m:>3} {:>12.5} {:>12.5}", quantizer_mse(&pdf, &uniform), quantizer_mse(&pdf, &optimal));
    }
    let four = lloyd_max_levels(&pdf, 4, &uniform_levels(lo, hi, 4)?)?;
    println!("Lloyd-Max levels for M = 4: {:.3?}", four.levels());
    Ok(())
}
