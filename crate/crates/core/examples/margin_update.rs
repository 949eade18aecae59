//! The margin update rules on a made-up error sequence.

use contour_monitor::monitoring::{update_delta, update_delta_mu};

fn main() -> contour_monitor::Result<()> {
    let errors = [4.0, 1.0, 0.6, 0.5, 0.55, 0.4, 0.42, 0.41];
    let mut normalized = 0.2;
    let mut fixed_step = 0.2;
    println!("{:>2} {:>6} {:>10} {:>10}", "k", "error", "normalized", "mu = 0.1");
    for k in 2..errors.len() {
        normalized = update_delta(normalized, errors[k - 1], errors[k - 2])?;
        fixed_step = update_delta_mu(fixed_step, errors[k - 1], errors[k - 2], 0.1, 1e-6);
        println!("{k:>2} {:>6.2} {normalized:>10.4} {fixed_step:>10.4}", errors[k]);
    }
    Ok(())
}
