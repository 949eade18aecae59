//! Reconstruction error and reporting cost.

use crate::error::{Error, Result};
use crate::interpolation::Reconstruction;

/// Mean absolute difference of two grids over the same lattice.
pub fn mean_abs_diff(a: &Reconstruction, b: &Reconstruction) -> Result<f64> {
    if a.spec != b.spec || a.grid.len() != b.grid.len() {
        return Err(Error::GridMismatch(format!("{:?} vs {:?}", a.spec, b.spec)));
    }
    let total: f64 = a.grid.iter().zip(&b.grid).map(|(x, y)| (x - y).abs()).sum();
    Ok(total / a.grid.len() as f64)
}

/// Running totals of per-iteration report counts.
pub fn cumulative_cost(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .scan(0usize, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect()
}

pub fn reporting_fraction(count: usize, total_sensors: usize) -> f64 {
    debug_assert!(total_sensors > 0 && count <= total_sensors);
    count as f64 / total_sensors as f64
}

/// `20 log10(error / reference)`; the reference is normally the discovered signal span.
pub fn error_db(error: f64, reference: f64) -> f64 {
    20.0 * (error / reference).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::GridSpec;
    use proptest::prelude::*;

    fn grid(values: Vec<f64>) -> Reconstruction {
        let spec = GridSpec::new(2, values.len() / 2, 1.0, 1.0).unwrap();
        Reconstruction {
            grid: values,
            spec,
            iteration: 0,
        }
    }

    #[test]
    fn identical_grids() {
        let a = grid(vec![0.3, -1.0, 2.0, 5.0]);
        assert_eq!(mean_abs_diff(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn constant_offset() {
        let spec = GridSpec::new(7, 5, 3.0, 2.0).unwrap();
        let a = Reconstruction::from_fn(spec, |_, _| 1.0);
        let b = Reconstruction::zeros(spec);
        assert_eq!(mean_abs_diff(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_two_by_two() {
        let a = grid(vec![0.0, 1.0, 2.0, 3.0]);
        let b = grid(vec![1.0, 1.0, 1.0, 1.0]);
        assert_eq!(mean_abs_diff(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn mismatched_grids() {
        let a = grid(vec![0.0; 4]);
        let b = grid(vec![0.0; 6]);
        assert!(matches!(mean_abs_diff(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn cost_prefix_sums() {
        assert_eq!(cumulative_cost(&[10, 20, 30]), vec![10, 30, 60]);
        assert!(cumulative_cost(&[]).is_empty());
    }

    #[test]
    fn fractions() {
        assert_eq!(reporting_fraction(0, 5000), 0.0);
        assert_eq!(reporting_fraction(5000, 5000), 1.0);
        assert_eq!(reporting_fraction(475, 5000), 0.095);
    }

    #[test]
    fn db_of_reference_is_zero() {
        assert_eq!(error_db(2.0, 2.0), 0.0);
        assert!((error_db(0.2, 2.0) + 20.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn mean_abs_diff_is_a_metric(
            a in prop::collection::vec(-10.0f64..10.0, 8),
            b in prop::collection::vec(-10.0f64..10.0, 8),
            c in prop::collection::vec(-10.0f64..10.0, 8),
            shift in -5.0f64..5.0,
        ) {
            let (ga, gb, gc) = (grid(a.clone()), grid(b.clone()), grid(c));
            let ab = mean_abs_diff(&ga, &gb).unwrap();
            prop_assert_eq!(ab, mean_abs_diff(&gb, &ga).unwrap());
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab == 0.0, a == b);
            let ac = mean_abs_diff(&ga, &gc).unwrap();
            let cb = mean_abs_diff(&gc, &gb).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
            let sa = grid(a.iter().map(|v| v + shift).collect());
            let sb = grid(b.iter().map(|v| v + shift).collect());
            prop_assert!((mean_abs_diff(&sa, &sb).unwrap() - ab).abs() < 1e-12);
        }

        #[test]
        fn cumulative_cost_is_non_decreasing(counts in prop::collection::vec(0usize..5000, 0..40)) {
            let cum = cumulative_cost(&counts);
            prop_assert!(cum.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(cum.last().copied().unwrap_or(0), counts.iter().sum::<usize>());
        }
    }
}
