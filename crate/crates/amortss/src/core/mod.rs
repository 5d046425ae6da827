//! Shared domain types, deterministic RNG streams and elementary transforms.

mod csv_io;
mod rng;
mod types;

pub use csv_io::{read_series_csv, write_series_csv};
pub use rng::RngStream;
pub use types::{MarginalGaussianPosterior, TimeSeries, TimeSeriesBatch};

use crate::{Error, Result};

/// Overflow-safe `log(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Logistic function, strictly inside (0, 1) for finite input.
pub fn sigmoid(x: f64) -> f64 {
    let s = if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    };
    // keep downstream 1 - rho^2 terms away from exact zero
    s.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Element-wise `log(c + |y_t|)`.
pub fn log_abs_transform(y: &[f64], c: f64) -> Vec<f64> {
    y.iter().map(|&v| (c + v.abs()).ln()).collect()
}

/// Remove the sample mean and scale to unit standard deviation
/// (population convention, divide by N). Returns the removed moments.
pub fn standardize(x: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    if x.len() < 2 {
        return Err(Error::DimensionMismatch(
            "standardize needs at least 2 points".into(),
        ));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((x.iter().map(|v| (v - mean) / std).collect(), mean, std))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn softplus_known_values() {
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        // asymptote
        assert!((softplus(100.0) - 100.0).abs() / 100.0 < 1e-12);
        // log1p(exp(-100)) at high precision is e^-100 to first order
        let tiny = softplus(-100.0);
        assert!(tiny > 0.0);
        assert!((tiny - (-100.0f64).exp()).abs() < 1e-60);
    }

    #[test]
    fn sigmoid_known_values() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(10.0) - 0.9999546021312976).abs() < 1e-12);
        assert!((sigmoid(-10.0) - (1.0 - sigmoid(10.0))).abs() < 1e-15);
    }

    #[test]
    fn log_abs_known_values() {
        let c = 1e-30;
        let y = [1.0 - c];
        assert!(log_abs_transform(&y, c)[0].abs() < 1e-15);
        let z = [0.0];
        assert!((log_abs_transform(&z, c)[0] - (-30.0 * 10.0f64.ln())).abs() < 1e-10);
        let e = [-(std::f64::consts::E - c)];
        assert!((log_abs_transform(&e, c)[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standardize_basic() {
        let (z, mean, std) = standardize(&[1.0, 2.0, 3.0]).unwrap();
        assert!((mean - 2.0).abs() < 1e-15);
        // population std of [1,2,3] is sqrt(2/3)
        assert!((std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let m: f64 = z.iter().sum::<f64>() / 3.0;
        let v: f64 = z.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / 3.0;
        assert!(m.abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
        assert!(z[0] < z[1] && z[1] < z[2]);
    }

    #[test]
    fn standardize_rejects_constants() {
        assert!(matches!(
            standardize(&[5.0, 5.0, 5.0]),
            Err(Error::ZeroVariance)
        ));
    }

    proptest! {
        #[test]
        fn softplus_sigmoid_stay_finite(x in -1e6f64..1e6f64) {
            prop_assert!(softplus(x).is_finite());
            prop_assert!(softplus(x) >= 0.0);
            let s = sigmoid(x);
            prop_assert!(s.is_finite());
            prop_assert!(s > 0.0 && s < 1.0);
        }

        #[test]
        fn standardize_is_idempotent(xs in proptest::collection::vec(-1e3f64..1e3f64, 3..40)) {
            prop_assume!(xs.iter().any(|&v| (v - xs[0]).abs() > 1e-6));
            let (z, _, _) = standardize(&xs).unwrap();
            let (z2, m2, s2) = standardize(&z).unwrap();
            prop_assert!(m2.abs() < 1e-12);
            prop_assert!((s2 - 1.0).abs() < 1e-12);
            for (a, b) in z.iter().zip(&z2) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
