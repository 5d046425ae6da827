use ndarray::{Array2, Array3};

use crate::{Error, Result};

/// An observed series, time by observable dimension. Finite-valued.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Array2<f64>,
    names: Vec<String>,
}

impl TimeSeries {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let names = (0..values.ncols()).map(|i| format!("x{i}")).collect();
        Self::with_names(values, names)
    }

    pub fn with_names(values: Array2<f64>, names: Vec<String>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::DimensionMismatch(
                "time series needs at least one row and column".into(),
            ));
        }
        if names.len() != values.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{} column names for {} columns",
                names.len(),
                values.ncols()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("time series values"));
        }
        Ok(Self { values, names })
    }

    /// Univariate helper.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        let arr = Array2::from_shape_vec((values.len(), 1), values.to_vec())
            .expect("shape from length");
        Self::new(arr)
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires T >= 1
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Column `d` as a plain vector.
    pub fn column(&self, d: usize) -> Vec<f64> {
        self.values.column(d).to_vec()
    }
}

/// A batch of equal-length simulated series with aligned hidden-state targets.
#[derive(Debug, Clone)]
pub struct TimeSeriesBatch {
    pub obs: Array3<f64>,
    pub states: Array3<f64>,
}

impl TimeSeriesBatch {
    pub fn new(obs: Array3<f64>, states: Array3<f64>) -> Result<Self> {
        if obs.shape()[0] != states.shape()[0] || obs.shape()[1] != states.shape()[1] {
            return Err(Error::DimensionMismatch(format!(
                "obs {:?} vs states {:?}",
                obs.shape(),
                states.shape()
            )));
        }
        Ok(Self { obs, states })
    }

    pub fn batch_size(&self) -> usize {
        self.obs.shape()[0]
    }

    pub fn series_len(&self) -> usize {
        self.obs.shape()[1]
    }
}

/// Per-time, per-state posterior means and standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalGaussianPosterior {
    pub mean: Array2<f64>,
    pub std: Array2<f64>,
}

impl MarginalGaussianPosterior {
    pub fn new(mean: Array2<f64>, std: Array2<f64>) -> Result<Self> {
        if mean.dim() != std.dim() {
            return Err(Error::DimensionMismatch(format!(
                "mean {:?} vs std {:?}",
                mean.dim(),
                std.dim()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("posterior mean"));
        }
        for &s in std.iter() {
            if !s.is_finite() || s <= 0.0 {
                return Err(Error::NonPositiveStd(s));
            }
        }
        Ok(Self { mean, std })
    }

    pub fn series_len(&self) -> usize {
        self.mean.nrows()
    }

    pub fn n_states(&self) -> usize {
        self.mean.ncols()
    }

    /// Fraction of true values inside the +/- `n_std` band.
    pub fn coverage(&self, truth: &Array2<f64>, n_std: f64) -> f64 {
        assert_eq!(truth.dim(), self.mean.dim());
        let mut hit = 0usize;
        for ((m, s), x) in self.mean.iter().zip(self.std.iter()).zip(truth.iter()) {
            if (x - m).abs() <= n_std * s {
                hit += 1;
            }
        }
        hit as f64 / truth.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    #[test]
    fn rejects_nan() {
        let arr = arr2(&[[1.0], [f64::NAN]]);
        assert!(TimeSeries::new(arr).is_err());
    }

    #[test]
    fn rejects_nonpositive_std() {
        let m = arr2(&[[0.0]]);
        let s = arr2(&[[0.0]]);
        assert!(matches!(
            MarginalGaussianPosterior::new(m, s),
            Err(Error::NonPositiveStd(_))
        ));
    }

    #[test]
    fn batch_shape_check() {
        let obs = Array3::zeros((2, 5, 1));
        let states = Array3::zeros((2, 4, 1));
        assert!(TimeSeriesBatch::new(obs, states).is_err());
    }

    #[test]
    fn coverage_counts_band_hits() {
        let post = MarginalGaussianPosterior::new(
            arr2(&[[0.0], [0.0]]),
            arr2(&[[1.0], [1.0]]),
        )
        .unwrap();
        let truth = arr2(&[[1.0], [5.0]]);
        assert_eq!(post.coverage(&truth, 2.0), 0.5);
    }
}
