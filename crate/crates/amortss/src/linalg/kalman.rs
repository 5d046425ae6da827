use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::core::{RngStream, TimeSeries};
use crate::{Error, Result};

use super::{psd_sqrt, symmetrize};

/// A matrix that is either constant over time or given per period.
///
/// Per-period sequences are indexed by the 1-based target period `t`; entry
/// `t` parameterizes the transition *into* period `t` (or the observation
/// *at* period `t`).
#[derive(Debug, Clone)]
pub enum MatSeq {
    Constant(DMatrix<f64>),
    TimeVarying(Vec<DMatrix<f64>>),
}

impl MatSeq {
    pub fn at(&self, t: usize) -> &DMatrix<f64> {
        match self {
            MatSeq::Constant(m) => m,
            MatSeq::TimeVarying(v) => &v[t - 1],
        }
    }

    fn first(&self) -> &DMatrix<f64> {
        match self {
            MatSeq::Constant(m) => m,
            MatSeq::TimeVarying(v) => &v[0],
        }
    }
}

#[derive(Debug, Clone)]
pub enum VecSeq {
    Constant(DVector<f64>),
    TimeVarying(Vec<DVector<f64>>),
}

impl VecSeq {
    pub fn at(&self, t: usize) -> &DVector<f64> {
        match self {
            VecSeq::Constant(v) => v,
            VecSeq::TimeVarying(seq) => &seq[t - 1],
        }
    }
}

/// Linear Gaussian state-space model
///
/// ```text
/// s_t = A s_{t-1} + B e_t,   e_t ~ N(0, Q_t)
/// y_t = C s_t + d_t + u_t,   u_t ~ N(0, H_t)       t = 1..T
/// s_1 ~ N(a1, P1)            (predictive moments for the first period)
/// ```
#[derive(Debug, Clone)]
pub struct LinearGaussianSSM {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub q: MatSeq,
    pub c: DMatrix<f64>,
    pub d: VecSeq,
    pub h: MatSeq,
    pub a1: DVector<f64>,
    pub p1: DMatrix<f64>,
}

impl LinearGaussianSSM {
    pub fn n_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_obs(&self) -> usize {
        self.c.nrows()
    }

    pub fn n_shocks(&self) -> usize {
        self.b.ncols()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_states();
        let m = self.n_shocks();
        let p = self.n_obs();
        let dims_ok = self.a.ncols() == n
            && self.b.nrows() == n
            && self.c.ncols() == n
            && self.q.first().nrows() == m
            && self.q.first().ncols() == m
            && self.h.first().nrows() == p
            && self.h.first().ncols() == p
            && self.d.at(1).len() == p
            && self.a1.len() == n
            && self.p1.nrows() == n
            && self.p1.ncols() == n;
        if !dims_ok {
            return Err(Error::DimensionMismatch("state-space matrices".into()));
        }
        for (name, mat) in [("Q", self.q.first()), ("H", self.h.first()), ("P1", &self.p1)] {
            if (mat - mat.transpose()).abs().max() > 1e-8 * (1.0 + mat.abs().max()) {
                return Err(Error::Numerical(format!("{name} is not symmetric")));
            }
            let min_eig = mat
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            if min_eig < -1e-8 * (1.0 + mat.abs().max()) {
                return Err(Error::Numerical(format!("{name} is not PSD")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutput {
    pub loglik: f64,
    pub filtered_means: Vec<DVector<f64>>,
    pub filtered_covs: Vec<DMatrix<f64>>,
    pub predicted_means: Vec<DVector<f64>>,
    pub predicted_covs: Vec<DMatrix<f64>>,
}

#[derive(Debug, Clone)]
pub struct SmootherOutput {
    pub means: Vec<DVector<f64>>,
    pub covs: Vec<DMatrix<f64>>,
}

/// Eigen-based pseudo-inverse of a symmetric PSD matrix together with the
/// retained rank and log pseudo-determinant.
struct SymPinv {
    pinv: DMatrix<f64>,
    rank: usize,
    log_pdet: f64,
    /// projector onto the retained range
    range_proj: DMatrix<f64>,
    scale: f64,
}

fn sym_pinv(m: &DMatrix<f64>) -> SymPinv {
    let mut sym = m.clone();
    symmetrize(&mut sym);
    let eig = sym.symmetric_eigen();
    let p = m.nrows();
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let tol = max_eig.max(1.0) * 1e-12 * p as f64;
    let mut pinv = DMatrix::zeros(p, p);
    let mut proj = DMatrix::zeros(p, p);
    let mut rank = 0;
    let mut log_pdet = 0.0;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > tol {
            let v = eig.eigenvectors.column(i);
            pinv += (1.0 / l) * &v * v.transpose();
            proj += &v * v.transpose();
            rank += 1;
            log_pdet += l.ln();
        }
    }
    SymPinv {
        pinv,
        rank,
        log_pdet,
        range_proj: proj,
        scale: max_eig.max(1.0),
    }
}

/// Kalman filter. Returns the joint Gaussian log density of the
/// observations alongside filtered and one-step-ahead moments.
///
/// Degenerate innovation covariances (exact observations) are handled with a
/// rank-aware pseudo-inverse; `SingularInnovation` is raised only when the
/// innovation has a component outside the covariance's range, i.e. when the
/// data are inconsistent with a degenerate model.
pub fn kalman_filter(model: &LinearGaussianSSM, obs: &TimeSeries) -> Result<FilterOutput> {
    model.validate()?;
    let n = model.n_states();
    let p = model.n_obs();
    if obs.dim() != p {
        return Err(Error::DimensionMismatch(format!(
            "observation dim {} vs model {}",
            obs.dim(),
            p
        )));
    }
    let t_len = obs.len();
    let eye = DMatrix::<f64>::identity(n, n);

    let mut pred_mean = model.a1.clone();
    let mut pred_cov = model.p1.clone();
    let mut loglik = 0.0;
    let mut out = FilterOutput {
        loglik: 0.0,
        filtered_means: Vec::with_capacity(t_len),
        filtered_covs: Vec::with_capacity(t_len),
        predicted_means: Vec::with_capacity(t_len),
        predicted_covs: Vec::with_capacity(t_len),
    };
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();

    for t in 1..=t_len {
        out.predicted_means.push(pred_mean.clone());
        out.predicted_covs.push(pred_cov.clone());

        let y_t = DVector::from_iterator(p, obs.values().row(t - 1).iter().cloned());
        let h_t = model.h.at(t);
        let innovation = &y_t - &model.c * &pred_mean - model.d.at(t);
        let mut f_mat = &model.c * &pred_cov * model.c.transpose() + h_t;
        symmetrize(&mut f_mat);
        let f_dec = sym_pinv(&f_mat);
        if f_dec.rank < p {
            let outside = &innovation - &f_dec.range_proj * &innovation;
            if outside.amax() > 1e-6 * f_dec.scale.sqrt().max(1.0) {
                return Err(Error::SingularInnovation { t });
            }
        }
        loglik -=
            0.5 * (f_dec.rank as f64 * ln_2pi + f_dec.log_pdet + (innovation.transpose() * &f_dec.pinv * &innovation)[(0, 0)]);

        let gain = &pred_cov * model.c.transpose() * &f_dec.pinv;
        let filt_mean = &pred_mean + &gain * &innovation;
        let i_kc = &eye - &gain * &model.c;
        let mut filt_cov = &i_kc * &pred_cov * i_kc.transpose() + &gain * h_t * gain.transpose();
        symmetrize(&mut filt_cov);

        out.filtered_means.push(filt_mean.clone());
        out.filtered_covs.push(filt_cov.clone());

        if t < t_len {
            pred_mean = &model.a * filt_mean;
            pred_cov = &model.a * filt_cov * model.a.transpose()
                + &model.b * model.q.at(t + 1) * model.b.transpose();
            symmetrize(&mut pred_cov);
        }
    }
    out.loglik = loglik;
    Ok(out)
}

/// Rauch-Tung-Striebel smoother on top of [`kalman_filter`].
pub fn kalman_smoother(model: &LinearGaussianSSM, obs: &TimeSeries) -> Result<SmootherOutput> {
    let filt = kalman_filter(model, obs)?;
    Ok(smooth_from_filter(model, &filt))
}

pub(crate) fn smooth_from_filter(model: &LinearGaussianSSM, filt: &FilterOutput) -> SmootherOutput {
    let t_len = filt.filtered_means.len();
    let mut means = filt.filtered_means.clone();
    let mut covs = filt.filtered_covs.clone();
    for t in (0..t_len.saturating_sub(1)).rev() {
        let pred_next_cov = &filt.predicted_covs[t + 1];
        let gain = &filt.filtered_covs[t] * model.a.transpose() * sym_pinv(pred_next_cov).pinv;
        means[t] = &filt.filtered_means[t] + &gain * (&means[t + 1] - &filt.predicted_means[t + 1]);
        let mut cov =
            &filt.filtered_covs[t] + &gain * (&covs[t + 1] - pred_next_cov) * gain.transpose();
        symmetrize(&mut cov);
        covs[t] = cov;
    }
    SmootherOutput { means, covs }
}

/// Simulate an unconditional draw of states and observations from the model.
pub fn simulate_unconditional(
    model: &LinearGaussianSSM,
    t_len: usize,
    rng: &mut impl Rng,
) -> (Vec<DVector<f64>>, TimeSeries) {
    let n = model.n_states();
    let m = model.n_shocks();
    let p = model.n_obs();
    let p1_sqrt = psd_sqrt(&model.p1);
    let normal = |rng: &mut dyn rand::RngCore, k: usize| {
        DVector::from_iterator(k, (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)))
    };
    let mut states = Vec::with_capacity(t_len);
    let mut obs = ndarray::Array2::<f64>::zeros((t_len, p));
    let mut s = &model.a1 + &p1_sqrt * normal(rng, n);
    for t in 1..=t_len {
        if t > 1 {
            let q_sqrt = psd_sqrt(model.q.at(t));
            s = &model.a * &s + &model.b * (&q_sqrt * normal(rng, m));
        }
        let h_sqrt = psd_sqrt(model.h.at(t));
        let y = &model.c * &s + model.d.at(t) + &h_sqrt * normal(rng, p);
        for i in 0..p {
            obs[(t - 1, i)] = y[i];
        }
        states.push(s.clone());
    }
    let obs = TimeSeries::new(obs).expect("simulated observations are finite");
    (states, obs)
}

/// Exact posterior draw of the state path by the simulate-refilter-correct
/// scheme: simulate an unconditional pair, smooth both the real and the
/// simulated observations, and shift the simulated path by the difference of
/// smoothed means.
pub fn simulation_smoother(
    model: &LinearGaussianSSM,
    obs: &TimeSeries,
    stream: RngStream,
) -> Result<Vec<DVector<f64>>> {
    let filt = kalman_filter(model, obs)?;
    let smooth = smooth_from_filter(model, &filt);
    simulation_smoother_with(model, &smooth, obs.len(), stream)
}

/// Variant reusing a precomputed smoother pass over the real data; useful
/// when drawing repeatedly against fixed observations.
pub fn simulation_smoother_with(
    model: &LinearGaussianSSM,
    smooth_real: &SmootherOutput,
    t_len: usize,
    stream: RngStream,
) -> Result<Vec<DVector<f64>>> {
    let mut rng = stream.rng();
    let (sim_states, sim_obs) = simulate_unconditional(model, t_len, &mut rng);
    let sim_filt = kalman_filter(model, &sim_obs)?;
    let sim_smooth = smooth_from_filter(model, &sim_filt);
    Ok((0..t_len)
        .map(|t| &sim_states[t] - &sim_smooth.means[t] + &smooth_real.means[t])
        .collect())
}
