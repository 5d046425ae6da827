//! Brute-force joint-Gaussian reference computations.
//!
//! These assemble the full `T*n + T*p` dimensional joint distribution of
//! states and observations explicitly and condition by Schur complement.
//! They share no code with the Kalman recursions and exist so the test
//! suites can check the fast path against an independent route.

use nalgebra::{DMatrix, DVector};

use crate::core::TimeSeries;
use crate::linalg::LinearGaussianSSM;

pub struct JointMoments {
    pub state_mean: DVector<f64>,
    pub state_cov: DMatrix<f64>,
    pub obs_mean: DVector<f64>,
    pub obs_cov: DMatrix<f64>,
    /// Cov(states, obs), (T*n) x (T*p)
    pub cross: DMatrix<f64>,
    pub n: usize,
    pub p: usize,
    pub t_len: usize,
}

/// Full joint first and second moments of `(s_1..s_T, y_1..y_T)`.
pub fn joint_moments(model: &LinearGaussianSSM, t_len: usize) -> JointMoments {
    let n = model.n_states();
    let p = model.n_obs();

    // state means
    let mut means: Vec<DVector<f64>> = Vec::with_capacity(t_len);
    means.push(model.a1.clone());
    for t in 1..t_len {
        means.push(&model.a * &means[t - 1]);
    }

    // state covariance blocks cov(s_i, s_j)
    let mut blocks = vec![vec![DMatrix::<f64>::zeros(n, n); t_len]; t_len];
    blocks[0][0] = model.p1.clone();
    for t in 1..t_len {
        blocks[t][t] = &model.a * &blocks[t - 1][t - 1] * model.a.transpose()
            + &model.b * model.q.at(t + 1) * model.b.transpose();
        for j in 0..t {
            blocks[t][j] = &model.a * &blocks[t - 1][j];
            blocks[j][t] = blocks[t][j].transpose();
        }
    }

    let mut state_mean = DVector::zeros(t_len * n);
    let mut state_cov = DMatrix::zeros(t_len * n, t_len * n);
    for t in 0..t_len {
        state_mean.rows_mut(t * n, n).copy_from(&means[t]);
        for j in 0..t_len {
            state_cov
                .view_mut((t * n, j * n), (n, n))
                .copy_from(&blocks[t][j]);
        }
    }

    let mut obs_mean = DVector::zeros(t_len * p);
    let mut obs_cov = DMatrix::zeros(t_len * p, t_len * p);
    let mut cross = DMatrix::zeros(t_len * n, t_len * p);
    for t in 0..t_len {
        obs_mean
            .rows_mut(t * p, p)
            .copy_from(&(&model.c * &means[t] + model.d.at(t + 1)));
        for j in 0..t_len {
            let mut block = &model.c * &blocks[t][j] * model.c.transpose();
            if t == j {
                block += model.h.at(t + 1);
            }
            obs_cov.view_mut((t * p, j * p), (p, p)).copy_from(&block);
            cross
                .view_mut((t * n, j * p), (n, p))
                .copy_from(&(&blocks[t][j] * model.c.transpose()));
        }
    }

    JointMoments {
        state_mean,
        state_cov,
        obs_mean,
        obs_cov,
        cross,
        n,
        p,
        t_len,
    }
}

pub struct BruteForcePosterior {
    pub loglik: f64,
    /// per-period posterior state means
    pub means: Vec<DVector<f64>>,
    /// per-period posterior state covariances (diagonal blocks)
    pub covs: Vec<DMatrix<f64>>,
}

/// Log density of `obs` and the conditional state moments, all from the
/// explicit joint Gaussian.
pub fn brute_force_posterior(model: &LinearGaussianSSM, obs: &TimeSeries) -> BruteForcePosterior {
    let jm = joint_moments(model, obs.len());
    let y = DVector::from_iterator(
        jm.t_len * jm.p,
        obs.values().iter().cloned(),
    );
    let resid = &y - &jm.obs_mean;
    let chol = jm
        .obs_cov
        .clone()
        .cholesky()
        .expect("brute-force oracle needs a nondegenerate observation covariance");
    let solved = chol.solve(&resid);
    let logdet = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let k = (jm.t_len * jm.p) as f64;
    let loglik =
        -0.5 * (k * (2.0 * std::f64::consts::PI).ln() + logdet + resid.dot(&solved));

    let mean_post = &jm.state_mean + &jm.cross * &solved;
    let cov_post = &jm.state_cov - &jm.cross * chol.solve(&jm.cross.transpose());

    let n = jm.n;
    let means = (0..jm.t_len)
        .map(|t| mean_post.rows(t * n, n).into_owned())
        .collect();
    let covs = (0..jm.t_len)
        .map(|t| cov_post.view((t * n, t * n), (n, n)).into_owned())
        .collect();
    BruteForcePosterior { loglik, means, covs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RngStream;
    use crate::linalg::{kalman_filter, kalman_smoother, MatSeq, VecSeq};
    use rand::Rng;

    pub(crate) fn random_model(
        rng: &mut impl Rng,
        n: usize,
        m: usize,
        p: usize,
    ) -> LinearGaussianSSM {
        let mut a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let rho = crate::linalg::spectral_radius(&a);
        if rho > 0.95 {
            a *= 0.9 / rho;
        }
        let b = DMatrix::from_fn(n, m, |_, _| rng.gen_range(-1.0..1.0));
        let gq = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
        let q = &gq * gq.transpose() + DMatrix::identity(m, m) * 0.1;
        let c = DMatrix::from_fn(p, n, |_, _| rng.gen_range(-1.0..1.0));
        let d = DVector::from_fn(p, |_, _| rng.gen_range(-1.0..1.0));
        let gh = DMatrix::from_fn(p, p, |_, _| rng.gen_range(-0.5..0.5));
        let h = &gh * gh.transpose() + DMatrix::identity(p, p) * 0.2;
        let gp = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let p1 = &gp * gp.transpose() + DMatrix::identity(n, n) * 0.3;
        let a1 = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        LinearGaussianSSM {
            a,
            b,
            q: MatSeq::Constant(q),
            c,
            d: VecSeq::Constant(d),
            h: MatSeq::Constant(h),
            a1,
            p1,
        }
    }

    #[test]
    fn filter_and_smoother_match_brute_force() {
        let mut rng = RngStream::root(2024).rng();
        for trial in 0..25 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=n);
            let p = rng.gen_range(1..=3);
            let t_len = rng.gen_range(2..=6);
            let model = random_model(&mut rng, n, m, p);
            let (_, obs) =
                crate::linalg::kalman::simulate_unconditional(&model, t_len, &mut rng);

            let brute = brute_force_posterior(&model, &obs);
            let filt = kalman_filter(&model, &obs).unwrap();
            assert!(
                (filt.loglik - brute.loglik).abs() < 1e-8,
                "trial {trial}: loglik {} vs {}",
                filt.loglik,
                brute.loglik
            );
            let smooth = kalman_smoother(&model, &obs).unwrap();
            for t in 0..t_len {
                assert!((&smooth.means[t] - &brute.means[t]).amax() < 1e-8);
                assert!((&smooth.covs[t] - &brute.covs[t]).abs().max() < 1e-8);
            }
        }
    }

    #[test]
    fn simulation_smoother_matches_smoother_moments() {
        // moderate draw count here; the acceptance suite runs the full 50k
        let mut rng = RngStream::root(77).rng();
        let model = random_model(&mut rng, 2, 2, 1);
        let t_len = 5;
        let (_, obs) = crate::linalg::kalman::simulate_unconditional(&model, t_len, &mut rng);
        let smooth = kalman_smoother(&model, &obs).unwrap();

        let n_draws = 4000;
        let root = RngStream::root(78);
        let mut sums = vec![DVector::<f64>::zeros(2); t_len];
        let mut sq_sums = vec![DVector::<f64>::zeros(2); t_len];
        for i in 0..n_draws {
            let draw = crate::linalg::simulation_smoother(&model, &obs, root.child(i as u64))
                .unwrap();
            for t in 0..t_len {
                sums[t] += &draw[t];
                sq_sums[t] += draw[t].component_mul(&draw[t]);
            }
        }
        for t in 0..t_len {
            let mean = &sums[t] / n_draws as f64;
            for i in 0..2 {
                let var = sq_sums[t][i] / n_draws as f64 - mean[i] * mean[i];
                let se = (smooth.covs[t][(i, i)] / n_draws as f64).sqrt();
                assert!(
                    (mean[i] - smooth.means[t][i]).abs() < 4.0 * se,
                    "t={t} i={i}: {} vs {}",
                    mean[i],
                    smooth.means[t][i]
                );
                // variance of the sample variance ~ 2 var^2 / n
                let var_se = (2.0 / n_draws as f64).sqrt() * smooth.covs[t][(i, i)];
                assert!((var - smooth.covs[t][(i, i)]).abs() < 4.0 * var_se);
            }
        }
    }
}
