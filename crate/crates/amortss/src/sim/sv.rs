use rand::Rng;
use rand_distr::StandardNormal;

use crate::core::{sigmoid, softplus};

/// Prior standard deviation of the raw parameters alpha, kappa, psi.
pub const SV_PRIOR_STD: f64 = 3.1622776601683795; // sqrt(10)

/// Stochastic volatility parameters in their unconstrained form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvParams {
    pub alpha: f64,
    pub kappa: f64,
    pub psi: f64,
}

impl SvParams {
    /// Volatility-of-volatility scale, `sigma = log(1 + e^alpha) > 0`.
    pub fn sigma(&self) -> f64 {
        softplus(self.alpha)
    }

    /// Persistence, `rho = 1/(1 + e^-psi)` in (0, 1).
    pub fn rho(&self) -> f64 {
        sigmoid(self.psi)
    }
}

/// Draw alpha, kappa, psi i.i.d. `N(0, sqrt(10))`.
pub fn sv_draw_prior(rng: &mut impl Rng) -> SvParams {
    let mut draw = || SV_PRIOR_STD * rng.sample::<f64, _>(StandardNormal);
    SvParams {
        alpha: draw(),
        kappa: draw(),
        psi: draw(),
    }
}

/// Simulate a volatility path and observations.
///
/// ```text
/// SV_1 ~ N(kappa/2, (sigma/2) / sqrt(1 - rho^2))
/// SV_t ~ N(kappa/2 (1 - rho) + rho SV_{t-1}, sigma/2)
/// y_t  = e^{SV_t} z_t,  z_t ~ N(0, 1)
/// ```
///
/// `e^{SV_t}` is the observation standard deviation, consistent with the
/// mixture sampler's `log y^2 = 2 SV + log chi^2` representation.
pub fn sv_simulate(params: &SvParams, t_len: usize, rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    assert!(t_len >= 1);
    let sigma = params.sigma();
    let rho = params.rho();
    let half_kappa = params.kappa / 2.0;
    let half_sigma = sigma / 2.0;

    let mut sv = Vec::with_capacity(t_len);
    let stationary_std = half_sigma / (1.0 - rho * rho).sqrt();
    sv.push(half_kappa + stationary_std * rng.sample::<f64, _>(StandardNormal));
    for t in 1..t_len {
        let mean = half_kappa * (1.0 - rho) + rho * sv[t - 1];
        sv.push(mean + half_sigma * rng.sample::<f64, _>(StandardNormal));
    }
    let y = sv
        .iter()
        .map(|&v| v.exp() * rng.sample::<f64, _>(StandardNormal))
        .collect();
    (sv, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RngStream;

    #[test]
    fn prior_std_is_sqrt_ten() {
        let mut rng = RngStream::root(1).rng();
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let p = sv_draw_prior(&mut rng);
            sum += p.alpha;
            sum_sq += p.alpha * p.alpha;
            assert!(p.sigma() > 0.0);
        }
        let mean = sum / n as f64;
        let std = (sum_sq / n as f64 - mean * mean).sqrt();
        assert!((std - SV_PRIOR_STD).abs() / SV_PRIOR_STD < 0.01);
    }

    #[test]
    fn psi_zero_means_half_persistence() {
        let p = SvParams {
            alpha: 0.0,
            kappa: 0.0,
            psi: 0.0,
        };
        assert_eq!(p.rho(), 0.5);
    }

    #[test]
    fn initial_condition_collapses_when_rho_vanishes() {
        // psi = -30: rho ~ 0, SV_1 std -> sigma/2
        let p = SvParams {
            alpha: 1.0,
            kappa: 0.0,
            psi: -30.0,
        };
        let mut rng = RngStream::root(2).rng();
        let n = 200_000;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let (sv, _) = sv_simulate(&p, 1, &mut rng);
            sum_sq += sv[0] * sv[0];
        }
        let std = (sum_sq / n as f64).sqrt();
        let expect = p.sigma() / 2.0;
        // se of a sample std is roughly std / sqrt(2n)
        let se = expect / (2.0 * n as f64).sqrt();
        assert!((std - expect).abs() < 4.0 * se, "{std} vs {expect}");
    }

    #[test]
    fn stationary_moments_match_ar1_formulas() {
        let p = SvParams {
            alpha: 0.5,
            kappa: 0.0,
            psi: 0.0, // rho = 0.5
        };
        let rho = p.rho();
        let expect_mean = p.kappa / 2.0;
        let expect_var = (p.sigma() / 2.0).powi(2) / (1.0 - rho * rho);

        let mut rng = RngStream::root(3).rng();
        let n = 100_000;
        let t_probe = 40;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let (sv, _) = sv_simulate(&p, t_probe, &mut rng);
            let v = sv[t_probe - 1];
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let mean_se = (expect_var / n as f64).sqrt();
        let var_se = expect_var * (2.0 / n as f64).sqrt();
        assert!((mean - expect_mean).abs() < 3.0 * mean_se);
        assert!((var - expect_var).abs() < 3.0 * var_se);
    }

    #[test]
    fn simulation_is_reproducible() {
        let p = SvParams {
            alpha: -0.3,
            kappa: 1.0,
            psi: 2.0,
        };
        let (sv_a, y_a) = sv_simulate(&p, 64, &mut RngStream::new(9, 4).rng());
        let (sv_b, y_b) = sv_simulate(&p, 64, &mut RngStream::new(9, 4).rng());
        assert_eq!(sv_a, sv_b);
        assert_eq!(y_a, y_b);
    }
}
