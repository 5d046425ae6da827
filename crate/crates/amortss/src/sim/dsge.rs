use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal, Uniform};

use crate::core::RngStream;
use crate::linalg::{solve_discrete_lyapunov, solve_linear_re, ReOutcome, StructuralRESystem};
use crate::Result;

/// State ordering used everywhere: output, consumption, government share,
/// inflation, interest rate, technology, output growth.
pub const DSGE_STATE_NAMES: [&str; 7] = ["y", "c", "g", "pi", "R", "z", "dy"];
/// Shock (and volatility-state) ordering.
pub const DSGE_SHOCK_NAMES: [&str; 3] = ["g", "z", "R"];
pub const DSGE_OBS_NAMES: [&str; 3] = ["dy_obs", "pi_obs", "R_obs"];

const N_VARS: usize = 7;
const N_SHOCKS: usize = 3;

// state indices
const IY: usize = 0;
const IC: usize = 1;
const IG: usize = 2;
const IPI: usize = 3;
const IR: usize = 4;
const IZ: usize = 5;
const IDY: usize = 6;

/// The 15 structural parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralParams {
    pub tau: f64,
    pub nu_l: f64,
    pub iota: f64,
    pub zeta: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub beta: f64,
    pub pi_star: f64,
    pub gamma: f64,
    pub rho_r: f64,
    pub rho_g: f64,
    pub phi_z: f64,
    pub sigma_r: f64,
    pub sigma_g: f64,
    pub sigma_z: f64,
}

impl StructuralParams {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.tau,
            self.nu_l,
            self.iota,
            self.zeta,
            self.psi1,
            self.psi2,
            self.beta,
            self.pi_star,
            self.gamma,
            self.rho_r,
            self.rho_g,
            self.phi_z,
            self.sigma_r,
            self.sigma_g,
            self.sigma_z,
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), 15);
        StructuralParams {
            tau: v[0],
            nu_l: v[1],
            iota: v[2],
            zeta: v[3],
            psi1: v[4],
            psi2: v[5],
            beta: v[6],
            pi_star: v[7],
            gamma: v[8],
            rho_r: v[9],
            rho_g: v[10],
            phi_z: v[11],
            sigma_r: v[12],
            sigma_g: v[13],
            sigma_z: v[14],
        }
    }
}

/// Volatility-process parameters for the three shocks, ordered (g, z, R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvProcessParams {
    pub sigma: [f64; 3],
    pub rho: [f64; 3],
}

impl SvProcessParams {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.sigma[0],
            self.sigma[1],
            self.sigma[2],
            self.rho[0],
            self.rho[1],
            self.rho[2],
        ]
    }

    pub fn from_slice(v: &[f64]) -> Self {
        assert_eq!(v.len(), 6);
        SvProcessParams {
            sigma: [v[0], v[1], v[2]],
            rho: [v[3], v[4], v[5]],
        }
    }
}

/// Full parameter vector: structural block plus volatility block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsgeParams {
    pub structural: StructuralParams,
    pub sv: SvProcessParams,
}

fn normal_ms(mean: f64, std: f64, rng: &mut impl Rng) -> f64 {
    mean + std * rng.sample::<f64, _>(StandardNormal)
}

fn beta_mean_std(mean: f64, std: f64, rng: &mut impl Rng) -> f64 {
    let v = std * std;
    let s = mean * (1.0 - mean) / v - 1.0;
    Beta::new(mean * s, (1.0 - mean) * s)
        .expect("valid beta parameters")
        .sample(rng)
}

fn gamma_mean_std(mean: f64, std: f64, rng: &mut impl Rng) -> f64 {
    let v = std * std;
    Gamma::new(mean * mean / v, v / mean)
        .expect("valid gamma parameters")
        .sample(rng)
}

/// Inverse gamma in the parameterization `p(x) ~ x^{-b-1} exp(-b a^2 / (2x))`,
/// i.e. shape `b` and scale `b a^2 / 2`.
fn inv_gamma_ab(a: f64, b: f64, rng: &mut impl Rng) -> f64 {
    let scale = b * a * a / 2.0;
    let g = Gamma::new(b, 1.0).expect("valid shape").sample(rng);
    scale / g
}

/// Draw the structural block from its prior.
pub fn dsge_draw_structural(rng: &mut impl Rng) -> StructuralParams {
    StructuralParams {
        tau: normal_ms(1.5, 0.36, rng),
        nu_l: gamma_mean_std(2.0, 0.75, rng),
        iota: beta_mean_std(0.5, 0.15, rng),
        zeta: beta_mean_std(0.5, 0.1, rng),
        psi1: normal_ms(1.5, 0.25, rng),
        psi2: normal_ms(0.12, 0.05, rng),
        beta: (-gamma_mean_std(1.0, 0.4, rng) / 400.0).exp(),
        pi_star: (gamma_mean_std(2.48, 0.4, rng) / 400.0).exp(),
        gamma: (normal_ms(0.4, 0.1, rng) / 100.0).exp(),
        rho_r: beta_mean_std(0.5, 0.2, rng),
        rho_g: beta_mean_std(0.5, 0.2, rng),
        phi_z: Uniform::new(-1.0, 1.0).sample(rng),
        sigma_r: inv_gamma_ab(0.1, 2.0, rng).sqrt() / 100.0,
        sigma_g: inv_gamma_ab(0.1, 2.0, rng).sqrt() / 10.0,
        sigma_z: inv_gamma_ab(0.1, 2.0, rng).sqrt() / 10.0,
    }
}

/// Draw the volatility block from its prior. The persistence draws are
/// resampled until they fall inside (-1, 1) so the stationary initial
/// condition exists.
pub fn dsge_draw_sv_process(rng: &mut impl Rng) -> SvProcessParams {
    let mut sigma = [0.0; 3];
    let mut rho = [0.0; 3];
    for i in 0..3 {
        sigma[i] = inv_gamma_ab(0.05, 2.0, rng).sqrt() / 0.2;
        rho[i] = loop {
            let r = normal_ms(0.9, 0.07, rng);
            if r.abs() < 1.0 {
                break r;
            }
        };
    }
    SvProcessParams { sigma, rho }
}

pub fn dsge_draw_prior(rng: &mut impl Rng) -> DsgeParams {
    DsgeParams {
        structural: dsge_draw_structural(rng),
        sv: dsge_draw_sv_process(rng),
    }
}

/// Log prior density of the structural block, up to an additive constant.
/// Returns `-inf` outside the support.
pub fn log_prior_structural(p: &StructuralParams) -> f64 {
    let normal = |x: f64, m: f64, s: f64| -0.5 * ((x - m) / s).powi(2);
    let gamma_ms = |x: f64, mean: f64, std: f64| -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let v = std * std;
        let shape = mean * mean / v;
        let scale = v / mean;
        (shape - 1.0) * x.ln() - x / scale
    };
    let beta_ms = |x: f64, mean: f64, std: f64| -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return f64::NEG_INFINITY;
        }
        let v = std * std;
        let s = mean * (1.0 - mean) / v - 1.0;
        (mean * s - 1.0) * x.ln() + ((1.0 - mean) * s - 1.0) * (1.0 - x).ln()
    };
    // x = (scale*sigma)^2 ~ IG(a, b); in sigma the density gains the
    // Jacobian |dx/dsigma| = 2 scale^2 sigma
    let inv_gamma_scaled = |sigma: f64, scale: f64, a: f64, b: f64| -> f64 {
        if sigma <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let x = (scale * sigma).powi(2);
        (-b - 1.0) * x.ln() - b * a * a / (2.0 * x) + (2.0 * scale * scale * sigma).ln()
    };

    if p.beta <= 0.0 || p.beta >= 1.0 || p.pi_star <= 1.0 || p.gamma <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p.phi_z <= -1.0 || p.phi_z >= 1.0 {
        return f64::NEG_INFINITY;
    }
    // transformed coordinates carry their Jacobians:
    //   -400 log(beta) ~ Gamma  (|d/d beta|  = 400/beta)
    //    400 log(pi*)  ~ Gamma  (|d/d pi*|   = 400/pi*)
    //    100 log(gamma) ~ Normal (|d/d gamma| = 100/gamma)
    let b_t = -400.0 * p.beta.ln();
    let pi_t = 400.0 * p.pi_star.ln();
    let g_t = 100.0 * p.gamma.ln();

    normal(p.tau, 1.5, 0.36)
        + gamma_ms(p.nu_l, 2.0, 0.75)
        + beta_ms(p.iota, 0.5, 0.15)
        + beta_ms(p.zeta, 0.5, 0.1)
        + normal(p.psi1, 1.5, 0.25)
        + normal(p.psi2, 0.12, 0.05)
        + gamma_ms(b_t, 1.0, 0.4)
        - p.beta.ln()
        + gamma_ms(pi_t, 2.48, 0.4)
        - p.pi_star.ln()
        + normal(g_t, 0.4, 0.1)
        - p.gamma.ln()
        + beta_ms(p.rho_r, 0.5, 0.2)
        + beta_ms(p.rho_g, 0.5, 0.2)
        + inv_gamma_scaled(p.sigma_r, 100.0, 0.1, 2.0)
        + inv_gamma_scaled(p.sigma_g, 10.0, 0.1, 2.0)
        + inv_gamma_scaled(p.sigma_z, 10.0, 0.1, 2.0)
}

/// Log prior density of the volatility block, up to an additive constant.
/// The persistence prior is the normal density restricted to (-1, 1).
pub fn log_prior_sv_process(p: &SvProcessParams) -> f64 {
    let mut lp = 0.0;
    for i in 0..3 {
        let sigma = p.sigma[i];
        if sigma <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let x = (0.2 * sigma).powi(2);
        lp += -3.0 * x.ln() - 2.0 * 0.05 * 0.05 / (2.0 * x) + (2.0 * 0.04 * sigma).ln();
        let rho = p.rho[i];
        if rho.abs() >= 1.0 {
            return f64::NEG_INFINITY;
        }
        lp += -0.5 * ((rho - 0.9) / 0.07).powi(2);
    }
    lp
}

/// Assemble the structural coefficient matrices of the seven-equation system.
pub fn build_structural_system(p: &StructuralParams) -> StructuralRESystem {
    let mut lead = DMatrix::<f64>::zeros(N_VARS, N_VARS);
    let mut contemp = DMatrix::<f64>::zeros(N_VARS, N_VARS);
    let mut lag = DMatrix::<f64>::zeros(N_VARS, N_VARS);
    let mut shock = DMatrix::<f64>::zeros(N_VARS, N_SHOCKS);

    // consumption Euler equation
    lead[(0, IC)] = 1.0;
    lead[(0, IZ)] = 1.0;
    lead[(0, IPI)] = 1.0 / p.tau;
    contemp[(0, IC)] = -1.0;
    contemp[(0, IR)] = -1.0 / p.tau;

    // Phillips curve
    let denom = 1.0 + p.beta * p.iota;
    let slope = (1.0 - p.zeta * p.beta) * (1.0 - p.zeta) / (denom * p.zeta);
    lead[(1, IPI)] = p.beta / denom;
    contemp[(1, IPI)] = -1.0;
    contemp[(1, IC)] = slope;
    contemp[(1, IY)] = slope * p.nu_l;
    lag[(1, IPI)] = p.iota / denom;

    // resource constraint
    contemp[(2, IY)] = 1.0;
    contemp[(2, IC)] = -1.0;
    contemp[(2, IG)] = -1.0;

    // policy rule
    contemp[(3, IR)] = 1.0;
    contemp[(3, IPI)] = -(1.0 - p.rho_r) * p.psi1;
    contemp[(3, IY)] = -(1.0 - p.rho_r) * p.psi2;
    contemp[(3, IZ)] = -(1.0 - p.rho_r) * p.psi2;
    lag[(3, IR)] = -p.rho_r;
    lag[(3, IY)] = (1.0 - p.rho_r) * p.psi2;
    shock[(3, 2)] = -p.sigma_r;

    // technology process z_t = -phi_z z_{t-1} + sigma_z e^z
    contemp[(4, IZ)] = 1.0;
    lag[(4, IZ)] = p.phi_z;
    shock[(4, 1)] = -p.sigma_z;

    // government share process
    contemp[(5, IG)] = 1.0;
    lag[(5, IG)] = -p.rho_g;
    shock[(5, 0)] = -p.sigma_g;

    // output growth identity
    contemp[(6, IDY)] = 1.0;
    contemp[(6, IY)] = -1.0;
    contemp[(6, IZ)] = -1.0;
    lag[(6, IY)] = 1.0;

    StructuralRESystem {
        lead,
        contemp,
        lag,
        shock,
    }
}

/// One accepted presimulation entry: parameters, equilibrium matrices and a
/// cached square root of the stationary state covariance.
#[derive(Debug, Clone)]
pub struct CacheEntry {
    pub params: StructuralParams,
    pub transition: DMatrix<f64>,
    pub impact: DMatrix<f64>,
    p_sqrt: DMatrix<f64>,
}

impl CacheEntry {
    pub fn stationary_cov_sqrt(&self) -> &DMatrix<f64> {
        &self.p_sqrt
    }
}

/// Solve one structural draw. `Ok(None)` marks a draw rejected by the
/// stability filter.
pub fn solve_structural(params: &StructuralParams) -> Result<Option<CacheEntry>> {
    let sys = build_structural_system(params);
    match solve_linear_re(&sys)? {
        ReOutcome::Stable(sol) => {
            let bbt = &sol.impact * sol.impact.transpose();
            let p = solve_discrete_lyapunov(&sol.transition, &bbt)?;
            Ok(Some(CacheEntry {
                params: *params,
                p_sqrt: crate::linalg::psd_sqrt(&p),
                transition: sol.transition,
                impact: sol.impact,
            }))
        }
        _ => Ok(None),
    }
}

/// Accepted `(theta, A, B)` triples plus acceptance statistics.
#[derive(Debug, Clone)]
pub struct DsgeSolutionCache {
    pub entries: Vec<CacheEntry>,
    pub n_drawn: u64,
    pub n_indeterminate: u64,
    pub n_no_stable: u64,
}

impl DsgeSolutionCache {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.entries.len() as f64 / self.n_drawn as f64
    }
}

/// Fill a cache with exactly `n_presim` accepted draws, discarding
/// indeterminate and unstable ones.
pub fn dsge_presimulate(n_presim: usize, stream: RngStream) -> Result<DsgeSolutionCache> {
    assert!(n_presim >= 1);
    let mut rng = stream.rng();
    let mut cache = DsgeSolutionCache {
        entries: Vec::with_capacity(n_presim),
        n_drawn: 0,
        n_indeterminate: 0,
        n_no_stable: 0,
    };
    while cache.entries.len() < n_presim {
        cache.n_drawn += 1;
        let params = dsge_draw_structural(&mut rng);
        let sys = build_structural_system(&params);
        match solve_linear_re(&sys)? {
            ReOutcome::Stable(sol) => {
                let bbt = &sol.impact * sol.impact.transpose();
                let p = solve_discrete_lyapunov(&sol.transition, &bbt)?;
                cache.entries.push(CacheEntry {
                    params,
                    p_sqrt: crate::linalg::psd_sqrt(&p),
                    transition: sol.transition,
                    impact: sol.impact,
                });
            }
            ReOutcome::Indeterminate => cache.n_indeterminate += 1,
            ReOutcome::NoStableSolution => cache.n_no_stable += 1,
        }
    }
    Ok(cache)
}

/// Measurement map: `obs = d(theta) + 100 [dy, pi, R]`.
pub fn dsge_observe(state: &DVector<f64>, p: &StructuralParams) -> [f64; 3] {
    [
        100.0 * p.gamma.ln() + 100.0 * state[IDY],
        100.0 * p.pi_star.ln() + 100.0 * state[IPI],
        100.0 * (p.gamma.ln() + p.pi_star.ln() - p.beta.ln()) + 100.0 * state[IR],
    ]
}

/// One simulated DSGE dataset.
#[derive(Debug, Clone)]
pub struct DsgeSimOutput {
    /// volatility states, `[T x 3]` in shock order (g, z, R)
    pub sv: Array2<f64>,
    /// `log(c + |e|)` of the structural shocks, `[T x 3]`
    pub e_tilde: Array2<f64>,
    /// state path of 7-vectors (the presample s_0 is not included)
    pub states: Vec<DVector<f64>>,
    /// observables, `[T x 3]`
    pub obs: Array2<f64>,
    /// raw structural shocks, `[T x 3]`
    pub shocks: Array2<f64>,
}

/// Simulate a dataset conditional on a cached solution and a volatility
/// parameter draw.
///
/// The presample state is drawn as `s_0 ~ N(0, P(theta))` and the recursion
/// starts at t = 1, so the period-1 shock is well defined and the hint
/// targets cover every observed period.
pub fn dsge_simulate(
    entry: &CacheEntry,
    sv_params: &SvProcessParams,
    t_len: usize,
    log_offset: f64,
    rng: &mut impl Rng,
) -> DsgeSimOutput {
    assert!(t_len >= 1);
    let mut sv = Array2::<f64>::zeros((t_len, 3));
    for i in 0..3 {
        let rho = sv_params.rho[i];
        let sigma = sv_params.sigma[i];
        let stationary = sigma / (1.0 - rho * rho).sqrt();
        sv[(0, i)] = stationary * rng.sample::<f64, _>(StandardNormal);
        for t in 1..t_len {
            sv[(t, i)] = rho * sv[(t - 1, i)] + sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }

    let n = entry.transition.nrows();
    let noise = DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)));
    let mut state = &entry.p_sqrt * noise; // s_0

    let mut e_tilde = Array2::<f64>::zeros((t_len, 3));
    let mut shocks = Array2::<f64>::zeros((t_len, 3));
    let mut obs = Array2::<f64>::zeros((t_len, 3));
    let mut states = Vec::with_capacity(t_len);
    for t in 0..t_len {
        let mut e = DVector::<f64>::zeros(3);
        for i in 0..3 {
            // variance e^{SV}, so the shock standard deviation is e^{SV/2}
            e[i] = (sv[(t, i)] / 2.0).exp() * rng.sample::<f64, _>(StandardNormal);
            shocks[(t, i)] = e[i];
            e_tilde[(t, i)] = (log_offset + e[i].abs()).ln();
        }
        state = &entry.transition * &state + &entry.impact * &e;
        let o = dsge_observe(&state, &entry.params);
        for i in 0..3 {
            obs[(t, i)] = o[i];
        }
        states.push(state.clone());
    }

    DsgeSimOutput {
        sv,
        e_tilde,
        states,
        obs,
        shocks,
    }
}
