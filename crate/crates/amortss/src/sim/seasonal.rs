use rand::Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal, StudentT, Uniform};

use crate::core::RngStream;

/// How a seasonal re-initialization is triggered.
///
/// The printed recursion multiplies four consecutive shift indicators, which
/// at p = 0.01 fires with probability 1e-8 and would never produce the
/// visible breaks the generated corpus is supposed to contain. The default
/// therefore triggers on a single indicator; the product form stays
/// available behind this switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BreakTrigger {
    #[default]
    SingleIndicator,
    ProductOfFour,
}

#[derive(Debug, Clone, Copy)]
pub struct SeasonalConfig {
    pub t_lb: usize,
    pub t_ub: usize,
    /// presample periods generated and discarded
    pub burn_in: usize,
    /// per-period probability of a seasonal shift
    pub shift_prob: f64,
    /// per-period probability of a level shift in the non-seasonal part
    pub level_shift_prob: f64,
    pub break_trigger: BreakTrigger,
    /// test hook: force the seasonal amplitude to zero
    pub zero_seasonal_scale: bool,
}

impl Default for SeasonalConfig {
    fn default() -> Self {
        Self {
            t_lb: 40,
            t_ub: 80,
            burn_in: 200,
            shift_prob: 0.01,
            level_shift_prob: 0.01,
            break_trigger: BreakTrigger::SingleIndicator,
            zero_seasonal_scale: false,
        }
    }
}

/// One generated series: standardized observation, standardized
/// non-seasonal target and per-period break indicators for the retained
/// window.
#[derive(Debug, Clone)]
pub struct SeasonalSample {
    pub y: Vec<f64>,
    pub sa: Vec<f64>,
    pub break_flags: Vec<bool>,
}

impl SeasonalSample {
    pub fn has_break(&self) -> bool {
        self.break_flags.iter().any(|&b| b)
    }

    fn reversed(&self) -> SeasonalSample {
        SeasonalSample {
            y: self.y.iter().rev().cloned().collect(),
            sa: self.sa.iter().rev().cloned().collect(),
            break_flags: self.break_flags.iter().rev().cloned().collect(),
        }
    }
}

fn population_std(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

fn generate_one(cfg: &SeasonalConfig, t_len: usize, rng: &mut impl Rng) -> SeasonalSample {
    let burn = cfg.burn_in;
    let total = burn + t_len; // indices 0..total map to periods -burn+1..t_len
    let warm = 3; // recursions start after three presample values

    // non-seasonal component
    let mut e = vec![0.0f64; total];
    for et in e.iter_mut() {
        let eta: f64 = 3.0 * rng.sample::<f64, _>(StandardNormal);
        let df = 3.0 + eta.abs();
        *et = StudentT::new(df).expect("df > 0").sample(rng);
    }
    let level_bern = Bernoulli::new(cfg.level_shift_prob).expect("probability");
    let mut e_shift = vec![0.0f64; total];
    for es in e_shift.iter_mut().skip(warm) {
        let fired = level_bern.sample(rng);
        let draw: f64 = 20.0 * rng.sample::<f64, _>(StandardNormal);
        *es = if fired { draw } else { 0.0 };
    }
    let arma_coef = |rng: &mut dyn rand::RngCore| -> f64 {
        let on = rng.gen_bool(0.5);
        let u = Uniform::new(-0.5, 0.98).sample(rng);
        if on {
            u
        } else {
            0.0
        }
    };
    let ar: Vec<f64> = (0..3).map(|_| arma_coef(rng)).collect();
    let ma: Vec<f64> = (0..3).map(|_| arma_coef(rng)).collect();
    let (a1, a2, a3) = (
        ar[0] + ar[1] + ar[2],
        ar[0] * ar[1] + ar[1] * ar[2] + ar[0] * ar[2],
        ar[0] * ar[1] * ar[2],
    );
    let (m1, m2, m3) = (
        ma[0] + ma[1] + ma[2],
        ma[0] * ma[1] + ma[1] * ma[2] + ma[0] * ma[2],
        ma[0] * ma[1] * ma[2],
    );
    let mut x = vec![0.0f64; total];
    for t in warm..total {
        let eps = e[t] + m1 * e[t - 1] + m2 * e[t - 2] + m3 * e[t - 3] + e_shift[t];
        x[t] = a1 * x[t - 1] - a2 * x[t - 2] + a3 * x[t - 3] + eps;
    }
    let c: f64 = 0.005 * rng.sample::<f64, _>(StandardNormal);
    let x_std = population_std(&x).max(1e-12);
    let scale: f64 = (0.007 / x_std) * rng.sample::<f64, _>(StandardNormal);
    let ns_star: Vec<f64> = x.iter().map(|&v| c + scale * v).collect();
    let integrated = rng.gen_bool(0.5);
    let ns: Vec<f64> = if integrated {
        ns_star
            .iter()
            .scan(0.0, |acc, &v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    } else {
        ns_star.clone()
    };

    // seasonal component: quarterly sums revert to noise, with occasional
    // re-initialization breaks
    let sigma_s: f64 = (0.2 / 40.0f64.sqrt()) * rng.sample::<f64, _>(StandardNormal);
    let shift_bern = Bernoulli::new(cfg.shift_prob).expect("probability");
    let shift_flags: Vec<bool> = (0..total).map(|_| shift_bern.sample(rng)).collect();
    let z: Vec<bool> = (0..total)
        .map(|t| match cfg.break_trigger {
            BreakTrigger::SingleIndicator => shift_flags[t],
            BreakTrigger::ProductOfFour => {
                t >= warm
                    && shift_flags[t]
                    && shift_flags[t - 1]
                    && shift_flags[t - 2]
                    && shift_flags[t - 3]
            }
        })
        .collect();
    let mut s = vec![0.0f64; total];
    for st in s.iter_mut().take(warm) {
        *st = rng.sample::<f64, _>(StandardNormal);
    }
    for t in warm..total {
        let es: f64 = rng.sample::<f64, _>(StandardNormal);
        s[t] = if z[t] {
            es
        } else {
            -(s[t - 1] + s[t - 2] + s[t - 3] + sigma_s * es)
        };
    }
    let ns_star_std = population_std(&ns_star);
    let scale_s: f64 = if cfg.zero_seasonal_scale {
        0.0
    } else {
        3.0 * ns_star_std * rng.sample::<f64, _>(StandardNormal)
    };

    // assemble, standardize over the retained window
    let y_star: Vec<f64> = (burn..total).map(|t| scale_s * s[t] + ns[t]).collect();
    let n = t_len as f64;
    let mean = y_star.iter().sum::<f64>() / n;
    let std = population_std(&y_star).max(1e-300);
    let y = y_star.iter().map(|v| (v - mean) / std).collect();
    let sa = (burn..total).map(|t| (ns[t] - mean) / std).collect();
    let break_flags = (burn..total).map(|t| z[t]).collect();
    SeasonalSample { y, sa, break_flags }
}

/// Generate `2B` samples of one common length `T ~ U(t_lb, t_ub)`: `B`
/// independent draws followed by their exact time reversals.
pub fn seasonal_generate_batch(
    batch: usize,
    cfg: &SeasonalConfig,
    stream: RngStream,
) -> (usize, Vec<SeasonalSample>) {
    assert!(batch >= 1);
    let mut rng = stream.rng();
    let t_len = rng.gen_range(cfg.t_lb..=cfg.t_ub);
    let mut out = Vec::with_capacity(2 * batch);
    for b in 0..batch {
        let mut member_rng = stream.child(1 + b as u64).rng();
        out.push(generate_one(cfg, t_len, &mut member_rng));
    }
    for b in 0..batch {
        out.push(out[b].reversed());
    }
    (t_len, out)
}
