use nalgebra::{DMatrix, DVector};

use crate::Result;

use super::{qz_ordered_stable_first, spectral_radius};

/// Structural linear rational-expectations system
///
/// ```text
/// lead * E_t[s_{t+1}] + contemp * s_t + lag * s_{t-1} + shock * e_t = 0
/// ```
///
/// with `n` equations for `n` endogenous variables and `m` shocks.
#[derive(Debug, Clone)]
pub struct StructuralRESystem {
    pub lead: DMatrix<f64>,
    pub contemp: DMatrix<f64>,
    pub lag: DMatrix<f64>,
    pub shock: DMatrix<f64>,
}

impl StructuralRESystem {
    pub fn n_vars(&self) -> usize {
        self.contemp.nrows()
    }

    pub fn n_shocks(&self) -> usize {
        self.shock.ncols()
    }

    pub fn dims_consistent(&self) -> bool {
        let n = self.n_vars();
        self.lead.nrows() == n
            && self.lead.ncols() == n
            && self.contemp.ncols() == n
            && self.lag.nrows() == n
            && self.lag.ncols() == n
            && self.shock.nrows() == n
    }
}

/// Equilibrium law of motion `s_t = transition s_{t-1} + impact e_t`.
#[derive(Debug, Clone)]
pub struct DsgeSolution {
    pub transition: DMatrix<f64>,
    pub impact: DMatrix<f64>,
}

/// Outcome of the stability filter. `Indeterminate` and `NoStableSolution`
/// are ordinary values, not errors: prior draws producing them are simply
/// rejected by the presimulation loop.
#[derive(Debug, Clone)]
pub enum ReOutcome {
    Stable(DsgeSolution),
    Indeterminate,
    NoStableSolution,
}

impl ReOutcome {
    pub fn is_stable(&self) -> bool {
        matches!(self, ReOutcome::Stable(_))
    }
}

const BOUNDARY_TOL: f64 = 1e-8;

/// Solve for the unique stable equilibrium via the generalized Schur (QZ)
/// decomposition of the doubled pencil on `x_t = [s_t; s_{t-1}]`.
///
/// Guessing `s_t = P s_{t-1} + Q e_t` reduces the system to the quadratic
/// matrix equation `(lead P + contemp) P + lag = 0`; the stable solvent is
/// read off the invariant subspace spanned by the Schur vectors of the
/// eigenvalues inside the unit circle. Eigenvalues within `1e-8` of the unit
/// circle are treated as failures of the stability filter.
pub fn solve_linear_re(sys: &StructuralRESystem) -> Result<ReOutcome> {
    assert!(sys.dims_consistent(), "structural system dimensions");
    let n = sys.n_vars();

    // pencil (B_p - lambda A_p) with
    //   A_p = [lead 0; 0 I], B_p = [-contemp -lag; I 0]
    let mut a_p = DMatrix::<f64>::zeros(2 * n, 2 * n);
    a_p.view_mut((0, 0), (n, n)).copy_from(&sys.lead);
    a_p.view_mut((n, n), (n, n))
        .copy_from(&DMatrix::identity(n, n));
    let mut b_p = DMatrix::<f64>::zeros(2 * n, 2 * n);
    b_p.view_mut((0, 0), (n, n)).copy_from(&(-&sys.contemp));
    b_p.view_mut((0, n), (n, n)).copy_from(&(-&sys.lag));
    b_p.view_mut((n, 0), (n, n))
        .copy_from(&DMatrix::identity(n, n));

    let qz = qz_ordered_stable_first(&b_p, &a_p)?;

    for i in 0..2 * n {
        if let Some(modulus) = qz.eigenvalue_modulus(i) {
            if (modulus - 1.0).abs() <= BOUNDARY_TOL {
                // unit-root boundary: the stationary covariance does not exist
                return Ok(ReOutcome::NoStableSolution);
            }
        }
    }

    match qz.n_stable.cmp(&n) {
        std::cmp::Ordering::Less => return Ok(ReOutcome::NoStableSolution),
        std::cmp::Ordering::Greater => return Ok(ReOutcome::Indeterminate),
        std::cmp::Ordering::Equal => {}
    }

    // stable right Schur vectors, rows split into the s_t and s_{t-1} blocks
    let z_top = qz.z.view((0, 0), (n, n)).into_owned();
    let z_bot = qz.z.view((n, 0), (n, n)).into_owned();
    let svd = z_bot.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax.max(1.0) {
        // rank condition fails: no stable solution expressible in s_{t-1}
        return Ok(ReOutcome::NoStableSolution);
    }
    // P = Z_top * Z_bot^{-1}: solve Z_bot' X' = Z_top'
    let Some(transition) = z_bot
        .transpose()
        .lu()
        .solve(&z_top.transpose())
        .map(|xt| xt.transpose())
    else {
        return Ok(ReOutcome::NoStableSolution);
    };

    let rho = spectral_radius(&transition);
    if rho >= 1.0 - 1e-9 {
        return Ok(ReOutcome::NoStableSolution);
    }

    // impact: (lead P + contemp) Q = -shock
    let lhs = &sys.lead * &transition + &sys.contemp;
    let Some(impact) = lhs.lu().solve(&(-&sys.shock)) else {
        return Ok(ReOutcome::NoStableSolution);
    };

    Ok(ReOutcome::Stable(DsgeSolution { transition, impact }))
}

/// Maximum absolute structural-equation residual along a simulated path,
/// with expectations replaced by the solution-implied forecasts
/// `E_t[s_{t+1}] = P s_t`.
pub fn structural_residual(
    sys: &StructuralRESystem,
    sol: &DsgeSolution,
    path: &[DVector<f64>],
    shocks: &[DVector<f64>],
) -> f64 {
    let mut worst = 0.0f64;
    for t in 1..path.len() {
        let resid = &sys.lead * (&sol.transition * &path[t])
            + &sys.contemp * &path[t]
            + &sys.lag * &path[t - 1]
            + &sys.shock * &shocks[t];
        worst = worst.max(resid.amax());
    }
    worst
}
