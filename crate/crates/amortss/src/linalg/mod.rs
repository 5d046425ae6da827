//! Exact linear-Gaussian machinery: Kalman filter/smoother, simulation
//! smoother, discrete Lyapunov solver and the linear rational-expectations
//! solver used by the DSGE simulator and the MCMC baselines.

mod kalman;
mod lyapunov;
pub mod oracle;
mod qz;
mod re_solver;

pub use kalman::{
    kalman_filter, kalman_smoother, simulate_unconditional, simulation_smoother,
    simulation_smoother_with, FilterOutput, LinearGaussianSSM, MatSeq, SmootherOutput, VecSeq,
};
pub use lyapunov::solve_discrete_lyapunov;
pub use qz::{qz_ordered_stable_first, QzDecomposition};
pub use re_solver::{solve_linear_re, structural_residual, DsgeSolution, ReOutcome, StructuralRESystem};

use nalgebra::DMatrix;

/// Spectral radius via the real Schur form.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let mt = m.transpose();
    *m += mt;
    *m *= 0.5;
}

/// Symmetric PSD square root, clamping tiny negative eigenvalues to zero.
pub(crate) fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut sym = m.clone();
    symmetrize(&mut sym);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > 0.0 {
            let s = l.sqrt();
            let v = eig.eigenvectors.column(i);
            out += s * &v * v.transpose();
        }
    }
    out
}
