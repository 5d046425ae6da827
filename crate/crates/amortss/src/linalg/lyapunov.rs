use nalgebra::DMatrix;

use crate::{Error, Result};

use super::{spectral_radius, symmetrize};

/// Solve the discrete Lyapunov equation `P = A P A' + BB'` for a stable `A`
/// by the direct Kronecker method: `(I - A (x) A) vec(P) = vec(BB')`.
///
/// Sizes here are small (state dimensions of the bundled models), so the
/// n^2-dimensional solve is exact and cheap.
pub fn solve_discrete_lyapunov(a: &DMatrix<f64>, bbt: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n || bbt.nrows() != n || bbt.ncols() != n {
        return Err(Error::DimensionMismatch("lyapunov operands".into()));
    }
    let rho = spectral_radius(a);
    if rho >= 1.0 - 1e-9 {
        return Err(Error::Unstable { rho });
    }
    let kron = a.kronecker(a);
    let sys = DMatrix::<f64>::identity(n * n, n * n) - kron;
    let rhs = nalgebra::DVector::from_iterator(n * n, bbt.iter().cloned());
    let sol = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("lyapunov system is singular".into()))?;
    let mut p = DMatrix::from_iterator(n, n, sol.iter().cloned());
    symmetrize(&mut p);
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn scalar_geometric_series() {
        let p = solve_discrete_lyapunov(&dmatrix![0.5], &dmatrix![1.0]).unwrap();
        assert!((p[(0, 0)] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_transition_gives_bbt() {
        let bbt = dmatrix![2.0, 0.5; 0.5, 1.0];
        let p = solve_discrete_lyapunov(&DMatrix::zeros(2, 2), &bbt).unwrap();
        assert!((p - bbt).abs().max() < 1e-14);
    }

    #[test]
    fn rejects_unstable() {
        assert!(matches!(
            solve_discrete_lyapunov(&dmatrix![1.0], &dmatrix![1.0]),
            Err(Error::Unstable { .. })
        ));
        assert!(matches!(
            solve_discrete_lyapunov(&dmatrix![1.0 - 1e-12], &dmatrix![1.0]),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn random_stable_residual() {
        use rand::Rng;
        let mut rng = crate::core::RngStream::root(11).rng();
        for _ in 0..20 {
            let n = 4;
            let mut a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let rho = spectral_radius(&a);
            a *= 0.9 / rho.max(1e-6);
            let g = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let bbt = &g * g.transpose();
            let p = solve_discrete_lyapunov(&a, &bbt).unwrap();
            let resid = (&p - &a * &p * a.transpose() - &bbt).norm();
            assert!(resid <= 1e-10 * (1.0 + p.norm()), "residual {resid}");
            let min_eig = p
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            assert!(min_eig > -1e-10);
        }
    }
}
