use nalgebra::DMatrix;

use crate::{Error, Result};

const LAPACK_COL_MAJOR: i32 = 102;

type Select3 = extern "C" fn(*const f64, *const f64, *const f64) -> i32;

extern "C" {
    fn LAPACKE_dgges(
        matrix_layout: i32,
        jobvsl: i8,
        jobvsr: i8,
        sort: i8,
        selctg: Option<Select3>,
        n: i32,
        a: *mut f64,
        lda: i32,
        b: *mut f64,
        ldb: i32,
        sdim: *mut i32,
        alphar: *mut f64,
        alphai: *mut f64,
        beta: *mut f64,
        vsl: *mut f64,
        ldvsl: i32,
        vsr: *mut f64,
        ldvsr: i32,
    ) -> i32;
}

extern "C" fn select_stable(alphar: *const f64, alphai: *const f64, beta: *const f64) -> i32 {
    unsafe {
        let (ar, ai, b) = (*alphar, *alphai, *beta);
        i32::from(ar * ar + ai * ai < b * b)
    }
}

/// Ordered real generalized Schur (QZ) decomposition of the pencil
/// `A - lambda B`, with the eigenvalues of modulus < 1 moved to the leading
/// block.
///
/// Returns matrices satisfying `A = Q S Z'` and `B = Q T Z'`.
#[derive(Debug, Clone)]
pub struct QzDecomposition {
    pub s: DMatrix<f64>,
    pub t: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub z: DMatrix<f64>,
    pub alpha_re: Vec<f64>,
    pub alpha_im: Vec<f64>,
    pub beta: Vec<f64>,
    /// number of eigenvalues inside the unit circle (size of the leading block)
    pub n_stable: usize,
}

impl QzDecomposition {
    /// Modulus of eigenvalue `i`; `None` when the eigenvalue is infinite.
    pub fn eigenvalue_modulus(&self, i: usize) -> Option<f64> {
        let num = (self.alpha_re[i].powi(2) + self.alpha_im[i].powi(2)).sqrt();
        let den = self.beta[i].abs();
        if den <= f64::MIN_POSITIVE * 8.0 {
            None
        } else {
            Some(num / den)
        }
    }
}

pub fn qz_ordered_stable_first(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<QzDecomposition> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch("qz operands must be square".into()));
    }
    let mut s = a.clone();
    let mut t = b.clone();
    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut alpha_re = vec![0.0f64; n];
    let mut alpha_im = vec![0.0f64; n];
    let mut beta = vec![0.0f64; n];
    let mut sdim: i32 = 0;
    let ni = n as i32;
    // nalgebra stores column-major, matching LAPACK_COL_MAJOR
    let info = unsafe {
        LAPACKE_dgges(
            LAPACK_COL_MAJOR,
            b'V' as i8,
            b'V' as i8,
            b'S' as i8,
            Some(select_stable),
            ni,
            s.as_mut_slice().as_mut_ptr(),
            ni,
            t.as_mut_slice().as_mut_ptr(),
            ni,
            &mut sdim,
            alpha_re.as_mut_ptr(),
            alpha_im.as_mut_ptr(),
            beta.as_mut_ptr(),
            q.as_mut_slice().as_mut_ptr(),
            ni,
            z.as_mut_slice().as_mut_ptr(),
            ni,
        )
    };
    if info != 0 {
        return Err(Error::Numerical(format!("dgges failed with info={info}")));
    }
    Ok(QzDecomposition {
        s,
        t,
        q,
        z,
        alpha_re,
        alpha_im,
        beta,
        n_stable: sdim as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn factorization_reconstructs_inputs() {
        let a = dmatrix![1.0, 2.0, 0.5; 0.3, -1.0, 0.0; 0.1, 0.2, 2.0];
        let b = dmatrix![1.0, 0.0, 0.2; 0.0, 1.5, 0.0; 0.0, 0.0, 0.4];
        let qz = qz_ordered_stable_first(&a, &b).unwrap();
        let a_rec = &qz.q * &qz.s * qz.z.transpose();
        let b_rec = &qz.q * &qz.t * qz.z.transpose();
        assert!((a_rec - &a).abs().max() < 1e-12);
        assert!((b_rec - &b).abs().max() < 1e-12);
        // Q and Z orthogonal
        let n = 3;
        assert!((qz.q.transpose() * &qz.q - DMatrix::identity(n, n)).abs().max() < 1e-12);
        assert!((qz.z.transpose() * &qz.z - DMatrix::identity(n, n)).abs().max() < 1e-12);
    }

    #[test]
    fn stable_count_on_diagonal_pencil() {
        // eigenvalues of A - lambda I are the diagonal entries
        let a = DMatrix::from_diagonal(&nalgebra::dvector![0.5, 2.0, 0.1, 3.0]);
        let b = DMatrix::identity(4, 4);
        let qz = qz_ordered_stable_first(&a, &b).unwrap();
        assert_eq!(qz.n_stable, 2);
        // leading block carries the stable eigenvalues
        for i in 0..2 {
            assert!(qz.eigenvalue_modulus(i).unwrap() < 1.0);
        }
        for i in 2..4 {
            assert!(qz.eigenvalue_modulus(i).unwrap() > 1.0);
        }
    }

    #[test]
    fn infinite_eigenvalues_are_unstable() {
        // B singular: one infinite eigenvalue
        let a = dmatrix![1.0, 0.0; 0.0, 0.5];
        let b = dmatrix![0.0, 0.0; 0.0, 1.0];
        let qz = qz_ordered_stable_first(&a, &b).unwrap();
        assert_eq!(qz.n_stable, 1);
        assert!(qz.eigenvalue_modulus(1).is_none() || qz.eigenvalue_modulus(1).unwrap() > 1.0);
    }
}
