use num_complex::Complex64 as C64;

use super::{alpha_table, orthogonalize, BasisStore, KrylovOptions, KrylovResult, KrylovSpace};
use crate::{Error, Result};

/// Arnoldi iteration from an explicit propagator.
///
/// Every basis vector gets its full Hessenberg column, so the returned
/// matrix is square; when `max_steps` is reached the residual of the last
/// column is kept in `trailing_residual`.
pub fn arnoldi_build<S: KrylovSpace>(
    space: &S,
    rho0: &S::Vector,
    opts: &KrylovOptions,
) -> Result<KrylovResult<S::Vector>> {
    if opts.max_steps < 1 {
        return Err(Error::InvalidParameter(
            "max_steps must be at least 1".into(),
        ));
    }
    let norm0 = space.norm(rho0);
    if !(norm0 > opts.tol) {
        return Err(Error::ZeroInitialVector {
            norm: norm0,
            tol: opts.tol,
        });
    }

    let mut basis = BasisStore::new(opts.memory_budget);
    let mut k0 = rho0.clone();
    space.scale(C64::from(norm0.recip()), &mut k0);
    basis.push(k0)?;

    let mut alpha_cols = vec![vec![C64::new(1.0, 0.0)]];
    let mut columns: Vec<Vec<C64>> = Vec::new();
    let mut terminated_at = None;
    let trailing;

    loop {
        let n = basis.len() - 1;
        let mut w = space.propagate(&*basis.get_ref(n)?)?;
        let image_norm = space.norm(&w);
        let mut h = orthogonalize(space, &basis, &mut w)?;
        let b = space.norm(&w);
        h.push(C64::from(b));
        columns.push(h);

        if b <= opts.tol * image_norm.max(f64::MIN_POSITIVE) {
            log::debug!("Arnoldi terminated at step {} (b = {b:e})", n + 1);
            terminated_at = Some(n + 1);
            trailing = b;
            break;
        }
        if basis.len() > opts.max_steps {
            trailing = b;
            break;
        }

        // alpha[t, n+1] = (alpha[t-1, n] - sum_l h_l alpha[t, l]) / b
        let h = columns.last().expect("column just pushed");
        let mut next = vec![C64::new(0.0, 0.0); n + 2];
        for (t, v) in alpha_cols[n].iter().enumerate() {
            next[t + 1] += v;
        }
        for (l, col) in alpha_cols.iter().enumerate() {
            for (t, v) in col.iter().enumerate() {
                next[t] -= h[l] * v;
            }
        }
        for v in &mut next {
            *v /= b;
        }
        alpha_cols.push(next);

        space.scale(C64::from(b.recip()), &mut w);
        basis.push(w)?;
    }

    let k = basis.len();
    let mut hess = ndarray::Array2::zeros((k, k));
    for (n, col) in columns.iter().enumerate() {
        for (m, &v) in col.iter().enumerate().take(k) {
            hess[[m, n]] = v;
        }
    }
    Ok(KrylovResult::from_parts(
        basis,
        norm0,
        hess,
        alpha_table(&alpha_cols),
        terminated_at,
        Some(trailing),
    ))
}

#[cfg(test)]
mod tests {
    use ndarray::{array, Array1, Array2};

    use super::*;
    use crate::krylov::DenseSpace;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rotation(theta: f64) -> Array2<C64> {
        array![
            [c(theta.cos()), c(-theta.sin())],
            [c(theta.sin()), c(theta.cos())]
        ]
    }

    #[test]
    fn quarter_rotation_terminates_after_two_vectors() {
        let space = DenseSpace::with_propagator(rotation(std::f64::consts::FRAC_PI_2));
        let rho0: Array1<C64> = array![c(1.0), c(0.0)];
        let r = arnoldi_build(&space, &rho0, &KrylovOptions::new(10)).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.terminated_at, Some(2));
        assert!(r.a[0].norm() < 1e-15);
        assert!((r.b[1] - 1.0).abs() < 1e-15);
        let k1 = r.vector(1).unwrap();
        assert!((k1[0].norm()) < 1e-15 && (k1[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn identity_gives_single_vector() {
        let u = Array2::from_diag(&Array1::from_elem(3, c(1.0)));
        let space = DenseSpace::with_propagator(u);
        let rho0: Array1<C64> = array![c(3.0), c(0.0), c(4.0)];
        let r = arnoldi_build(&space, &rho0, &KrylovOptions::new(5)).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.terminated_at, Some(1));
        assert!((r.a[0] - c(1.0)).norm() < 1e-15);
        assert!(r.trailing_residual.unwrap() < 1e-15);
        assert!((r.norm0 - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let space = DenseSpace::with_propagator(rotation(0.3));
        let rho0: Array1<C64> = array![c(0.0), c(0.0)];
        let err = arnoldi_build(&space, &rho0, &KrylovOptions::new(3)).unwrap_err();
        assert!(matches!(err, Error::ZeroInitialVector { .. }));
    }

    #[test]
    fn missing_propagator_is_reported() {
        let space = DenseSpace::new(2);
        let rho0: Array1<C64> = array![c(1.0), c(0.0)];
        let err = arnoldi_build(&space, &rho0, &KrylovOptions::new(3)).unwrap_err();
        assert!(matches!(err, Error::PropagatorFailure(_)));
    }
}
