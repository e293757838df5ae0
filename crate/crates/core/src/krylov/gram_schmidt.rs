use std::borrow::Borrow;

use ndarray::Array2;

use super::{
    alpha_table, orthogonalize, BasisStore, InnerProductSpace, KrylovOptions, KrylovResult,
};
use crate::{Error, Result, C64};

/// Incremental Gram-Schmidt over a stored time series.
///
/// Snapshots are fed one at a time so that long classical runs never hold
/// the whole series in memory. The projections computed along the way are
/// exactly the wavefunction entries `beta[[n, t]]`, so the table is
/// available without a second pass. Once a residual falls below
/// `tol * ‖ρ₀‖` the basis is frozen and later snapshots are only projected.
pub struct GramSchmidt<'a, S: InnerProductSpace> {
    space: &'a S,
    opts: KrylovOptions,
    basis: BasisStore<S::Vector>,
    norm0: f64,
    alpha_cols: Vec<Vec<C64>>,
    beta_cols: Vec<Vec<C64>>,
    terminated_at: Option<usize>,
    last_residual: f64,
}

impl<'a, S: InnerProductSpace> GramSchmidt<'a, S> {
    pub fn new(space: &'a S, rho0: &S::Vector, opts: &KrylovOptions) -> Result<Self> {
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
        Ok(Self {
            space,
            opts: opts.clone(),
            basis,
            norm0,
            alpha_cols: vec![vec![C64::new(1.0, 0.0)]],
            beta_cols: vec![vec![C64::new(1.0, 0.0)]],
            terminated_at: None,
            last_residual: norm0,
        })
    }

    /// Number of snapshots consumed, including `ρ₀`.
    pub fn snapshots(&self) -> usize {
        self.beta_cols.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn terminated_at(&self) -> Option<usize> {
        self.terminated_at
    }

    /// Projects the next snapshot and, while the basis is open, extends it.
    /// Returns `true` when a new basis vector was added.
    pub fn push(&mut self, snapshot: S::Vector) -> Result<bool> {
        let t = self.beta_cols.len();
        let mut w = snapshot;
        let h = orthogonalize(self.space, &self.basis, &mut w)?;
        let mut beta: Vec<C64> = h.iter().map(|v| v / self.norm0).collect();

        let can_grow = self.terminated_at.is_none() && self.basis.len() <= self.opts.max_steps;
        if !can_grow {
            self.beta_cols.push(beta);
            return Ok(false);
        }
        let r = self.space.norm(&w);
        self.last_residual = r;
        if r <= self.opts.tol * self.norm0 {
            log::debug!("Gram-Schmidt basis closed at snapshot {t} (residual {r:e})");
            self.terminated_at = Some(t);
            self.beta_cols.push(beta);
            return Ok(false);
        }

        // alpha[s, t] = (norm0 delta_st - sum_l h_l alpha[s, l]) / r
        let mut col = vec![C64::new(0.0, 0.0); t + 1];
        col[t] = C64::from(self.norm0);
        for (l, prev) in self.alpha_cols.iter().enumerate() {
            for (s, v) in prev.iter().enumerate() {
                col[s] -= h[l] * v;
            }
        }
        for v in &mut col {
            *v /= r;
        }
        self.alpha_cols.push(col);
        beta.push(C64::from(r / self.norm0));
        self.beta_cols.push(beta);

        self.space.scale(C64::from(r.recip()), &mut w);
        self.basis.push(w)?;
        Ok(true)
    }

    /// Wavefunction table `beta[[n, t]]` for all consumed snapshots.
    pub fn beta(&self) -> Array2<C64> {
        let k = self.basis.len();
        let mut beta = Array2::zeros((k, self.beta_cols.len()));
        for (t, col) in self.beta_cols.iter().enumerate() {
            for (n, &v) in col.iter().enumerate() {
                beta[[n, t]] = v;
            }
        }
        beta
    }

    /// Builds the result. Hessenberg column `n` needs snapshot `n + 1`, so
    /// without a closed basis and a trailing snapshot the matrix is missing
    /// its last column.
    ///
    /// The matrix is obtained from `H B = B₊`, where `B[n, t] = beta[n, t]`
    /// is upper triangular and `B₊[m, t] = beta[m, t + 1]`, by forward
    /// substitution. This equals `Σ_s alpha[s, n] beta[m, s + 1]` but keeps
    /// the one-step residual at rounding level even when `alpha` is large.
    pub fn finish(self) -> KrylovResult<S::Vector> {
        let beta = self.beta();
        let alpha = alpha_table(&self.alpha_cols);
        let k = self.basis.len();
        let cols = k.min(beta.ncols().saturating_sub(1));
        let mut hess = Array2::zeros((k, cols));
        for m in 0..k {
            for t in 0..cols {
                let mut v = beta[[m, t + 1]];
                for n in 0..t {
                    v -= hess[[m, n]] * beta[[n, t]];
                }
                hess[[m, t]] = v / beta[[t, t]];
            }
        }
        let trailing = if self.terminated_at.is_some() {
            None
        } else {
            Some(self.last_residual)
        };
        let mut result = KrylovResult::from_parts(
            self.basis,
            self.norm0,
            hess,
            alpha,
            self.terminated_at,
            trailing,
        );
        result.attach_wavefunction(beta);
        result
    }
}

/// Gram-Schmidt over a complete snapshot sequence `ρ₀, ρ₁, …`.
pub fn gram_schmidt_build<S, I>(
    snapshots: I,
    space: &S,
    opts: &KrylovOptions,
) -> Result<KrylovResult<S::Vector>>
where
    S: InnerProductSpace,
    I: IntoIterator,
    I::Item: Borrow<S::Vector>,
{
    let mut iter = snapshots.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidParameter("no snapshots supplied".into()))?;
    let mut gs = GramSchmidt::new(space, first.borrow(), opts)?;
    for snap in iter {
        gs.push(snap.borrow().clone())?;
    }
    Ok(gs.finish())
}

#[cfg(test)]
mod tests {
    use ndarray::{array, Array1};

    use super::*;
    use crate::krylov::DenseSpace;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn orthonormal_snapshots_are_their_own_basis() {
        let space = DenseSpace::new(3);
        let snaps: Vec<Array1<C64>> = vec![
            array![c(1.0), c(0.0), c(0.0)],
            array![c(0.0), c(1.0), c(0.0)],
            array![c(0.0), c(0.0), c(1.0)],
        ];
        let r = gram_schmidt_build(&snaps, &space, &KrylovOptions::new(5)).unwrap();
        assert_eq!(r.dim(), 3);
        for (n, s) in snaps.iter().enumerate() {
            let k = r.vector(n).unwrap();
            assert!((&k - s).iter().all(|z| z.norm() < 1e-15));
        }
        for n in 1..3 {
            assert!((r.residual_norms()[n] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_overlapping_unit_snapshots() {
        let space = DenseSpace::new(2);
        let s = 0.75f64.sqrt();
        let snaps: Vec<Array1<C64>> = vec![array![c(1.0), c(0.0)], array![c(0.5), c(s)]];
        let r = gram_schmidt_build(&snaps, &space, &KrylovOptions::new(5)).unwrap();
        let k1 = r.vector(1).unwrap();
        let expected = (&snaps[1] - &snaps[0].mapv(|v| v * 0.5)).mapv(|v| v / s);
        assert!((&k1 - &expected).iter().all(|z| z.norm() < 1e-15));
        let beta = r.beta.as_ref().unwrap();
        assert!((beta[[1, 1]].re - s).abs() < 1e-15);
        assert!((r.alpha[[0, 1]].re + 0.5 / s).abs() < 1e-15);
    }

    #[test]
    fn dependent_snapshot_closes_the_basis() {
        let space = DenseSpace::new(2);
        let snaps: Vec<Array1<C64>> = vec![
            array![c(1.0), c(0.0)],
            array![c(0.0), c(1.0)],
            array![c(-1.0), c(0.0)],
        ];
        let r = gram_schmidt_build(&snaps, &space, &KrylovOptions::new(5)).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.terminated_at, Some(2));
        assert_eq!(r.hessenberg.dim(), (2, 2));
        assert!((r.hessenberg[[0, 1]] + c(1.0)).norm() < 1e-15);
    }
}
