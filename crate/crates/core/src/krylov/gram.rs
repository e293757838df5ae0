//! Closed-form Krylov coefficients from Gram determinants.
//!
//! With `G_ij = (ρ_i|ρ_j)`, `D_n = det G[0..=n, 0..=n]` (`D_{-1} = 1`) and
//! `D^{(t)}_{n-1}` the determinant of rows `0..n` of `G_n` with column `t`
//! removed,
//!
//! ```text
//! alpha[t, n] = (-1)^(t+n) D^{(t)}_{n-1} / sqrt(D_n D_{n-1})
//! B_n         = sqrt(D_n / D_{n-1})
//! beta[n, t]  = Σ_s conj(alpha[s, n]) G_st
//! ```

use std::borrow::Borrow;

use ndarray::{s, Array2};

use super::InnerProductSpace;
use crate::{Error, Result, C64};

/// Gram matrix of a snapshot sequence.
#[derive(Debug, Clone)]
pub struct GramData {
    g: Array2<C64>,
}

#[derive(Debug, Clone)]
pub struct GramCoefficients {
    /// `alpha[t, n]` for `t = 0..=n`.
    pub alpha: Vec<C64>,
    /// `B_n = sqrt(D_n / D_{n-1})`.
    pub b: f64,
}

impl GramData {
    /// Toeplitz Gram matrix from correlations `c_k = (ρ_i|ρ_{i+k})`, valid
    /// for norm-preserving propagators.
    pub fn from_correlations(c: &[C64]) -> Self {
        let n = c.len();
        let g = Array2::from_shape_fn(
            (n, n),
            |(i, j)| {
                if j >= i {
                    c[j - i]
                } else {
                    c[i - j].conj()
                }
            },
        );
        Self { g }
    }

    pub fn from_matrix(g: Array2<C64>) -> Self {
        assert!(g.is_square(), "Gram matrix must be square");
        Self { g }
    }

    pub fn from_snapshots<S, I>(space: &S, snapshots: I) -> Self
    where
        S: InnerProductSpace,
        I: IntoIterator,
        I::Item: Borrow<S::Vector>,
    {
        let snaps: Vec<I::Item> = snapshots.into_iter().collect();
        let n = snaps.len();
        let mut g = Array2::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let v = space.inner(snaps[i].borrow(), snaps[j].borrow());
                g[[i, j]] = v;
                g[[j, i]] = v.conj();
            }
        }
        Self { g }
    }

    pub fn len(&self) -> usize {
        self.g.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.g
    }

    /// `D_n`, with `D_{-1} = 1` for `n = -1`.
    pub fn determinant(&self, n: isize) -> f64 {
        if n < 0 {
            return 1.0;
        }
        let n = n as usize;
        determinant(self.g.slice(s![..=n, ..=n]).to_owned()).re
    }

    /// `D^{(t)}_{n-1}`: rows `0..n`, columns `0..=n` without `t`.
    pub fn minor(&self, n: usize, t: usize) -> C64 {
        if n == 0 {
            return C64::new(1.0, 0.0);
        }
        let cols: Vec<usize> = (0..=n).filter(|&c| c != t).collect();
        let m = Array2::from_shape_fn((n, n), |(i, j)| self.g[[i, cols[j]]]);
        determinant(m)
    }
}

/// Coefficients of `κ_n` in terms of the snapshots used to build `gram`.
pub fn gram_determinant_coefficients(gram: &GramData, n: usize) -> Result<GramCoefficients> {
    if n >= gram.len() {
        return Err(Error::IndexOutOfRange {
            requested: n,
            available: gram.len(),
        });
    }
    for k in 0..=n {
        let d = gram.determinant(k as isize);
        if !(d > 0.0) {
            return Err(Error::SingularGram { order: k, det: d });
        }
    }
    let dn = gram.determinant(n as isize);
    let dm = gram.determinant(n as isize - 1);
    let norm = (dn * dm).sqrt();
    let alpha = (0..=n)
        .map(|t| {
            let sign = if (t + n).is_multiple_of(2) { 1.0 } else { -1.0 };
            gram.minor(n, t) * (sign / norm)
        })
        .collect();
    Ok(GramCoefficients {
        alpha,
        b: (dn / dm).sqrt(),
    })
}

/// Wavefunction table `beta[[n, t]]` for `n, t < order` from determinants
/// and correlations alone.
pub fn gram_beta(gram: &GramData, order: usize) -> Result<Array2<C64>> {
    let mut beta = Array2::zeros((order, order));
    for n in 0..order {
        let coeffs = gram_determinant_coefficients(gram, n)?;
        for t in 0..order {
            beta[[n, t]] = coeffs
                .alpha
                .iter()
                .enumerate()
                .map(|(s, a)| a.conj() * gram.g[[s, t]])
                .sum();
        }
    }
    Ok(beta)
}

/// Determinant by LU factorization with partial pivoting.
pub(crate) fn determinant(mut a: Array2<C64>) -> C64 {
    let n = a.nrows();
    let mut det = C64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[[i, k]].norm().total_cmp(&a[[j, k]].norm()))
            .expect("non-empty range");
        if a[[pivot, k]].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != k {
            for j in 0..n {
                a.swap([k, j], [pivot, j]);
            }
            det = -det;
        }
        let p = a[[k, k]];
        det *= p;
        for i in k + 1..n {
            let f = a[[i, k]] / p;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let v = a[[k, j]];
                a[[i, j]] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn first_coefficient_is_one() {
        let g = GramData::from_correlations(&[c(1.0)]);
        let r = gram_determinant_coefficients(&g, 0).unwrap();
        assert!((r.alpha[0] - c(1.0)).norm() < 1e-15);
        assert!((r.b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_expansion() {
        let g = GramData::from_correlations(&[c(1.0), c(0.5)]);
        assert!((g.determinant(1) - 0.75).abs() < 1e-15);
        let r = gram_determinant_coefficients(&g, 1).unwrap();
        assert!((r.alpha[0].re + 0.577_350_269_189_625_8).abs() < 1e-12);
        assert!((r.alpha[1].re - 1.154_700_538_379_251_5).abs() < 1e-12);
        assert!((r.b - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn singular_gram_is_reported() {
        let g = GramData::from_correlations(&[c(1.0), c(1.0)]);
        let err = gram_determinant_coefficients(&g, 1).unwrap_err();
        assert!(matches!(err, Error::SingularGram { order: 1, .. }));
    }

    #[test]
    fn lu_determinant_matches_cofactor_expansion() {
        let a = Array2::from_shape_vec(
            (3, 3),
            vec![
                C64::new(2.0, 1.0),
                c(0.0),
                C64::new(1.0, -1.0),
                c(1.0),
                C64::new(0.0, 3.0),
                c(2.0),
                C64::new(-1.0, 0.5),
                c(4.0),
                c(1.0),
            ],
        )
        .unwrap();
        let cof = a[[0, 0]] * (a[[1, 1]] * a[[2, 2]] - a[[1, 2]] * a[[2, 1]])
            - a[[0, 1]] * (a[[1, 0]] * a[[2, 2]] - a[[1, 2]] * a[[2, 0]])
            + a[[0, 2]] * (a[[1, 0]] * a[[2, 1]] - a[[1, 1]] * a[[2, 0]]);
        assert!((determinant(a) - cof).norm() < 1e-12);
    }
}
