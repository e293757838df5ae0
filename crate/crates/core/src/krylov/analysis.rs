use std::borrow::Borrow;

use ndarray::Array2;

use super::{InnerProductSpace, KrylovResult, Spill};
use crate::{Error, Result, C64};

/// `|c_m|` below which the row reconstruction `U_mn = a_m c_n / c_m` is
/// replaced by direct matrix elements.
pub const GUARD_THRESHOLD: f64 = 1e-12;

/// Propagator in the Krylov basis.
#[derive(Debug, Clone)]
pub struct HessenbergMatrix {
    pub matrix: Array2<C64>,
    /// Rows `m` with `|c_m| < GUARD_THRESHOLD`. Their upper entries come
    /// from direct elements when available and are zero otherwise.
    pub guarded: Vec<usize>,
    /// `true` when the basis is invariant under the propagator, so the last
    /// column has no component outside the basis.
    pub closed: bool,
}

impl HessenbergMatrix {
    /// Rebuilds the matrix from the Arnoldi sequences alone:
    /// lower diagonal `b`, row 0 equal to `c`, and `U_mn = a_m c_n / c_m`
    /// for `1 <= m <= n`.
    pub fn from_sequences(
        a: &[C64],
        b: &[f64],
        c: &[C64],
        direct: Option<&Array2<C64>>,
        closed: bool,
    ) -> Self {
        let k = a.len().min(c.len());
        let mut matrix = Array2::zeros((k, k));
        let mut guarded = Vec::new();
        for n in 0..k {
            matrix[[0, n]] = c[n];
        }
        for m in 1..k {
            matrix[[m, m - 1]] = C64::from(b[m]);
            if c[m].norm() < GUARD_THRESHOLD {
                guarded.push(m);
                if let Some(d) = direct {
                    for n in m..k {
                        matrix[[m, n]] = d[[m, n]];
                    }
                }
                continue;
            }
            let ratio = a[m] / c[m];
            for n in m..k {
                matrix[[m, n]] = ratio * c[n];
            }
        }
        Self {
            matrix,
            guarded,
            closed,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Hessenberg matrix of a finished build, reconstructed from its
/// sequences with guarded rows filled from the stored direct elements.
pub fn hessenberg_matrix<V>(result: &KrylovResult<V>) -> HessenbergMatrix {
    let closed = result.terminated_at.is_some()
        && result.hessenberg.ncols() == result.a.len()
        && result.a.len() == result.b.len();
    HessenbergMatrix::from_sequences(
        &result.a,
        &result.b,
        &result.c,
        Some(&result.hessenberg),
        closed,
    )
}

/// One step of the hopping problem: `beta_{t+1} = H beta_t`.
///
/// Fails when `beta_t` has weight on the last basis element of an open
/// basis, since the step would then leave the known part of the chain.
pub fn hop_evolve(beta_t: &[C64], h: &HessenbergMatrix) -> Result<Vec<C64>> {
    let k = h.dim();
    if beta_t.len() > k {
        return Err(Error::IndexOutOfRange {
            requested: beta_t.len() - 1,
            available: k,
        });
    }
    let scale = beta_t.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !h.closed && beta_t.len() == k && k > 0 && beta_t[k - 1].norm() > 1e-12 * scale {
        return Err(Error::IndexOutOfRange {
            requested: k,
            available: k,
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); k];
    for (m, o) in out.iter_mut().enumerate() {
        let lo = m.saturating_sub(1);
        for (n, &v) in beta_t.iter().enumerate().skip(lo) {
            *o += h.matrix[[m, n]] * v;
        }
    }
    Ok(out)
}

/// Complexity series `C_K(t) = Σ_n n |beta[n, t]|² / Σ_n |beta[n, t]|²`.
#[derive(Debug, Clone)]
pub struct Complexity {
    pub series: Vec<f64>,
    /// `|Σ_n |beta[n, t]|² - 1|` before per-column normalization.
    pub drift: Vec<f64>,
}

impl Complexity {
    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }
}

pub fn krylov_complexity(beta: &Array2<C64>) -> Complexity {
    let mut series = Vec::with_capacity(beta.ncols());
    let mut drift = Vec::with_capacity(beta.ncols());
    for col in beta.columns() {
        let mut total = 0.0;
        let mut weighted = 0.0;
        for (n, v) in col.iter().enumerate() {
            let p = v.norm_sqr();
            total += p;
            weighted += n as f64 * p;
        }
        drift.push((total - 1.0).abs());
        series.push(if total > 0.0 { weighted / total } else { 0.0 });
    }
    let max = drift.iter().copied().fold(0.0, f64::max);
    if max > 1e-8 {
        log::warn!("wavefunction norm drift up to {max:e}; columns renormalized");
    } else {
        log::debug!("wavefunction norm drift {max:e}");
    }
    Complexity { series, drift }
}

/// Direct projection `beta[[n, t]] = (κ_n|ρ_t) / ‖ρ₀‖`.
pub fn krylov_wavefunction<S, I>(
    space: &S,
    result: &KrylovResult<S::Vector>,
    snapshots: I,
) -> Result<Array2<C64>>
where
    S: InnerProductSpace,
    S::Vector: Spill,
    I: IntoIterator,
    I::Item: Borrow<S::Vector>,
{
    let k = result.dim();
    let mut cols = Vec::new();
    for snap in snapshots {
        let mut col = Vec::with_capacity(k);
        for n in 0..k {
            col.push(space.inner(&*result.basis.get_ref(n)?, snap.borrow()) / result.norm0);
        }
        cols.push(col);
    }
    let mut beta = Array2::zeros((k, cols.len()));
    for (t, col) in cols.into_iter().enumerate() {
        for (n, v) in col.into_iter().enumerate() {
            beta[[n, t]] = v;
        }
    }
    Ok(beta)
}
