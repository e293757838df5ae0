//! Geometry-agnostic Krylov construction.
//!
//! A Krylov space is built either from a propagator and an initial vector
//! ([`arnoldi_build`]) or from a stored time series ([`gram_schmidt_build`]).
//! Both paths orthonormalize twice per step and fix the phase of every new
//! basis element so that its lower-diagonal coefficient is real and positive.
//!
//! Coefficient tables follow the normalized-snapshot convention: with
//! `ρ̃_t = ρ_t / ‖ρ₀‖`,
//!
//! ```text
//! κ_n  = Σ_t alpha[[t, n]] ρ̃_t
//! ρ̃_t  = Σ_n beta[[n, t]]  κ_n
//! ```
//!
//! so `alpha[[0, 0]] = beta[[0, 0]] = 1`.

mod analysis;
mod arnoldi;
mod gram;
mod gram_schmidt;
mod space;
pub(crate) mod store;

pub use analysis::{
    hessenberg_matrix, hop_evolve, krylov_complexity, krylov_wavefunction, Complexity,
    HessenbergMatrix, GUARD_THRESHOLD,
};
pub use arnoldi::arnoldi_build;
pub use gram::{gram_beta, gram_determinant_coefficients, GramCoefficients, GramData};
pub use gram_schmidt::{gram_schmidt_build, GramSchmidt};
pub use space::DenseSpace;
pub use store::{BasisStore, Spill};

use ndarray::Array2;

use crate::{Result, C64};

/// Number of orthogonalization passes applied per Krylov step.
pub const ORTHOGONALIZATION_PASSES: usize = 2;

/// Default relative residual below which a Krylov step terminates.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Vectors with a sesquilinear inner product, conjugate-linear in the first
/// argument.
pub trait InnerProductSpace {
    type Vector: Clone + Spill;

    fn inner(&self, u: &Self::Vector, v: &Self::Vector) -> C64;

    /// `y += alpha * x`
    fn axpy(&self, alpha: C64, x: &Self::Vector, y: &mut Self::Vector);

    fn scale(&self, alpha: C64, x: &mut Self::Vector);

    fn norm(&self, v: &Self::Vector) -> f64 {
        self.inner(v, v).re.max(0.0).sqrt()
    }
}

/// An inner-product space with a one-step propagator `v ↦ U v`.
pub trait KrylovSpace: InnerProductSpace {
    fn propagate(&self, v: &Self::Vector) -> Result<Self::Vector>;
}

#[derive(Debug, Clone)]
pub struct KrylovOptions {
    /// Maximum number of propagator applications (basis size `max_steps + 1`).
    pub max_steps: usize,
    /// Relative residual threshold for termination.
    pub tol: f64,
    /// Basis bytes kept in memory before spilling to a temporary file.
    /// `None` keeps everything in memory.
    pub memory_budget: Option<usize>,
}

impl KrylovOptions {
    pub fn new(max_steps: usize) -> Self {
        Self {
            max_steps,
            tol: DEFAULT_TOLERANCE,
            memory_budget: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_memory_budget(mut self, bytes: Option<usize>) -> Self {
        self.memory_budget = bytes;
        self
    }
}

/// Krylov basis together with the Arnoldi sequences and coefficient tables.
#[derive(Debug)]
pub struct KrylovResult<V> {
    pub basis: BasisStore<V>,
    /// `‖ρ₀‖` in the space's norm.
    pub norm0: f64,
    /// Direct matrix elements `(κ_m|U κ_n)`; `K` rows and `K` or `K - 1`
    /// columns depending on whether the last column could be evaluated.
    pub hessenberg: Array2<C64>,
    /// `a_n = (κ_n|U κ_n)`
    pub a: Vec<C64>,
    /// `b_n = (κ_n|U κ_{n-1})`; `b[0]` is set to zero.
    pub b: Vec<f64>,
    /// `c_n = (κ_0|U κ_n)`
    pub c: Vec<C64>,
    /// `alpha[[t, n]]`, lower triangular in the sense `t <= n`.
    pub alpha: Array2<C64>,
    /// `beta[[n, t]]`, present once a wavefunction has been attached.
    pub beta: Option<Array2<C64>>,
    pub complexity: Option<Complexity>,
    /// Step at which the residual fell below tolerance, if it did.
    pub terminated_at: Option<usize>,
    /// Residual norm of the last evaluated propagator image, when the basis
    /// was not terminated.
    pub trailing_residual: Option<f64>,
}

impl<V: Clone + Spill> KrylovResult<V> {
    /// Krylov dimension `K`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vector(&self, n: usize) -> Result<V> {
        self.basis.get(n)
    }

    /// `β_nn = Π b_i` for the diagonal of the wavefunction table.
    pub fn residual_norms(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|n| self.alpha[[n, n]].re.recip())
            .collect()
    }

    /// Stores a wavefunction table and its complexity series.
    pub fn attach_wavefunction(&mut self, beta: Array2<C64>) {
        self.complexity = Some(krylov_complexity(&beta));
        self.beta = Some(beta);
    }

    /// Largest imaginary part among all sequence and table entries.
    pub fn max_imaginary(&self) -> f64 {
        let tables = [
            Some(&self.hessenberg),
            Some(&self.alpha),
            self.beta.as_ref(),
        ];
        tables
            .into_iter()
            .flatten()
            .flat_map(|t| t.iter())
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_parts(
        basis: BasisStore<V>,
        norm0: f64,
        hessenberg: Array2<C64>,
        alpha: Array2<C64>,
        terminated_at: Option<usize>,
        trailing_residual: Option<f64>,
    ) -> Self {
        let k = basis.len();
        let cols = hessenberg.ncols();
        let a = (0..cols).map(|n| hessenberg[[n, n]]).collect();
        let c = (0..cols).map(|n| hessenberg[[0, n]]).collect();
        let mut b = vec![0.0; k];
        for (n, bn) in b.iter_mut().enumerate().skip(1) {
            if n - 1 < cols {
                *bn = hessenberg[[n, n - 1]].re;
            }
        }
        Self {
            basis,
            norm0,
            hessenberg,
            a,
            b,
            c,
            alpha,
            beta: None,
            complexity: None,
            terminated_at,
            trailing_residual,
        }
    }
}

/// Two passes of `w -= Σ_l (κ_l|w) κ_l`; returns the accumulated coefficients.
pub(crate) fn orthogonalize<S: InnerProductSpace>(
    space: &S,
    basis: &BasisStore<S::Vector>,
    w: &mut S::Vector,
) -> Result<Vec<C64>> {
    let n = basis.len();
    let mut total = vec![C64::new(0.0, 0.0); n];
    for _ in 0..ORTHOGONALIZATION_PASSES {
        let mut coeffs = Vec::with_capacity(n);
        for l in 0..n {
            coeffs.push(space.inner(&*basis.get_ref(l)?, w));
        }
        for (l, &h) in coeffs.iter().enumerate() {
            space.axpy(-h, &*basis.get_ref(l)?, w);
            total[l] += h;
        }
    }
    Ok(total)
}

/// Builds the square `K x K` alpha table from per-column coefficient vectors.
pub(crate) fn alpha_table(cols: &[Vec<C64>]) -> Array2<C64> {
    let k = cols.len();
    let mut alpha = Array2::zeros((k, k));
    for (n, col) in cols.iter().enumerate() {
        for (t, &v) in col.iter().enumerate().take(k) {
            alpha[[t, n]] = v;
        }
    }
    alpha
}
