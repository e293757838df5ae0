//! Krylov spaces for unitary quantum maps and classical Perron-Frobenius
//! dynamics on phase space.
//!
//! The crate is organized around one geometry-agnostic Krylov builder
//! ([`krylov`]) and three backends that plug into it:
//!
//! - [`classical`]: area-preserving maps, exact back-trajectory evolution of
//!   analytic densities and the grid L² inner product.
//! - [`quantum`]: quantized torus and truncated oscillator systems, coherent
//!   states, P-representation densities, Husimi functions and the operator
//!   inner product `Tr(ρ†σ)/(2πħ)`.
//! - [`semiclassics`]: squeezing parameters and one-step coherent-state
//!   transport checks for kicked maps.
//!
//! Phase-space samples are carried by [`field::PhaseSpaceField`], which also
//! owns the `KCFIELD v1` dump format.

#![deny(unsafe_code)]
// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod field;
pub mod krylov;
pub mod quantum;
pub mod semiclassics;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// A point `(q, p)` of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    pub fn norm(&self) -> f64 {
        self.q.hypot(self.p)
    }

    /// Both coordinates reduced to `[0, 1)`.
    pub fn wrapped(&self) -> Self {
        Self::new(self.q.rem_euclid(1.0), self.p.rem_euclid(1.0))
    }
}

impl From<(f64, f64)> for PhasePoint {
    fn from((q, p): (f64, f64)) -> Self {
        Self::new(q, p)
    }
}

/// Signed displacement `a - b` reduced to `[-0.5, 0.5)` per coordinate.
pub fn torus_displacement(a: PhasePoint, b: PhasePoint) -> PhasePoint {
    let wrap = |d: f64| (d + 0.5).rem_euclid(1.0) - 0.5;
    PhasePoint::new(wrap(a.q - b.q), wrap(a.p - b.p))
}
