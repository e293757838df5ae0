use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2, Zip};

use super::QuantumSystem;
use crate::krylov::{InnerProductSpace, KrylovSpace};
use crate::{Error, Result, C64};

/// Krylov vector kind of a quantum run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumMode {
    /// Density operators built from the classical distribution.
    Liouville,
    /// A single coherent-state projector.
    Pure,
    /// A single coherent-state ket.
    Ket,
}

impl QuantumMode {
    pub fn name(self) -> &'static str {
        match self {
            QuantumMode::Liouville => "quantum-liouville",
            QuantumMode::Pure => "quantum-pure",
            QuantumMode::Ket => "quantum-ket",
        }
    }

    pub fn is_operator(self) -> bool {
        !matches!(self, QuantumMode::Ket)
    }
}

impl fmt::Display for QuantumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum-liouville" | "liouville" => Ok(QuantumMode::Liouville),
            "quantum-pure" | "pure" => Ok(QuantumMode::Pure),
            "quantum-ket" | "ket" => Ok(QuantumMode::Ket),
            other => Err(Error::InvalidParameter(format!(
                "unknown quantum mode `{other}`"
            ))),
        }
    }
}

/// Operators with `(ρ̂|σ̂) = Tr(ρ̂†σ̂)/(2πħ)` and propagator `ρ̂ ↦ Uρ̂U†`.
#[derive(Debug, Clone, Copy)]
pub struct LiouvilleSpace<'a> {
    system: &'a QuantumSystem,
}

impl<'a> LiouvilleSpace<'a> {
    pub fn new(system: &'a QuantumSystem) -> Self {
        Self { system }
    }
}

impl InnerProductSpace for LiouvilleSpace<'_> {
    type Vector = Array2<C64>;

    fn inner(&self, u: &Array2<C64>, v: &Array2<C64>) -> C64 {
        let s: C64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
        s * self.system.inner_scale()
    }

    fn axpy(&self, alpha: C64, x: &Array2<C64>, y: &mut Array2<C64>) {
        Zip::from(y).and(x).for_each(|y, &x| *y += alpha * x);
    }

    fn scale(&self, alpha: C64, x: &mut Array2<C64>) {
        x.mapv_inplace(|v| v * alpha);
    }
}

impl KrylovSpace for LiouvilleSpace<'_> {
    fn propagate(&self, v: &Array2<C64>) -> Result<Array2<C64>> {
        Ok(self.system.unitary()?.conjugate(v))
    }
}

/// Kets with the standard Hermitian inner product and propagator `ψ ↦ Uψ`.
#[derive(Debug, Clone, Copy)]
pub struct KetSpace<'a> {
    system: &'a QuantumSystem,
}

impl<'a> KetSpace<'a> {
    pub fn new(system: &'a QuantumSystem) -> Self {
        Self { system }
    }
}

impl InnerProductSpace for KetSpace<'_> {
    type Vector = Array1<C64>;

    fn inner(&self, u: &Array1<C64>, v: &Array1<C64>) -> C64 {
        u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    fn axpy(&self, alpha: C64, x: &Array1<C64>, y: &mut Array1<C64>) {
        Zip::from(y).and(x).for_each(|y, &x| *y += alpha * x);
    }

    fn scale(&self, alpha: C64, x: &mut Array1<C64>) {
        x.mapv_inplace(|v| v * alpha);
    }
}

impl KrylovSpace for KetSpace<'_> {
    fn propagate(&self, v: &Array1<C64>) -> Result<Array1<C64>> {
        Ok(self.system.unitary()?.apply(v))
    }
}
