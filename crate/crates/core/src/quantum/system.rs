use std::f64::consts::TAU;

use ndarray::{Array1, Array2};

use crate::classical::KickedForm;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantumGeometry {
    /// Quantized unit torus with `2πħN = 1` and Floquet phases `(q̄, p̄)`.
    Torus { n: usize, qbar: f64, pbar: f64 },
    /// Number basis truncated at `dim` states.
    Plane { dim: usize, hbar: f64 },
}

/// One-step propagator.
#[derive(Debug, Clone)]
pub enum Unitary {
    Dense {
        u: Array2<C64>,
        u_dag: Array2<C64>,
    },
    /// Phases of a propagator diagonal in the working basis.
    Diagonal(Array1<C64>),
}

impl Unitary {
    pub fn dense(u: Array2<C64>) -> Self {
        let u_dag = adjoint(&u);
        Unitary::Dense { u, u_dag }
    }

    pub fn to_dense(&self) -> Array2<C64> {
        match self {
            Unitary::Dense { u, .. } => u.clone(),
            Unitary::Diagonal(d) => Array2::from_diag(d),
        }
    }

    pub fn apply(&self, psi: &Array1<C64>) -> Array1<C64> {
        match self {
            Unitary::Dense { u, .. } => u.dot(psi),
            Unitary::Diagonal(d) => psi * d,
        }
    }

    pub fn apply_adjoint(&self, psi: &Array1<C64>) -> Array1<C64> {
        match self {
            Unitary::Dense { u_dag, .. } => u_dag.dot(psi),
            Unitary::Diagonal(d) => psi * &d.mapv(|z| z.conj()),
        }
    }

    /// `U ρ U†`
    pub fn conjugate(&self, rho: &Array2<C64>) -> Array2<C64> {
        match self {
            Unitary::Dense { u, u_dag } => u.dot(rho).dot(u_dag),
            Unitary::Diagonal(d) => {
                Array2::from_shape_fn(rho.dim(), |(i, j)| d[i] * rho[[i, j]] * d[j].conj())
            }
        }
    }

    /// `U† ρ U`
    pub fn conjugate_adjoint(&self, rho: &Array2<C64>) -> Array2<C64> {
        match self {
            Unitary::Dense { u, u_dag } => u_dag.dot(rho).dot(u),
            Unitary::Diagonal(d) => {
                Array2::from_shape_fn(rho.dim(), |(i, j)| d[i].conj() * rho[[i, j]] * d[j])
            }
        }
    }

    /// `max |U†U - I|`
    pub fn unitarity_error(&self) -> f64 {
        match self {
            Unitary::Dense { u, u_dag } => {
                let p = u_dag.dot(u);
                p.indexed_iter()
                    .map(|((i, j), z)| {
                        (z - if i == j {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        })
                        .norm()
                    })
                    .fold(0.0, f64::max)
            }
            Unitary::Diagonal(d) => d
                .iter()
                .map(|z| (z.norm_sqr() - 1.0).abs())
                .fold(0.0, f64::max),
        }
    }
}

pub(crate) fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

#[derive(Debug, Clone)]
pub struct QuantumSystem {
    pub geometry: QuantumGeometry,
    pub unitary: Option<Unitary>,
}

impl QuantumSystem {
    pub fn dim(&self) -> usize {
        match self.geometry {
            QuantumGeometry::Torus { n, .. } => n,
            QuantumGeometry::Plane { dim, .. } => dim,
        }
    }

    pub fn hbar(&self) -> f64 {
        match self.geometry {
            QuantumGeometry::Torus { n, .. } => (TAU * n as f64).recip(),
            QuantumGeometry::Plane { hbar, .. } => hbar,
        }
    }

    /// `1 / (2πħ)`; equals `N` on the torus.
    pub fn inner_scale(&self) -> f64 {
        match self.geometry {
            QuantumGeometry::Torus { n, .. } => n as f64,
            QuantumGeometry::Plane { hbar, .. } => (TAU * hbar).recip(),
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.geometry, QuantumGeometry::Torus { .. })
    }

    /// Position eigenvalues `q_n = (n + q̄)/N` (torus only).
    pub fn positions(&self) -> Option<Vec<f64>> {
        match self.geometry {
            QuantumGeometry::Torus { n, qbar, .. } => {
                Some((0..n).map(|i| (i as f64 + qbar) / n as f64).collect())
            }
            QuantumGeometry::Plane { .. } => None,
        }
    }

    /// Momentum eigenvalues `p_m = (m + p̄)/N` (torus only).
    pub fn momenta(&self) -> Option<Vec<f64>> {
        match self.geometry {
            QuantumGeometry::Torus { n, pbar, .. } => {
                Some((0..n).map(|i| (i as f64 + pbar) / n as f64).collect())
            }
            QuantumGeometry::Plane { .. } => None,
        }
    }

    pub fn unitary(&self) -> Result<&Unitary> {
        self.unitary
            .as_ref()
            .ok_or_else(|| Error::PropagatorFailure("quantum system has no unitary".into()))
    }

    /// Same Hilbert space (dimension, ħ and boundary phases).
    pub fn compatible(&self, other: &Self) -> bool {
        match (self.geometry, other.geometry) {
            (
                QuantumGeometry::Torus {
                    n: a,
                    qbar: qa,
                    pbar: pa,
                },
                QuantumGeometry::Torus {
                    n: b,
                    qbar: qb,
                    pbar: pb,
                },
            ) => a == b && qa == qb && pa == pb,
            (
                QuantumGeometry::Plane { dim: a, hbar: ha },
                QuantumGeometry::Plane { dim: b, hbar: hb },
            ) => a == b && ha == hb,
            _ => false,
        }
    }
}

pub fn build_torus_system(n: usize, qbar: f64, pbar: f64) -> Result<QuantumSystem> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "torus dimension must be at least 2, got {n}"
        )));
    }
    for (name, v) in [("qbar", qbar), ("pbar", pbar)] {
        if !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "{name} must lie in [0, 1), got {v}"
            )));
        }
    }
    Ok(QuantumSystem {
        geometry: QuantumGeometry::Torus { n, qbar, pbar },
        unitary: None,
    })
}

/// `F[n, m] = ⟨q_n|p_m⟩ = N^{-1/2} exp(i2π(n + q̄)(m + p̄)/N)`.
pub fn fourier_kernel(system: &QuantumSystem) -> Result<Array2<C64>> {
    let QuantumGeometry::Torus { n, qbar, pbar } = system.geometry else {
        return Err(Error::InvalidParameter(
            "Fourier kernel needs a torus system".into(),
        ));
    };
    let nf = n as f64;
    let norm = nf.sqrt().recip();
    Ok(Array2::from_shape_fn((n, n), |(i, m)| {
        let phase = TAU * (i as f64 + qbar) * (m as f64 + pbar) / nf;
        C64::from_polar(norm, phase)
    }))
}

/// `U = exp(-i f(q̂)/ħ) exp(-i g(p̂)/ħ)` in the position basis.
pub fn kicked_unitary(system: &QuantumSystem, kicks: &dyn KickedForm) -> Result<QuantumSystem> {
    let hbar = system.hbar();
    let qs = system
        .positions()
        .ok_or_else(|| Error::InvalidParameter("kicked unitary needs a torus system".into()))?;
    let ps = system.momenta().expect("torus has momenta");
    let f_phase: Vec<C64> = qs
        .iter()
        .map(|&q| C64::from_polar(1.0, -kicks.f(q) / hbar))
        .collect();
    let g_phase: Vec<C64> = ps
        .iter()
        .map(|&p| C64::from_polar(1.0, -kicks.g(p) / hbar))
        .collect();
    Ok(with_unitary(
        system,
        compose_kicks(system, &f_phase, &g_phase)?,
    ))
}

/// Harper Floquet operator `exp(-iNk cos 2πq̂) exp(-iNk cos 2πp̂)`.
pub fn harper_unitary(system: &QuantumSystem, k: f64) -> Result<QuantumSystem> {
    let QuantumGeometry::Torus { n, .. } = system.geometry else {
        return Err(Error::InvalidParameter(
            "Harper unitary needs a torus system".into(),
        ));
    };
    let nk = n as f64 * k;
    let qs = system.positions().expect("torus");
    let ps = system.momenta().expect("torus");
    let f_phase: Vec<C64> = qs
        .iter()
        .map(|&q| C64::from_polar(1.0, -nk * (TAU * q).cos()))
        .collect();
    let g_phase: Vec<C64> = ps
        .iter()
        .map(|&p| C64::from_polar(1.0, -nk * (TAU * p).cos()))
        .collect();
    Ok(with_unitary(
        system,
        compose_kicks(system, &f_phase, &g_phase)?,
    ))
}

fn compose_kicks(system: &QuantumSystem, f_phase: &[C64], g_phase: &[C64]) -> Result<Array2<C64>> {
    let f = fourier_kernel(system)?;
    let n = f.nrows();
    // diag(f) · F · diag(g) · F†
    let left = Array2::from_shape_fn((n, n), |(i, m)| f_phase[i] * f[[i, m]] * g_phase[m]);
    Ok(left.dot(&adjoint(&f)))
}

fn with_unitary(system: &QuantumSystem, u: Array2<C64>) -> QuantumSystem {
    QuantumSystem {
        geometry: system.geometry,
        unitary: Some(Unitary::dense(u)),
    }
}

/// Number-basis truncation `ceil(|α|² + 12|α| + 20)` for amplitudes up to
/// `alpha_max`.
pub fn oscillator_dimension(alpha_max: f64) -> usize {
    let a = alpha_max.abs();
    (a * a + 12.0 * a + 20.0).ceil() as usize
}

/// `U = exp(-iτ(n + ½))` on the first `dim` number states.
pub fn oscillator_unitary(dim: usize, tau: f64, hbar: f64) -> Result<QuantumSystem> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "truncation must be at least 2, got {dim}"
        )));
    }
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let phases = Array1::from_shape_fn(dim, |n| C64::from_polar(1.0, -tau * (n as f64 + 0.5)));
    Ok(QuantumSystem {
        geometry: QuantumGeometry::Plane { dim, hbar },
        unitary: Some(Unitary::Diagonal(phases)),
    })
}

/// Oscillator system whose truncation holds every coherent state with
/// amplitude up to `alpha_max` to a tail population below `1e-12`.
pub fn oscillator_system(alpha_max: f64, tau: f64, hbar: f64) -> Result<QuantumSystem> {
    let dim = oscillator_dimension(alpha_max);
    let tail = super::coherent_tail(alpha_max, dim);
    if tail >= 1e-12 {
        return Err(Error::Truncation {
            dimension: dim,
            tail,
        });
    }
    oscillator_unitary(dim, tau, hbar)
}
