use ndarray::{Array1, Array2, Axis};

use super::coherent::coherent_tail;
use super::system::adjoint;
use super::{coherent_matrix, coherent_state, QuantumGeometry, QuantumSystem};
use crate::classical::PhaseDensity;
use crate::field::PhaseSpaceGeometry;
use crate::{Error, PhasePoint, Result, C64};

/// Relative weight below which grid points are left out of the diagonal
/// coherent-state sum.
pub const WEIGHT_CUTOFF: f64 = 1e-16;

/// Grid points per block when accumulating `A A†`.
const CHUNK: usize = 2048;

/// Hermitian operator on a quantum system.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    pub geometry: QuantumGeometry,
    pub matrix: Array2<C64>,
}

/// Ket on a quantum system.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub geometry: QuantumGeometry,
    pub psi: Array1<C64>,
}

impl StateVector {
    pub fn coherent(system: &QuantumSystem, x: PhasePoint) -> Result<Self> {
        Ok(Self {
            geometry: system.geometry,
            psi: coherent_state(system, x)?,
        })
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl DensityOperator {
    pub fn new(system: &QuantumSystem, matrix: Array2<C64>) -> Result<Self> {
        let d = system.dim();
        if matrix.dim() != (d, d) {
            return Err(Error::SystemMismatch(format!(
                "operator of shape {:?} on a {d}-dimensional space",
                matrix.dim()
            )));
        }
        Ok(Self {
            geometry: system.geometry,
            matrix,
        })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    /// `max |ρ - ρ†|`
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        err
    }

    pub fn hermitize(&mut self) {
        let h = (&self.matrix + &adjoint(&self.matrix)).mapv(|z| z * 0.5);
        self.matrix = h;
    }

    pub fn normalize_trace(&mut self) {
        let tr = self.trace().re;
        self.matrix.mapv_inplace(|z| z / tr);
    }
}

/// `|α(x)⟩⟨α(x)|`
pub fn pure_density(system: &QuantumSystem, x: PhasePoint) -> Result<DensityOperator> {
    let psi = coherent_state(system, x)?;
    let col = psi.view().insert_axis(Axis(1));
    let m = col.dot(&col.t().mapv(|z| z.conj()));
    DensityOperator::new(system, m)
}

/// Diagonal coherent-state construction
/// `ρ̂ = Σ_ij ρ₀(x_ij) |α(x_ij)⟩⟨α(x_ij)| Δ²`, Hermitized and scaled to unit
/// trace.
pub fn p_rep_density(
    system: &QuantumSystem,
    rho0: &dyn PhaseDensity,
    grid: &PhaseSpaceGeometry,
) -> Result<DensityOperator> {
    grid.check_resolution(system.hbar().sqrt() / 4.0)?;
    let area = grid.cell_area();
    let weighted: Vec<(PhasePoint, f64)> = grid.nodes().map(|x| (x, rho0.eval(x) * area)).collect();
    let w_max = weighted.iter().map(|(_, w)| *w).fold(0.0, f64::max);
    if !(w_max > 0.0) {
        return Err(Error::InvalidParameter(
            "initial distribution vanishes on the grid".into(),
        ));
    }
    let kept: Vec<(PhasePoint, f64)> = weighted
        .into_iter()
        .filter(|(_, w)| *w >= WEIGHT_CUTOFF * w_max)
        .collect();

    if let QuantumGeometry::Plane { dim, hbar } = system.geometry {
        let alpha_max =
            kept.iter().map(|(x, _)| x.norm()).fold(0.0, f64::max) / (2.0 * hbar).sqrt();
        let tail = coherent_tail(alpha_max, dim);
        if tail >= 1e-12 {
            return Err(Error::Truncation {
                dimension: dim,
                tail,
            });
        }
    }

    let d = system.dim();
    let mut acc: Array2<C64> = Array2::zeros((d, d));
    for block in kept.chunks(CHUNK) {
        let points: Vec<PhasePoint> = block.iter().map(|(x, _)| *x).collect();
        let mut a = coherent_matrix(system, &points);
        for (mut col, (_, w)) in a.columns_mut().into_iter().zip(block) {
            let s = w.sqrt();
            col.mapv_inplace(|z| z * s);
        }
        acc = acc + a.dot(&adjoint(&a));
    }
    let mut rho = DensityOperator::new(system, acc)?;
    rho.hermitize();
    rho.normalize_trace();
    Ok(rho)
}

/// `ρ̂ ← U ρ̂ U†`
pub fn superop_step(system: &QuantumSystem, rho: &DensityOperator) -> Result<DensityOperator> {
    if !same_space(system.geometry, rho.geometry) {
        return Err(Error::SystemMismatch(
            "operator belongs to a different system".into(),
        ));
    }
    let u = system.unitary()?;
    Ok(DensityOperator {
        geometry: rho.geometry,
        matrix: u.conjugate(&rho.matrix),
    })
}

/// `(ρ̂|σ̂) = Tr(ρ̂†σ̂) / (2πħ)`
pub fn op_inner(
    system: &QuantumSystem,
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<C64> {
    if !same_space(rho.geometry, sigma.geometry) || !same_space(system.geometry, rho.geometry) {
        return Err(Error::SystemMismatch(
            "operators live on different systems".into(),
        ));
    }
    let s: C64 = rho
        .matrix
        .iter()
        .zip(sigma.matrix.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(s * system.inner_scale())
}

fn same_space(a: QuantumGeometry, b: QuantumGeometry) -> bool {
    a == b
}
