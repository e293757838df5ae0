use ndarray::Array2;

use super::{QuantumGeometry, QuantumSystem};
use crate::{Result, C64};

/// Residuals of the two candidate discrete symmetries of a torus
/// propagator.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryReport {
    /// `max |UR - RU|` for the reflection `R|q_n⟩ = |-q_n mod 1⟩`, or
    /// `None` when `-q_n` does not fall back onto the position grid.
    pub reflection_commutator: Option<f64>,
    /// `max |U - Uᵀ|`: complex conjugation in the position basis maps `U`
    /// to `U†` exactly when `U` is symmetric.
    pub time_reversal_defect: f64,
}

pub fn symmetry_report(system: &QuantumSystem) -> Result<SymmetryReport> {
    let u = system.unitary()?.to_dense();
    let n = u.nrows();
    let reflection = match system.geometry {
        QuantumGeometry::Torus { qbar, .. } => reflection_index(n, qbar),
        QuantumGeometry::Plane { .. } => None,
    };
    let reflection_commutator = reflection.map(|r| {
        // (RU)_ij = U_{r(i) j}, (UR)_ij = U_{i r(j)}
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                err = err.max((u[[r[i], j]] - u[[i, r[j]]]).norm());
            }
        }
        err
    });
    Ok(SymmetryReport {
        reflection_commutator,
        time_reversal_defect: transpose_defect(&u),
    })
}

fn reflection_index(n: usize, qbar: f64) -> Option<Vec<usize>> {
    let twice = 2.0 * qbar;
    if (twice - twice.round()).abs() > 1e-12 {
        return None;
    }
    // -(i + q̄) ≡ (N - i - 2q̄) + q̄  (mod N)
    let shift = twice.round() as i64;
    Some(
        (0..n as i64)
            .map(|i| (-i - shift).rem_euclid(n as i64) as usize)
            .collect(),
    )
}

fn transpose_defect(u: &Array2<C64>) -> f64 {
    let n = u.nrows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            err = err.max((u[[i, j]] - u[[j, i]]).norm());
        }
    }
    err
}
