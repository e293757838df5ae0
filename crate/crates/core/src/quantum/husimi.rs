use ndarray::{Array1, Array2};

use super::{coherent_matrix, QuantumSystem};
use crate::field::{PhaseSpaceField, PhaseSpaceGeometry};
use crate::{PhasePoint, C64};

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub enum HusimiSource<'a> {
    Operator(&'a Array2<C64>),
    Ket(&'a Array1<C64>),
}

/// `H(x) = ⟨α(x)|ρ̂|α(x)⟩ / (2πħ)` on the nodes of `grid`. For a ket the
/// operator is `|ψ⟩⟨ψ|`. The real part is returned; for Hermitian
/// operators the imaginary part vanishes identically.
pub fn husimi(
    system: &QuantumSystem,
    source: HusimiSource<'_>,
    grid: &PhaseSpaceGeometry,
) -> PhaseSpaceField {
    let points: Vec<PhasePoint> = grid.nodes().collect();
    let values = husimi_points(system, source, &points);
    let m = grid.m;
    PhaseSpaceField::new(
        *grid,
        Array2::from_shape_vec((m, m), values).expect("one value per node"),
    )
    .expect("shape matches grid")
}

pub fn husimi_at(system: &QuantumSystem, source: HusimiSource<'_>, x: PhasePoint) -> f64 {
    husimi_points(system, source, &[x])[0]
}

fn husimi_points(
    system: &QuantumSystem,
    source: HusimiSource<'_>,
    points: &[PhasePoint],
) -> Vec<f64> {
    let scale = system.inner_scale();
    let mut out = Vec::with_capacity(points.len());
    for block in points.chunks(CHUNK) {
        let a = coherent_matrix(system, block);
        match source {
            HusimiSource::Operator(rho) => {
                let b = rho.dot(&a);
                for (ca, cb) in a.columns().into_iter().zip(b.columns()) {
                    let v: C64 = ca.iter().zip(cb.iter()).map(|(x, y)| x.conj() * y).sum();
                    out.push(v.re * scale);
                }
            }
            HusimiSource::Ket(psi) => {
                for ca in a.columns() {
                    let v: C64 = ca.iter().zip(psi.iter()).map(|(x, y)| x.conj() * y).sum();
                    out.push(v.norm_sqr() * scale);
                }
            }
        }
    }
    out
}
