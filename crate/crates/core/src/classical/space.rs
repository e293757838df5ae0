use crate::field::PhaseSpaceField;
use crate::krylov::InnerProductSpace;
use crate::{Error, Result, C64};

/// Midpoint-rule `L²` inner product `Σ f g Δ²`.
pub fn l2_inner(f: &PhaseSpaceField, g: &PhaseSpaceField) -> Result<f64> {
    if !f.geometry().matches(g.geometry()) {
        return Err(Error::GeometryMismatch);
    }
    let sum: f64 = f
        .values()
        .iter()
        .zip(g.values().iter())
        .map(|(a, b)| a * b)
        .sum();
    Ok(sum * f.geometry().cell_area())
}

/// Real phase-space fields with the `L²` inner product. All vectors must
/// share one geometry.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldSpace;

impl InnerProductSpace for FieldSpace {
    type Vector = PhaseSpaceField;

    fn inner(&self, u: &PhaseSpaceField, v: &PhaseSpaceField) -> C64 {
        C64::from(l2_inner(u, v).expect("fields of one Krylov space share a grid"))
    }

    fn axpy(&self, alpha: C64, x: &PhaseSpaceField, y: &mut PhaseSpaceField) {
        debug_assert!(alpha.im.abs() <= 1e-10 * alpha.re.abs().max(1.0));
        y.values_mut().scaled_add(alpha.re, x.values());
    }

    fn scale(&self, alpha: C64, x: &mut PhaseSpaceField) {
        let a = alpha.re;
        x.values_mut().mapv_inplace(|v| v * a);
    }
}
