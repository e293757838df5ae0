use std::f64::consts::TAU;
use std::fmt::Debug;

use crate::field::{GeometryKind, PhaseSpaceGeometry};
use crate::{Error, PhasePoint, Result};

/// Lattice images kept on each side in the periodized Gaussian.
pub const LATTICE_CUTOFF: i32 = 3;

/// Closed-form phase-space distribution.
pub trait PhaseDensity: Debug + Send + Sync {
    fn eval(&self, x: PhasePoint) -> f64;

    /// Smallest length scale, used by the grid resolution guard.
    fn width(&self) -> f64;

    /// Fails when the grid cannot resolve the density (`Δ > width / 8`).
    fn check_grid(&self, geometry: &PhaseSpaceGeometry) -> Result<()> {
        geometry.check_resolution(self.width() / 8.0)
    }
}

/// Isotropic normalized Gaussian, periodized on the torus.
#[derive(Debug, Clone, Copy)]
pub struct GaussianDensity {
    pub center: PhasePoint,
    pub sigma: f64,
    pub kind: GeometryKind,
}

impl GaussianDensity {
    pub fn new(center: PhasePoint, sigma: f64, kind: GeometryKind) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Gaussian width must be positive, got {sigma}"
            )));
        }
        Ok(Self {
            center,
            sigma,
            kind,
        })
    }

    pub fn plane(center: PhasePoint, sigma: f64) -> Result<Self> {
        Self::new(center, sigma, GeometryKind::Plane)
    }

    pub fn torus(center: PhasePoint, sigma: f64) -> Result<Self> {
        Self::new(center, sigma, GeometryKind::Torus)
    }

    pub fn peak(&self) -> f64 {
        (TAU * self.sigma * self.sigma).recip()
    }

    fn lattice_factor(&self, d: f64) -> f64 {
        let d = (d + 0.5).rem_euclid(1.0) - 0.5;
        let s2 = 2.0 * self.sigma * self.sigma;
        (-LATTICE_CUTOFF..=LATTICE_CUTOFF)
            .map(|n| {
                let e = d + n as f64;
                (-e * e / s2).exp()
            })
            .sum()
    }
}

impl PhaseDensity for GaussianDensity {
    fn eval(&self, x: PhasePoint) -> f64 {
        let dq = x.q - self.center.q;
        let dp = x.p - self.center.p;
        match self.kind {
            GeometryKind::Plane => {
                let s2 = 2.0 * self.sigma * self.sigma;
                self.peak() * (-(dq * dq + dp * dp) / s2).exp()
            }
            GeometryKind::Torus => self.peak() * self.lattice_factor(dq) * self.lattice_factor(dp),
        }
    }

    fn width(&self) -> f64 {
        self.sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhaseSpaceField;

    #[test]
    fn plane_peak_value() {
        let g = GaussianDensity::plane(PhasePoint::new(1.0, 0.0), 0.1).unwrap();
        assert!((g.eval(PhasePoint::new(1.0, 0.0)) - 15.915_494_309_189_533).abs() < 1e-12);
    }

    #[test]
    fn plane_density_integrates_to_one() {
        let g = GaussianDensity::plane(PhasePoint::new(0.2, -0.1), 0.1).unwrap();
        let geom = PhaseSpaceGeometry::square_window(1.0, 256).unwrap();
        g.check_grid(&geom).unwrap();
        let f = PhaseSpaceField::from_fn(geom, |x| g.eval(x));
        assert!((f.integral() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn torus_density_is_periodic() {
        let g = GaussianDensity::torus(PhasePoint::new(0.4, 0.5), 0.025).unwrap();
        let a = g.eval(PhasePoint::new(0.9, 0.5));
        let b = g.eval(PhasePoint::new(-0.1, 0.5));
        assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
        let geom = PhaseSpaceGeometry::torus(512).unwrap();
        g.check_grid(&geom).unwrap();
        let f = PhaseSpaceField::from_fn(geom, |x| g.eval(x));
        assert!((f.integral() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coarse_grid_fails_guard() {
        let g = GaussianDensity::torus(PhasePoint::new(0.4, 0.5), 0.025).unwrap();
        let geom = PhaseSpaceGeometry::torus(256).unwrap();
        assert!(matches!(g.check_grid(&geom), Err(Error::Resolution { .. })));
    }
}
