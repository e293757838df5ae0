use std::f64::consts::TAU;
use std::fmt::Debug;

use crate::field::GeometryKind;
use crate::{Error, PhasePoint, Result};

/// Kick functions of a map of the form
///
/// ```text
/// q' = q + g'(p)
/// p' = p - f'(q')
/// ```
pub trait KickedForm {
    fn f(&self, q: f64) -> f64;
    fn g(&self, p: f64) -> f64;
    fn f_prime(&self, q: f64) -> f64;
    fn g_prime(&self, p: f64) -> f64;
    fn f_second(&self, q: f64) -> f64;
    fn g_second(&self, p: f64) -> f64;
}

/// Invertible area-preserving map of the plane or the unit torus.
pub trait AreaPreservingMap: Debug + Send + Sync {
    fn name(&self) -> &str;

    fn forward(&self, x: PhasePoint) -> PhasePoint;

    fn inverse(&self, x: PhasePoint) -> PhasePoint;

    fn domain(&self) -> GeometryKind;

    fn kicks(&self) -> Option<&dyn KickedForm> {
        None
    }

    /// Kick data or `MissingKickData`.
    fn require_kicks(&self) -> Result<&dyn KickedForm> {
        self.kicks()
            .ok_or_else(|| Error::MissingKickData(self.name().to_string()))
    }
}

pub fn kicked_forward(k: &dyn KickedForm, x: PhasePoint) -> PhasePoint {
    let q = x.q + k.g_prime(x.p);
    let p = x.p - k.f_prime(q);
    PhasePoint::new(q, p)
}

pub fn kicked_inverse(k: &dyn KickedForm, x: PhasePoint) -> PhasePoint {
    let p = x.p + k.f_prime(x.q);
    let q = x.q - k.g_prime(p);
    PhasePoint::new(q, p)
}

/// Jacobian `∂(q', p') / ∂(q, p)` of the forward step at `x`.
pub fn kicked_jacobian(k: &dyn KickedForm, x: PhasePoint) -> [[f64; 2]; 2] {
    let g2 = k.g_second(x.p);
    let f2 = k.f_second(x.q + k.g_prime(x.p));
    [[1.0, g2], [-f2, 1.0 - f2 * g2]]
}

/// Symplectic-Euler harmonic oscillator, `f(q) = τq²/2`, `g(p) = τp²/2`.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorMap {
    pub tau: f64,
}

pub fn oscillator_map(tau: f64) -> Result<OscillatorMap> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "oscillator step tau must be positive, got {tau}"
        )));
    }
    Ok(OscillatorMap { tau })
}

impl OscillatorMap {
    /// Rotation angle per step of the linear map, `arccos(1 - τ²/2)`.
    pub fn rotation_angle(&self) -> f64 {
        (1.0 - self.tau * self.tau / 2.0).acos()
    }
}

impl KickedForm for OscillatorMap {
    fn f(&self, q: f64) -> f64 {
        0.5 * self.tau * q * q
    }
    fn g(&self, p: f64) -> f64 {
        0.5 * self.tau * p * p
    }
    fn f_prime(&self, q: f64) -> f64 {
        self.tau * q
    }
    fn g_prime(&self, p: f64) -> f64 {
        self.tau * p
    }
    fn f_second(&self, _q: f64) -> f64 {
        self.tau
    }
    fn g_second(&self, _p: f64) -> f64 {
        self.tau
    }
}

impl AreaPreservingMap for OscillatorMap {
    fn name(&self) -> &str {
        "oscillator"
    }
    fn forward(&self, x: PhasePoint) -> PhasePoint {
        kicked_forward(self, x)
    }
    fn inverse(&self, x: PhasePoint) -> PhasePoint {
        kicked_inverse(self, x)
    }
    fn domain(&self) -> GeometryKind {
        GeometryKind::Plane
    }
    fn kicks(&self) -> Option<&dyn KickedForm> {
        Some(self)
    }
}

/// Harper map on the unit torus, `f(q) = (k/2π) cos 2πq`,
/// `g(p) = (k/2π) cos 2πp`.
#[derive(Debug, Clone, Copy)]
pub struct HarperMap {
    pub k: f64,
}

pub fn harper_map(k: f64) -> Result<HarperMap> {
    if !k.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Harper kick strength must be finite, got {k}"
        )));
    }
    Ok(HarperMap { k })
}

impl KickedForm for HarperMap {
    fn f(&self, q: f64) -> f64 {
        self.k / TAU * (TAU * q).cos()
    }
    fn g(&self, p: f64) -> f64 {
        self.k / TAU * (TAU * p).cos()
    }
    fn f_prime(&self, q: f64) -> f64 {
        -self.k * (TAU * q).sin()
    }
    fn g_prime(&self, p: f64) -> f64 {
        -self.k * (TAU * p).sin()
    }
    fn f_second(&self, q: f64) -> f64 {
        -TAU * self.k * (TAU * q).cos()
    }
    fn g_second(&self, p: f64) -> f64 {
        -TAU * self.k * (TAU * p).cos()
    }
}

impl AreaPreservingMap for HarperMap {
    fn name(&self) -> &str {
        "harper"
    }
    fn forward(&self, x: PhasePoint) -> PhasePoint {
        kicked_forward(self, x).wrapped()
    }
    fn inverse(&self, x: PhasePoint) -> PhasePoint {
        kicked_inverse(self, x).wrapped()
    }
    fn domain(&self) -> GeometryKind {
        GeometryKind::Torus
    }
    fn kicks(&self) -> Option<&dyn KickedForm> {
        Some(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_step_from_unit_position() {
        let m = oscillator_map(0.1).unwrap();
        let x = m.forward(PhasePoint::new(1.0, 0.0));
        assert!((x.q - 1.0).abs() < 1e-15 && (x.p + 0.1).abs() < 1e-15);
    }

    #[test]
    fn oscillator_rejects_nonpositive_tau() {
        assert!(oscillator_map(0.0).is_err());
        assert!(oscillator_map(-0.1).is_err());
    }

    #[test]
    fn harper_step_reference_point() {
        let m = harper_map(0.05).unwrap();
        let x = m.forward(PhasePoint::new(0.5, 0.25));
        assert!((x.q - 0.45).abs() < 1e-12);
        assert!((x.p - (0.25 + 0.05 * (0.9 * std::f64::consts::PI).sin())).abs() < 1e-12);
        assert!((x.p - 0.265_450_8).abs() < 1e-7);
    }

    #[test]
    fn harper_without_kick_is_identity() {
        let m = harper_map(0.0).unwrap();
        let x = PhasePoint::new(0.3, 0.7);
        assert_eq!(m.forward(x), x);
        assert_eq!(m.inverse(x), x);
    }

    #[test]
    fn jacobian_is_unimodular() {
        let m = harper_map(0.3).unwrap();
        let j = kicked_jacobian(&m, PhasePoint::new(0.2, 0.9));
        assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] - 1.0).abs() < 1e-14);
    }
}
