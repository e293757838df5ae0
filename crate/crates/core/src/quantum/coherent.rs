use std::f64::consts::TAU;

use ndarray::{Array1, Array2};

use super::{QuantumGeometry, QuantumSystem};
use crate::{Error, PhasePoint, Result, C64};

/// Lattice images kept on each side in the periodized torus wavepacket.
pub const TORUS_IMAGES: i32 = 3;

/// Number-state population beyond `dim - 1` of a coherent state with
/// amplitude `|α| = alpha_abs`.
pub fn coherent_tail(alpha_abs: f64, dim: usize) -> f64 {
    let a2 = alpha_abs * alpha_abs;
    if a2 == 0.0 {
        return if dim == 0 { 1.0 } else { 0.0 };
    }
    let ln_a2 = a2.ln();
    let mut ln_fact = (1..=dim).map(|k| (k as f64).ln()).sum::<f64>();
    let mut tail = 0.0;
    let mut n = dim;
    loop {
        let ln_p = -a2 + n as f64 * ln_a2 - ln_fact;
        let p = ln_p.exp();
        tail += p;
        n += 1;
        ln_fact += (n as f64).ln();
        // Past the Poisson mode terms decay at least geometrically.
        if n as f64 > a2 + 1.0 && (p < 1e-30 * tail.max(1e-300) || p == 0.0) {
            break;
        }
        if n > dim + 100_000 {
            break;
        }
    }
    tail
}

pub(crate) struct PlaneCoefficients {
    half_ln_fact: Vec<f64>,
    hbar: f64,
}

impl PlaneCoefficients {
    pub(crate) fn new(dim: usize, hbar: f64) -> Self {
        let mut half_ln_fact = Vec::with_capacity(dim);
        let mut acc = 0.0;
        for n in 0..dim {
            if n > 0 {
                acc += (n as f64).ln();
            }
            half_ln_fact.push(0.5 * acc);
        }
        Self { half_ln_fact, hbar }
    }

    /// Truncated, unnormalized `⟨n|α⟩ = e^{-|α|²/2} αⁿ / √n!`.
    pub(crate) fn fill(&self, x: PhasePoint, out: &mut [C64]) {
        let scale = (2.0 * self.hbar).sqrt().recip();
        let alpha = C64::new(x.q * scale, x.p * scale);
        let r = alpha.norm();
        if r == 0.0 {
            out.fill(C64::new(0.0, 0.0));
            out[0] = C64::new(1.0, 0.0);
            return;
        }
        let ln_r = r.ln();
        let theta = alpha.arg();
        let base = -0.5 * r * r;
        for (n, o) in out.iter_mut().enumerate() {
            let ln_mag = base + n as f64 * ln_r - self.half_ln_fact[n];
            *o = if ln_mag < -745.0 {
                C64::new(0.0, 0.0)
            } else {
                C64::from_polar(ln_mag.exp(), n as f64 * theta)
            };
        }
    }
}

pub(crate) struct TorusCoefficients {
    positions: Vec<f64>,
    hbar: f64,
    pbar: f64,
}

impl TorusCoefficients {
    pub(crate) fn new(system: &QuantumSystem) -> Self {
        let QuantumGeometry::Torus { pbar, .. } = system.geometry else {
            unreachable!("torus coefficients on a plane system")
        };
        Self {
            positions: system.positions().expect("torus"),
            hbar: system.hbar(),
            pbar,
        }
    }

    /// Normalized periodized wavepacket
    /// `ψ(q_n) ∝ Σ_j exp(-(q_n + j - q)²/2ħ) exp(ip(q_n + j)/ħ) exp(-i2πp̄j)`.
    pub(crate) fn fill(&self, x: PhasePoint, out: &mut [C64]) {
        let two_h = 2.0 * self.hbar;
        let mut norm2 = 0.0;
        for (o, &qn) in out.iter_mut().zip(&self.positions) {
            let mut acc = C64::new(0.0, 0.0);
            for j in -TORUS_IMAGES..=TORUS_IMAGES {
                let y = qn + j as f64;
                let e = -(y - x.q).powi(2) / two_h;
                if e < -745.0 {
                    continue;
                }
                let phase = x.p * y / self.hbar - TAU * self.pbar * j as f64;
                acc += C64::from_polar(e.exp(), phase);
            }
            norm2 += acc.norm_sqr();
            *o = acc;
        }
        let inv = norm2.sqrt().recip();
        for o in out.iter_mut() {
            *o *= inv;
        }
    }
}

/// Columns `|α(x_i)⟩` in the working basis. Torus states are normalized;
/// plane states are the exact truncated number-basis components.
pub fn coherent_matrix(system: &QuantumSystem, points: &[PhasePoint]) -> Array2<C64> {
    let dim = system.dim();
    let mut out = Array2::zeros((points.len(), dim));
    match system.geometry {
        QuantumGeometry::Plane { hbar, .. } => {
            let coeffs = PlaneCoefficients::new(dim, hbar);
            for (mut row, &x) in out.rows_mut().into_iter().zip(points) {
                coeffs.fill(x, row.as_slice_mut().expect("standard layout"));
            }
        }
        QuantumGeometry::Torus { .. } => {
            let coeffs = TorusCoefficients::new(system);
            for (mut row, &x) in out.rows_mut().into_iter().zip(points) {
                coeffs.fill(x, row.as_slice_mut().expect("standard layout"));
            }
        }
    }
    out.reversed_axes()
}

/// Normalized coherent state at `x`. On the plane the truncation must hold
/// the state to a tail population below `1e-12`.
pub fn coherent_state(system: &QuantumSystem, x: PhasePoint) -> Result<Array1<C64>> {
    if let QuantumGeometry::Plane { dim, hbar } = system.geometry {
        let alpha = x.norm() / (2.0 * hbar).sqrt();
        let tail = coherent_tail(alpha, dim);
        if tail >= 1e-12 {
            return Err(Error::Truncation {
                dimension: dim,
                tail,
            });
        }
    }
    let mut psi = coherent_matrix(system, &[x]).column(0).to_owned();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.mapv_inplace(|z| z / norm);
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{build_torus_system, oscillator_unitary};

    fn overlap2(a: &Array1<C64>, b: &Array1<C64>) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            .norm_sqr()
    }

    #[test]
    fn plane_overlap_is_gaussian() {
        let hbar = 2f64.powi(-5);
        let s = oscillator_unitary(120, 0.1, hbar).unwrap();
        let x = PhasePoint::new(0.3, -0.2);
        let y = PhasePoint::new(0.1, 0.05);
        let a = coherent_state(&s, x).unwrap();
        let b = coherent_state(&s, y).unwrap();
        let d2 = (x.q - y.q).powi(2) + (x.p - y.p).powi(2);
        assert!((overlap2(&a, &b) / (-d2 / (2.0 * hbar)).exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn torus_overlap_is_gaussian() {
        let s = build_torus_system(256, 0.5, 0.0).unwrap();
        let hbar = s.hbar();
        let x = PhasePoint::new(0.4, 0.5);
        for d in [0.01, 0.03, 0.05, 0.08] {
            let y = PhasePoint::new(0.4 + d, 0.5 - 0.5 * d);
            let want = (-(1.25 * d * d) / (2.0 * hbar)).exp();
            let got = overlap2(
                &coherent_state(&s, x).unwrap(),
                &coherent_state(&s, y).unwrap(),
            );
            assert!((got / want - 1.0).abs() < 1e-6, "d={d}: {got} vs {want}");
        }
    }

    #[test]
    fn states_are_normalized() {
        let s = build_torus_system(64, 0.5, 0.0).unwrap();
        let psi = coherent_state(&s, PhasePoint::new(0.95, 0.02)).unwrap();
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn short_truncation_is_rejected() {
        let s = oscillator_unitary(20, 0.1, 2f64.powi(-7)).unwrap();
        let err = coherent_state(&s, PhasePoint::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn tail_matches_direct_sum() {
        let a: f64 = 2.5;
        let direct: f64 = (0..6)
            .map(|n| {
                let ln_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
                (-a * a + 2.0 * n as f64 * a.ln() - ln_fact).exp()
            })
            .sum();
        assert!((coherent_tail(a, 6) - (1.0 - direct)).abs() < 1e-14);
    }
}
