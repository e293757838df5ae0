//! One-step semiclassical transport of coherent states by kicked maps.
//!
//! For `q' = q + g'(p)`, `p' = p - f'(q')`, one step of `U†` carries a
//! coherent state at `z` to a squeezed state centred at `M⁻¹(z)` whose
//! Husimi function is a Gaussian with covariance `ħV`, where `V⁻¹` is
//! built from
//!
//! ```text
//! σ = 1 - g''f'' + i g''
//! δ = g'' - f'' + g''f''
//! ```
//!
//! with `f''` taken at `q` and `g''` at `p + f'(q)`. The forward step is
//! handled by the canonical rotation `(Q, P) = (p, -q)`, under which `U`
//! becomes a backward step with curvatures `F'' = -g''(p)`,
//! `G'' = -f''(q')`.

use std::fmt;

use crate::classical::{kicked_jacobian, AreaPreservingMap};
use crate::field::{GeometryKind, PhaseSpaceField, PhaseSpaceGeometry};
use crate::quantum::{coherent_state, husimi, husimi_at, HusimiSource, QuantumSystem};
use crate::{torus_displacement, Error, PhasePoint, Result, C64};

/// Tolerance of the `det V⁻¹` identity check.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;

/// Largest tolerated mass missing from the moment-fit grid.
pub const MASS_TOLERANCE: f64 = 1e-3;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub sigma: C64,
    pub delta: f64,
    pub f2: f64,
    pub g2: f64,
    /// `(q, p')` at which `f''` and `g''` were evaluated.
    pub point: PhasePoint,
}

impl SqueezeParams {
    pub fn from_curvatures(f2: f64, g2: f64, point: PhasePoint) -> Self {
        Self {
            sigma: C64::new(1.0 - g2 * f2, g2),
            delta: g2 - f2 + g2 * f2,
            f2,
            g2,
            point,
        }
    }
}

/// Squeezing of the backward step `U†` at `x`.
pub fn squeeze_params(map: &dyn AreaPreservingMap, x: PhasePoint) -> Result<SqueezeParams> {
    let k = map.require_kicks()?;
    let p1 = x.p + k.f_prime(x.q);
    Ok(SqueezeParams::from_curvatures(
        k.f_second(x.q),
        k.g_second(p1),
        PhasePoint::new(x.q, p1),
    ))
}

/// Squeezing of the forward step `U` at `x`, in the rotated frame
/// `(Q, P) = (p, -q)`.
pub fn forward_squeeze_params(map: &dyn AreaPreservingMap, x: PhasePoint) -> Result<SqueezeParams> {
    let k = map.require_kicks()?;
    let q1 = x.q + k.g_prime(x.p);
    Ok(SqueezeParams::from_curvatures(
        -k.g_second(x.p),
        -k.f_second(q1),
        PhasePoint::new(x.p, -q1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariancePrediction {
    pub v_inv: Mat2,
    pub v: Mat2,
    /// Eigenvalues of `V`, ascending.
    pub eigenvalues: [f64; 2],
    pub center: PhasePoint,
}

pub fn covariance_prediction(params: &SqueezeParams) -> Result<CovariancePrediction> {
    let s2 = params.sigma.norm_sqr();
    let d = params.delta;
    let denom = (s2 + 1.0).powi(2) + d * d;
    let pref = 2.0 / denom;
    let v_inv = [
        [pref * (s2 + 1.0 + d * d), -pref * s2 * d],
        [-pref * s2 * d, pref * s2 * (s2 + 1.0)],
    ];
    let det = det2(&v_inv);
    let expected = 4.0 * s2 / denom;
    let relative_error = (det - expected).abs() / expected.abs();
    if !(relative_error <= DETERMINANT_TOLERANCE) {
        return Err(Error::NumericalSingularity { relative_error });
    }
    let v = inverse2(&v_inv);
    Ok(CovariancePrediction {
        v_inv,
        v,
        eigenvalues: sym_eigenvalues(&v),
        center: params.point,
    })
}

/// `(S Sᵀ + I) / 2`: Husimi covariance, in units of `ħ`, of a coherent
/// state pushed through a linear map with Jacobian `S`.
pub fn linearized_covariance(s: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = 0.5
                * ((0..2).map(|k| s[i][k] * s[j][k]).sum::<f64>() + if i == j { 1.0 } else { 0.0 });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `U` against `M`.
    Forward,
    /// `U†` against `M⁻¹`.
    Backward,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        })
    }
}

/// Moment fit of an evolved coherent state against its predictions.
/// Covariances are in absolute units (already multiplied by `ħ`).
#[derive(Debug, Clone)]
pub struct OneStepReport {
    pub direction: Direction,
    pub start: PhasePoint,
    pub hbar: f64,
    pub grid: PhaseSpaceGeometry,
    pub mass: f64,
    pub classical_image: PhasePoint,
    pub fitted_mean: PhasePoint,
    /// Distance between fitted mean and classical image, in grid cells.
    pub mean_offset_cells: f64,
    pub fitted_covariance: Mat2,
    pub params: SqueezeParams,
    pub prediction: CovariancePrediction,
    /// `ħV`
    pub husimi_target: Mat2,
    /// `ħ(V + I)`
    pub smoothed_target: Mat2,
    /// `ħ(SSᵀ + I)/2` with `S` the Jacobian of the step.
    pub linearized_target: Mat2,
}

impl OneStepReport {
    pub fn error_vs_husimi_target(&self) -> f64 {
        relative_frobenius(&self.fitted_covariance, &self.husimi_target)
    }

    pub fn error_vs_smoothed_target(&self) -> f64 {
        relative_frobenius(&self.fitted_covariance, &self.smoothed_target)
    }

    pub fn error_vs_linearized_target(&self) -> f64 {
        relative_frobenius(&self.fitted_covariance, &self.linearized_target)
    }

    /// Plain `key = value` block.
    pub fn to_key_values(&self) -> String {
        let m = |a: &Mat2| {
            format!(
                "{:.10e} {:.10e} {:.10e} {:.10e}",
                a[0][0], a[0][1], a[1][0], a[1][1]
            )
        };
        let mut s = String::new();
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        kv("direction", self.direction.to_string());
        kv("start", format!("{} {}", self.start.q, self.start.p));
        kv("hbar", format!("{:e}", self.hbar));
        kv("grid_kind", self.grid.kind.to_string());
        kv("grid_m", self.grid.m.to_string());
        kv(
            "grid_window",
            format!(
                "{} {} {} {}",
                self.grid.q_lo, self.grid.q_hi, self.grid.p_lo, self.grid.p_hi
            ),
        );
        kv("mass", format!("{:.12}", self.mass));
        kv(
            "classical_image",
            format!(
                "{:.12} {:.12}",
                self.classical_image.q, self.classical_image.p
            ),
        );
        kv(
            "fitted_mean",
            format!("{:.12} {:.12}", self.fitted_mean.q, self.fitted_mean.p),
        );
        kv(
            "mean_offset_cells",
            format!("{:.6}", self.mean_offset_cells),
        );
        kv(
            "squeeze_sigma",
            format!("{:.12} {:.12}", self.params.sigma.re, self.params.sigma.im),
        );
        kv("squeeze_delta", format!("{:.12}", self.params.delta));
        kv("v", m(&self.prediction.v));
        kv(
            "v_eigenvalues",
            format!(
                "{:.12} {:.12}",
                self.prediction.eigenvalues[0], self.prediction.eigenvalues[1]
            ),
        );
        kv("fitted_covariance", m(&self.fitted_covariance));
        kv("target_hbar_v", m(&self.husimi_target));
        kv("target_hbar_v_plus_i", m(&self.smoothed_target));
        kv("target_linearized", m(&self.linearized_target));
        kv(
            "rel_error_hbar_v",
            format!("{:.6e}", self.error_vs_husimi_target()),
        );
        kv(
            "rel_error_hbar_v_plus_i",
            format!("{:.6e}", self.error_vs_smoothed_target()),
        );
        kv(
            "rel_error_linearized",
            format!("{:.6e}", self.error_vs_linearized_target()),
        );
        s
    }
}

/// Default moment-fit grid: the unit torus at `M = N`, or on the plane a
/// square window of half-width `8√ħ·(1 + |S|)` around the classical image
/// with `M = 128`.
pub fn default_fit_grid(
    system: &QuantumSystem,
    center: PhasePoint,
    stretch: f64,
) -> Result<PhaseSpaceGeometry> {
    match system.geometry {
        crate::quantum::QuantumGeometry::Torus { n, .. } => PhaseSpaceGeometry::torus(n),
        crate::quantum::QuantumGeometry::Plane { hbar, .. } => {
            let half = 8.0 * hbar.sqrt() * (1.0 + stretch);
            PhaseSpaceGeometry::plane(
                center.q - half,
                center.q + half,
                center.p - half,
                center.p + half,
                128,
            )
        }
    }
}

/// Evolves `|α(x)⟩` by one step in `direction`, fits the Husimi moments
/// and compares them with the classical image and covariance predictions.
pub fn one_step_check(
    system: &QuantumSystem,
    map: &dyn AreaPreservingMap,
    x: PhasePoint,
    direction: Direction,
    grid: Option<PhaseSpaceGeometry>,
) -> Result<OneStepReport> {
    let kicks = map.require_kicks()?;
    let hbar = system.hbar();
    let u = system.unitary()?;
    let psi = coherent_state(system, x)?;
    let (evolved, image, jac, params) = match direction {
        Direction::Forward => {
            let j = kicked_jacobian(kicks, x);
            (
                u.apply(&psi),
                map.forward(x),
                j,
                forward_squeeze_params(map, x)?,
            )
        }
        Direction::Backward => {
            let image = map.inverse(x);
            let j = inverse2(&kicked_jacobian(kicks, image));
            (u.apply_adjoint(&psi), image, j, squeeze_params(map, x)?)
        }
    };
    let mut prediction = covariance_prediction(&params)?;
    let v_qp = match direction {
        Direction::Backward => prediction.v,
        Direction::Forward => rotate_back(&prediction.v),
    };
    prediction.center = image;

    let stretch = jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let grid = match grid {
        Some(g) => g,
        None => default_fit_grid(system, image, stretch)?,
    };
    let field = husimi(system, HusimiSource::Ket(&evolved), &grid);
    let (mass, mean, cov) = moments(&field, image)?;
    let offset = match grid.kind {
        GeometryKind::Torus => torus_displacement(mean, image),
        GeometryKind::Plane => PhasePoint::new(mean.q - image.q, mean.p - image.p),
    };
    let lin = linearized_covariance(&jac);
    let scale = |a: &Mat2, add: f64| {
        [
            [hbar * (a[0][0] + add), hbar * a[0][1]],
            [hbar * a[1][0], hbar * (a[1][1] + add)],
        ]
    };
    Ok(OneStepReport {
        direction,
        start: x,
        hbar,
        grid,
        mass,
        classical_image: image,
        fitted_mean: mean,
        mean_offset_cells: offset.norm() / grid.spacing(),
        fitted_covariance: cov,
        params,
        prediction,
        husimi_target: scale(&v_qp, 0.0),
        smoothed_target: scale(&v_qp, 1.0),
        linearized_target: scale(&lin, 0.0),
    })
}

/// `∫ |H_{UρU†}(z) - H_ρ(M⁻¹(z))| dz` for the coherent projector at `x`.
pub fn one_step_l1(
    system: &QuantumSystem,
    map: &dyn AreaPreservingMap,
    x: PhasePoint,
    grid: &PhaseSpaceGeometry,
) -> Result<f64> {
    let psi = coherent_state(system, x)?;
    let evolved = system.unitary()?.apply(&psi);
    let h1 = husimi(system, HusimiSource::Ket(&evolved), grid);
    let pulled = PhaseSpaceField::from_fn(*grid, |z| {
        husimi_at(system, HusimiSource::Ket(&psi), map.inverse(z))
    });
    h1.l1_distance(&pulled)
}

/// Mass, mean and covariance of a field; torus displacements are taken
/// relative to `reference` with wrap.
pub fn moments(field: &PhaseSpaceField, reference: PhasePoint) -> Result<(f64, PhasePoint, Mat2)> {
    let g = field.geometry();
    let area = g.cell_area();
    let disp = |x: PhasePoint| match g.kind {
        GeometryKind::Torus => torus_displacement(x, reference),
        GeometryKind::Plane => PhasePoint::new(x.q - reference.q, x.p - reference.p),
    };
    let mut mass = 0.0;
    let mut s = [0.0; 2];
    for (x, &h) in g.nodes().zip(field.values().iter()) {
        let d = disp(x);
        let w = h * area;
        mass += w;
        s[0] += w * d.q;
        s[1] += w * d.p;
    }
    let lost = (1.0 - mass).abs();
    if !(lost <= MASS_TOLERANCE) {
        return Err(Error::FitFailure { lost_mass: lost });
    }
    let mu = [s[0] / mass, s[1] / mass];
    let mut c = [[0.0; 2]; 2];
    for (x, &h) in g.nodes().zip(field.values().iter()) {
        let d = disp(x);
        let e = [d.q - mu[0], d.p - mu[1]];
        let w = h * area / mass;
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] += w * e[i] * e[j];
            }
        }
    }
    let mut mean = PhasePoint::new(reference.q + mu[0], reference.p + mu[1]);
    if g.kind == GeometryKind::Torus {
        mean = mean.wrapped();
    }
    Ok((mass, mean, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
}

/// `C/√ħ` for stable orbits, `C|ln ħ|/rate` for unstable ones.
pub fn ehrenfest_estimate(hbar: f64, stability: Stability, rate: f64, c: f64) -> Result<f64> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    match stability {
        Stability::Stable => Ok(c / hbar.sqrt()),
        Stability::Unstable => {
            if !(rate > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "instability rate must be positive, got {rate}"
                )));
            }
            Ok(c * hbar.ln().abs() / rate)
        }
    }
}

pub fn relative_frobenius(a: &Mat2, b: &Mat2) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            num += (a[i][j] - b[i][j]).powi(2);
            den += b[i][j].powi(2);
        }
    }
    (num / den).sqrt()
}

fn det2(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn inverse2(a: &Mat2) -> Mat2 {
    let d = det2(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

fn sym_eigenvalues(a: &Mat2) -> [f64; 2] {
    let m = 0.5 * (a[0][0] + a[1][1]);
    let r = (0.25 * (a[0][0] - a[1][1]).powi(2) + a[0][1] * a[1][0])
        .max(0.0)
        .sqrt();
    [m - r, m + r]
}

/// Covariance in `(Q, P) = (p, -q)` mapped back to `(q, p)`.
fn rotate_back(v: &Mat2) -> Mat2 {
    [[v[1][1], -v[0][1]], [-v[1][0], v[0][0]]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{harper_map, oscillator_map};

    #[test]
    fn free_case() {
        let p = SqueezeParams::from_curvatures(0.0, 0.0, PhasePoint::new(0.0, 0.0));
        assert_eq!(p.sigma, C64::new(1.0, 0.0));
        assert_eq!(p.delta, 0.0);
        let c = covariance_prediction(&p).unwrap();
        assert_eq!(c.v_inv, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(c.v, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(c.eigenvalues, [1.0, 1.0]);
    }

    #[test]
    fn unit_momentum_curvature() {
        let p = SqueezeParams::from_curvatures(0.0, 1.0, PhasePoint::new(0.0, 0.0));
        assert_eq!(p.sigma, C64::new(1.0, 1.0));
        assert_eq!(p.delta, 1.0);
    }

    #[test]
    fn harper_at_origin() {
        let m = harper_map(0.05).unwrap();
        let p = squeeze_params(&m, PhasePoint::new(0.0, 0.0)).unwrap();
        let c = -std::f64::consts::TAU * 0.05;
        assert!((p.f2 - c).abs() < 1e-15 && (p.g2 - c).abs() < 1e-15);
        assert!((p.sigma.re - (1.0 - 0.098_696_044_010_893_58)).abs() < 1e-12);
        assert!((p.sigma.im + 0.314_159_265_358_979_3).abs() < 1e-12);
        assert!((p.delta - 0.098_696_044_010_893_58).abs() < 1e-12);
    }

    #[derive(Debug)]
    struct Rotation;
    impl AreaPreservingMap for Rotation {
        fn name(&self) -> &str {
            "rotation"
        }
        fn forward(&self, x: PhasePoint) -> PhasePoint {
            PhasePoint::new(x.p, -x.q)
        }
        fn inverse(&self, x: PhasePoint) -> PhasePoint {
            PhasePoint::new(-x.p, x.q)
        }
        fn domain(&self) -> GeometryKind {
            GeometryKind::Plane
        }
    }

    #[test]
    fn maps_without_kicks_are_rejected() {
        let err = squeeze_params(&Rotation, PhasePoint::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::MissingKickData(_)));
    }

    #[test]
    fn oscillator_prediction_is_near_identity() {
        let m = oscillator_map(0.1).unwrap();
        let c =
            covariance_prediction(&squeeze_params(&m, PhasePoint::new(1.0, 0.0)).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((c.v[i][j] - want).abs() < 0.06);
            }
        }
    }

    #[test]
    fn linearized_covariance_of_identity() {
        assert_eq!(
            linearized_covariance(&[[1.0, 0.0], [0.0, 1.0]]),
            [[1.0, 0.0], [0.0, 1.0]]
        );
    }

    #[test]
    fn ehrenfest_scalings() {
        let s1 = ehrenfest_estimate(0.01, Stability::Stable, 0.0, 1.0).unwrap();
        let s2 = ehrenfest_estimate(0.0025, Stability::Stable, 0.0, 1.0).unwrap();
        assert!((s2 / s1 - 2.0).abs() < 1e-12);
        let u1 = ehrenfest_estimate(0.01, Stability::Unstable, 0.7, 1.0).unwrap();
        let u2 = ehrenfest_estimate(1e-4, Stability::Unstable, 0.7, 1.0).unwrap();
        assert!((u2 / u1 - 2.0).abs() < 1e-12);
        assert_eq!(
            ehrenfest_estimate(1.0, Stability::Stable, 0.0, 1.0).unwrap(),
            1.0
        );
    }
}
