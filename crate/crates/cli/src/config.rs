//! Experiment configuration: a TOML document parsed into
//! [`ExperimentConfig`] and validated into a fully resolved [`RunConfig`].
//!
//! ```toml
//! system = "harper"             # oscillator | harper
//! mode = "quantum-liouville"    # classical | quantum-liouville | quantum-pure | quantum-ket
//! steps = 150
//! output = "runs/harper-n256"
//!
//! [map]
//! k = 0.05                      # tau = 0.1 for the oscillator
//!
//! [initial]
//! q0 = 0.4
//! p0 = 0.5
//! sigma = 0.025
//!
//! [quantum]
//! n = 256                       # torus dimension; the oscillator takes hbar
//! qbar = 0.5
//! pbar = 0.0
//!
//! [grid]
//! m = 512                       # nodes per side; window = half-width L on the plane
//!
//! [krylov]
//! tol = 1e-8
//! memory_budget_mb = 1024
//! streaming = false
//!
//! [portraits]
//! indices = [0, 1, 2, 5, 10]
//! m = 128
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use krylov_qc_core::classical::AreaPreservingMap;
use krylov_qc_core::field::{GeometryKind, PhaseSpaceGeometry};
use krylov_qc_core::krylov::KrylovOptions;
use krylov_qc_core::quantum::{
    build_torus_system, harper_unitary, kicked_unitary, oscillator_dimension, oscillator_unitary,
    QuantumMode, QuantumSystem, WEIGHT_CUTOFF,
};
use krylov_qc_core::PhasePoint;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::registry::{self, Backend, MapEntry};

/// Largest Hilbert-space dimension accepted without `streaming = true`.
pub const STREAMING_THRESHOLD: usize = 512;
/// Spill budget applied when streaming is requested without an explicit one.
pub const STREAMING_BUDGET_MB: usize = 256;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_PORTRAITS: [usize; 6] = [0, 1, 2, 5, 10, 20];
pub const DEFAULT_PORTRAIT_M: usize = 128;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub map: MapSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub quantum: QuantumSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub krylov: KrylovSection,
    #[serde(default)]
    pub portraits: PortraitSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    /// Number-basis truncation override for the oscillator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrylovSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_budget_mb: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub streaming: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortraitSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => {
                CliError::config(format!("config file {} not found", path.display()))
            }
            _ => CliError::io(path)(e),
        })?;
        Self::from_toml(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Validates and fills every default. `mode` is required only when
    /// `need_mode` is set.
    pub fn resolve(&self, need_mode: bool) -> Result<RunConfig> {
        let entry = registry::map_entry(&self.system).ok_or_else(|| {
            CliError::config(format!(
                "unknown system `{}` (known: {})",
                self.system,
                registry::names(registry::maps(), |m| m.name())
            ))
        })?;
        let d = entry.defaults();

        let backend = match (&self.mode, need_mode) {
            (Some(name), _) => Some(registry::backend(name).ok_or_else(|| {
                CliError::config(format!(
                    "unknown mode `{name}` (known: {})",
                    registry::names(registry::backends(), |b| b.name())
                ))
            })?),
            (None, true) => return Err(CliError::config("missing key `mode`")),
            (None, false) => None,
        };

        let (own, other) = match entry.parameter_key() {
            "tau" => (self.map.tau, self.map.k.map(|_| "k")),
            _ => (self.map.k, self.map.tau.map(|_| "tau")),
        };
        if let Some(key) = other {
            return Err(CliError::config(format!(
                "map.{key} does not apply to system `{}`",
                entry.name()
            )));
        }
        let parameter = own.unwrap_or(d.parameter);
        finite("map parameter", parameter)?;
        if entry.parameter_key() == "tau" && parameter <= 0.0 {
            return Err(CliError::config("map.tau must be positive"));
        }

        let steps = self.steps.unwrap_or(d.steps);
        let x0 = PhasePoint::new(
            self.initial.q0.unwrap_or(d.center.q),
            self.initial.p0.unwrap_or(d.center.p),
        );
        finite("initial.q0", x0.q)?;
        finite("initial.p0", x0.p)?;
        let sigma = self.initial.sigma.unwrap_or(d.sigma);
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(CliError::config("initial.sigma must be positive"));
        }

        let tol = self.krylov.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::config("krylov.tol must lie in (0, 1)"));
        }
        let streaming = self.krylov.streaming.unwrap_or(false);
        let memory_budget_mb = match (self.krylov.memory_budget_mb, streaming) {
            (Some(mb), _) => Some(mb),
            (None, true) => Some(STREAMING_BUDGET_MB),
            (None, false) => None,
        };

        let (grid, window) = resolve_grid(entry.geometry(), &self.grid, x0, sigma)?;

        let quantum = resolve_quantum(
            entry,
            &self.quantum,
            backend.is_some_and(|b| b.is_quantum()) || !need_mode,
        )?;
        if let Some(q) = &quantum {
            let dim = q.dimension(x0, sigma);
            if dim > STREAMING_THRESHOLD && !streaming {
                return Err(CliError::config(format!(
                    "Hilbert-space dimension {dim} exceeds {STREAMING_THRESHOLD}; set krylov.streaming = true"
                )));
            }
        }

        let portrait_indices = self
            .portraits
            .indices
            .clone()
            .unwrap_or_else(|| DEFAULT_PORTRAITS.to_vec());
        let portrait_m = self.portraits.m.unwrap_or(DEFAULT_PORTRAIT_M);
        if portrait_m < 2 {
            return Err(CliError::config("portraits.m must be at least 2"));
        }

        Ok(RunConfig {
            map: entry,
            backend,
            parameter,
            steps,
            x0,
            sigma,
            quantum,
            grid,
            window,
            tol,
            memory_budget_mb,
            streaming,
            portrait_indices,
            portrait_m,
            output: self.output.clone(),
        })
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(format!("{key} must be finite")))
    }
}

fn resolve_grid(
    kind: GeometryKind,
    section: &GridSection,
    x0: PhasePoint,
    sigma: f64,
) -> Result<(PhaseSpaceGeometry, Option<f64>)> {
    // Smallest resolution with spacing at most sigma/8; the torus rounds up
    // to a power of two.
    let min_nodes = |extent: f64| ((extent * 8.0 / sigma) * (1.0 - 1e-12)).ceil() as usize;
    match kind {
        GeometryKind::Plane => {
            let l = section.window.unwrap_or(x0.norm() + 8.0 * sigma);
            if !(l > 0.0 && l.is_finite()) {
                return Err(CliError::config("grid.window must be positive"));
            }
            let m = section.m.unwrap_or_else(|| min_nodes(2.0 * l).max(2));
            Ok((PhaseSpaceGeometry::square_window(l, m)?, Some(l)))
        }
        GeometryKind::Torus => {
            if section.window.is_some() {
                return Err(CliError::config(
                    "grid.window applies only to plane systems",
                ));
            }
            let m = section
                .m
                .unwrap_or_else(|| min_nodes(1.0).max(2).next_power_of_two());
            Ok((PhaseSpaceGeometry::torus(m)?, None))
        }
    }
}

fn resolve_quantum(
    entry: &dyn MapEntry,
    q: &QuantumSection,
    needed: bool,
) -> Result<Option<QuantumSetup>> {
    match entry.geometry() {
        GeometryKind::Torus => {
            if q.hbar.is_some() || q.dimension.is_some() {
                return Err(CliError::config(
                    "torus systems take quantum.n; hbar = 1/(2 pi n) is implied",
                ));
            }
            let Some(n) = q.n else {
                return if needed {
                    Err(CliError::config("quantum.n is required for torus systems"))
                } else {
                    Ok(None)
                };
            };
            let (qbar, pbar) = (q.qbar.unwrap_or(0.5), q.pbar.unwrap_or(0.0));
            if n < 2 {
                return Err(CliError::config("quantum.n must be at least 2"));
            }
            for (key, v) in [("quantum.qbar", qbar), ("quantum.pbar", pbar)] {
                if !(0.0..1.0).contains(&v) {
                    return Err(CliError::config(format!("{key} must lie in [0, 1)")));
                }
            }
            Ok(Some(QuantumSetup::Torus { n, qbar, pbar }))
        }
        GeometryKind::Plane => {
            if q.n.is_some() || q.qbar.is_some() || q.pbar.is_some() {
                return Err(CliError::config(
                    "plane systems take quantum.hbar, not torus keys",
                ));
            }
            let Some(hbar) = q.hbar else {
                return if needed {
                    Err(CliError::config(
                        "quantum.hbar is required for plane systems",
                    ))
                } else {
                    Ok(None)
                };
            };
            if !(hbar > 0.0 && hbar.is_finite()) {
                return Err(CliError::config("quantum.hbar must be positive"));
            }
            Ok(Some(QuantumSetup::Plane {
                hbar,
                dimension: q.dimension,
            }))
        }
    }
}

/// Quantum side of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantumSetup {
    Torus { n: usize, qbar: f64, pbar: f64 },
    Plane { hbar: f64, dimension: Option<usize> },
}

impl QuantumSetup {
    /// Largest coherent amplitude `|α|` carrying weight in the plane
    /// mixture: the centre distance plus the radius at which the Gaussian
    /// weight drops below the mixture cutoff.
    pub fn alpha_max(hbar: f64, x0: PhasePoint, sigma: f64) -> f64 {
        let radius = sigma * (2.0 * (1.0 / WEIGHT_CUTOFF).ln()).sqrt();
        (x0.norm() + radius + sigma) / (2.0 * hbar).sqrt()
    }

    pub fn dimension(&self, x0: PhasePoint, sigma: f64) -> usize {
        match *self {
            QuantumSetup::Torus { n, .. } => n,
            QuantumSetup::Plane { hbar, dimension } => {
                dimension.unwrap_or_else(|| oscillator_dimension(Self::alpha_max(hbar, x0, sigma)))
            }
        }
    }

    pub fn hbar(&self) -> f64 {
        match *self {
            QuantumSetup::Torus { n, .. } => 1.0 / (std::f64::consts::TAU * n as f64),
            QuantumSetup::Plane { hbar, .. } => hbar,
        }
    }
}

/// Validated configuration with every default in place.
#[derive(Clone)]
pub struct RunConfig {
    pub map: &'static dyn MapEntry,
    pub backend: Option<&'static dyn Backend>,
    pub parameter: f64,
    pub steps: usize,
    pub x0: PhasePoint,
    pub sigma: f64,
    pub quantum: Option<QuantumSetup>,
    pub grid: PhaseSpaceGeometry,
    pub window: Option<f64>,
    pub tol: f64,
    pub memory_budget_mb: Option<usize>,
    pub streaming: bool,
    pub portrait_indices: Vec<usize>,
    pub portrait_m: usize,
    pub output: Option<PathBuf>,
}

impl std::fmt::Debug for RunConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RunConfig")
            .field("system", &self.map.name())
            .field("mode", &self.backend.map(|b| b.name()))
            .field("parameter", &self.parameter)
            .field("steps", &self.steps)
            .field("x0", &self.x0)
            .field("sigma", &self.sigma)
            .field("quantum", &self.quantum)
            .field("grid", &self.grid)
            .finish_non_exhaustive()
    }
}

impl RunConfig {
    pub fn build_map(&self) -> Result<Box<dyn AreaPreservingMap>> {
        Ok(self.map.build(self.parameter)?)
    }

    pub fn krylov_options(&self) -> KrylovOptions {
        KrylovOptions::new(self.steps.max(1))
            .with_tol(self.tol)
            .with_memory_budget(self.memory_budget_mb.map(|mb| mb << 20))
    }

    pub fn quantum_setup(&self) -> Result<QuantumSetup> {
        self.quantum
            .ok_or_else(|| CliError::config("this command needs the [quantum] section"))
    }

    /// The quantum system with its Floquet unitary.
    pub fn quantum_system(&self) -> Result<QuantumSystem> {
        let map = self.build_map()?;
        let system = match self.quantum_setup()? {
            QuantumSetup::Torus { n, qbar, pbar } => {
                let base = build_torus_system(n, qbar, pbar)?;
                if self.map.name() == "harper" {
                    harper_unitary(&base, self.parameter)?
                } else {
                    kicked_unitary(&base, map.require_kicks()?)?
                }
            }
            setup @ QuantumSetup::Plane { hbar, .. } => {
                oscillator_unitary(setup.dimension(self.x0, self.sigma), self.parameter, hbar)?
            }
        };
        Ok(system)
    }

    pub fn quantum_mode(&self) -> Option<QuantumMode> {
        self.backend.and_then(|b| b.name().parse().ok())
    }

    /// Grid on which Husimi portraits are sampled.
    pub fn portrait_grid(&self) -> Result<PhaseSpaceGeometry> {
        Ok(match self.grid.kind {
            GeometryKind::Torus => PhaseSpaceGeometry::torus(self.portrait_m)?,
            GeometryKind::Plane => {
                PhaseSpaceGeometry::square_window(self.portrait_half_width(), self.portrait_m)?
            }
        })
    }

    /// Plane portrait half-width: the quadrature window, widened to eight
    /// Husimi widths `√(σ² + ħ)` around `x₀` for quantum runs.
    pub fn portrait_half_width(&self) -> f64 {
        let window = self.grid.q_hi.max(self.grid.p_hi);
        match self.quantum {
            Some(q) if self.backend.is_some_and(|b| b.is_quantum()) => {
                window.max(self.x0.norm() + 8.0 * (self.sigma * self.sigma + q.hbar()).sqrt())
            }
            _ => window,
        }
    }

    /// Fully explicit config that reproduces this run.
    pub fn to_config(&self) -> ExperimentConfig {
        let mut map = MapSection::default();
        match self.map.parameter_key() {
            "tau" => map.tau = Some(self.parameter),
            _ => map.k = Some(self.parameter),
        }
        let quantum = match self.quantum {
            Some(QuantumSetup::Torus { n, qbar, pbar }) => QuantumSection {
                n: Some(n),
                qbar: Some(qbar),
                pbar: Some(pbar),
                ..Default::default()
            },
            Some(setup @ QuantumSetup::Plane { hbar, .. }) => QuantumSection {
                hbar: Some(hbar),
                dimension: Some(setup.dimension(self.x0, self.sigma)),
                ..Default::default()
            },
            None => QuantumSection::default(),
        };
        ExperimentConfig {
            system: self.map.name().to_string(),
            mode: self.backend.map(|b| b.name().to_string()),
            steps: Some(self.steps),
            output: self.output.clone(),
            map,
            initial: InitialSection {
                q0: Some(self.x0.q),
                p0: Some(self.x0.p),
                sigma: Some(self.sigma),
            },
            quantum,
            grid: GridSection {
                m: Some(self.grid.m),
                window: self.window,
            },
            krylov: KrylovSection {
                tol: Some(self.tol),
                memory_budget_mb: self.memory_budget_mb,
                streaming: Some(self.streaming),
            },
            portraits: PortraitSection {
                indices: Some(self.portrait_indices.clone()),
                m: Some(self.portrait_m),
            },
        }
    }

    /// Every resolved parameter and numerical choice in effect.
    pub fn meta(&self) -> Vec<(String, String)> {
        let mut m: Vec<(String, String)> = Vec::new();
        let mut put = |k: &str, v: String| m.push((k.to_string(), v));
        put("system", self.map.name().into());
        put("mode", self.backend.map_or("none", |b| b.name()).into());
        put(
            &format!("map_{}", self.map.parameter_key()),
            fmt(self.parameter),
        );
        put("steps", self.steps.to_string());
        put("initial_q0", fmt(self.x0.q));
        put("initial_p0", fmt(self.x0.p));
        put("initial_sigma", fmt(self.sigma));
        put("grid_kind", self.grid.kind.to_string());
        put("grid_m", self.grid.m.to_string());
        put(
            "grid_q_range",
            format!("{} {}", fmt(self.grid.q_lo), fmt(self.grid.q_hi)),
        );
        put(
            "grid_p_range",
            format!("{} {}", fmt(self.grid.p_lo), fmt(self.grid.p_hi)),
        );
        put("grid_spacing", fmt(self.grid.spacing()));
        if let Some(l) = self.window {
            put("grid_window_half_width", fmt(l));
        }
        put("grid_resolution_guard", "spacing <= sigma/8".into());
        put("quadrature", "midpoint".into());
        if self.grid.kind == GeometryKind::Torus {
            put(
                "lattice_sum_cutoff_j",
                krylov_qc_core::classical::LATTICE_CUTOFF.to_string(),
            );
        }
        put("krylov_tol", fmt(self.tol));
        put("krylov_reorthogonalization_passes", "2".into());
        put(
            "hessenberg_guard",
            fmt(krylov_qc_core::krylov::GUARD_THRESHOLD),
        );
        put(
            "memory_budget_mb",
            self.memory_budget_mb
                .map_or("unbounded".into(), |v| v.to_string()),
        );
        put("streaming", self.streaming.to_string());
        put("complexity_column_normalization", "true".into());
        if let Some(q) = self.quantum {
            put("hbar", fmt(q.hbar()));
            match q {
                QuantumSetup::Torus { n, qbar, pbar } => {
                    put("quantum_n", n.to_string());
                    put("quantum_qbar", fmt(qbar));
                    put("quantum_pbar", fmt(pbar));
                    put(
                        "torus_coherent_images",
                        krylov_qc_core::quantum::TORUS_IMAGES.to_string(),
                    );
                }
                QuantumSetup::Plane { hbar, .. } => {
                    put(
                        "oscillator_alpha_max",
                        fmt(QuantumSetup::alpha_max(hbar, self.x0, self.sigma)),
                    );
                    put(
                        "oscillator_dimension",
                        q.dimension(self.x0, self.sigma).to_string(),
                    );
                }
            }
            put("p_rep_weight_cutoff", fmt(WEIGHT_CUTOFF));
            put("p_rep_normalization", "hermitize then unit trace".into());
        }
        put(
            "portrait_indices",
            self.portrait_indices
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        put("portrait_m", self.portrait_m.to_string());
        if self.grid.kind == GeometryKind::Plane {
            put(
                "portrait_window_half_width",
                fmt(self.portrait_half_width()),
            );
        }
        m
    }
}

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        ExperimentConfig::from_toml(text, Path::new("test.toml"))?.resolve(true)
    }

    #[test]
    fn oscillator_defaults_follow_the_resolution_guard() {
        let c = parse("system = \"oscillator\"\nmode = \"classical\"").unwrap();
        assert_eq!(c.steps, 250);
        assert_eq!(c.window, Some(1.8));
        assert_eq!(c.grid.m, 288);
        assert!(c.grid.spacing() <= c.sigma / 8.0 + 1e-15);
    }

    #[test]
    fn harper_torus_grid_defaults_to_512() {
        let c = parse("system = \"harper\"\nmode = \"classical\"").unwrap();
        assert_eq!(c.grid.m, 512);
        assert_eq!(c.steps, 150);
    }

    #[test]
    fn quantum_modes_need_their_geometry_keys() {
        let e = parse("system = \"harper\"\nmode = \"quantum-ket\"").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse("system = \"oscillator\"\nmode = \"quantum-liouville\"").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e =
            parse("system = \"oscillator\"\nmode = \"classical\"\n[quantum]\nn = 4").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_and_names_are_rejected() {
        assert!(parse("system = \"harper\"\nmode = \"classical\"\nbogus = 1").is_err());
        assert!(parse("system = \"duffing\"\nmode = \"classical\"").is_err());
        assert!(parse("system = \"harper\"\nmode = \"wigner\"").is_err());
        assert!(parse("system = \"harper\"\nmode = \"classical\"\n[map]\ntau = 0.1").is_err());
    }

    #[test]
    fn large_dimensions_require_streaming() {
        let text = "system = \"harper\"\nmode = \"quantum-liouville\"\n[quantum]\nn = 1024";
        assert_eq!(parse(text).unwrap_err().exit_code(), 2);
        let c = parse(&format!("{text}\n[krylov]\nstreaming = true")).unwrap();
        assert_eq!(c.memory_budget_mb, Some(STREAMING_BUDGET_MB));
    }

    #[test]
    fn explicit_config_round_trips() {
        let c = parse("system = \"oscillator\"\nmode = \"quantum-pure\"\n[quantum]\nhbar = 0.0625")
            .unwrap();
        let again = c.to_config().resolve(true).unwrap();
        assert_eq!(c.meta(), again.meta());
    }
}
