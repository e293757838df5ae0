//! Name-keyed registries of the classical maps and of the run backends.

use krylov_qc_core::classical::{harper_map, oscillator_map, AreaPreservingMap};
use krylov_qc_core::field::GeometryKind;
use krylov_qc_core::quantum::QuantumMode;
use krylov_qc_core::PhasePoint;

use crate::backend::{ClassicalBackend, QuantumBackend};
use crate::config::RunConfig;
use crate::error::Result;
use crate::output::RunOutput;

/// Parameter defaults of a map family.
#[derive(Debug, Clone, Copy)]
pub struct SystemDefaults {
    pub parameter: f64,
    pub center: PhasePoint,
    pub sigma: f64,
    pub steps: usize,
}

/// A family of area-preserving maps selectable by name.
pub trait MapEntry: Sync {
    fn name(&self) -> &'static str;
    /// Config key of the single map parameter.
    fn parameter_key(&self) -> &'static str;
    fn geometry(&self) -> GeometryKind;
    fn defaults(&self) -> SystemDefaults;
    fn build(&self, parameter: f64) -> krylov_qc_core::Result<Box<dyn AreaPreservingMap>>;
}

struct Oscillator;

impl MapEntry for Oscillator {
    fn name(&self) -> &'static str {
        "oscillator"
    }

    fn parameter_key(&self) -> &'static str {
        "tau"
    }

    fn geometry(&self) -> GeometryKind {
        GeometryKind::Plane
    }

    fn defaults(&self) -> SystemDefaults {
        SystemDefaults {
            parameter: 0.1,
            center: PhasePoint::new(1.0, 0.0),
            sigma: 0.1,
            steps: 250,
        }
    }

    fn build(&self, tau: f64) -> krylov_qc_core::Result<Box<dyn AreaPreservingMap>> {
        Ok(Box::new(oscillator_map(tau)?))
    }
}

struct Harper;

impl MapEntry for Harper {
    fn name(&self) -> &'static str {
        "harper"
    }

    fn parameter_key(&self) -> &'static str {
        "k"
    }

    fn geometry(&self) -> GeometryKind {
        GeometryKind::Torus
    }

    fn defaults(&self) -> SystemDefaults {
        SystemDefaults {
            parameter: 0.05,
            center: PhasePoint::new(0.4, 0.5),
            sigma: 0.025,
            steps: 150,
        }
    }

    fn build(&self, k: f64) -> krylov_qc_core::Result<Box<dyn AreaPreservingMap>> {
        Ok(Box::new(harper_map(k)?))
    }
}

static MAPS: [&dyn MapEntry; 2] = [&Oscillator, &Harper];

pub fn maps() -> &'static [&'static dyn MapEntry] {
    &MAPS
}

pub fn map_entry(name: &str) -> Option<&'static dyn MapEntry> {
    MAPS.iter().copied().find(|m| m.name() == name)
}

/// One way of turning a resolved config into Krylov data.
pub trait Backend: Sync {
    fn name(&self) -> &'static str;
    fn is_quantum(&self) -> bool;
    fn run(&self, config: &RunConfig) -> Result<RunOutput>;
}

static CLASSICAL: ClassicalBackend = ClassicalBackend;
static LIOUVILLE: QuantumBackend = QuantumBackend(QuantumMode::Liouville);
static PURE: QuantumBackend = QuantumBackend(QuantumMode::Pure);
static KET: QuantumBackend = QuantumBackend(QuantumMode::Ket);
static BACKENDS: [&dyn Backend; 4] = [&CLASSICAL, &LIOUVILLE, &PURE, &KET];

pub fn backends() -> &'static [&'static dyn Backend] {
    &BACKENDS
}

pub fn backend(name: &str) -> Option<&'static dyn Backend> {
    BACKENDS.iter().copied().find(|b| b.name() == name)
}

pub fn names<T: ?Sized>(items: &[&T], name: impl Fn(&T) -> &'static str) -> String {
    items.iter().map(|i| name(i)).collect::<Vec<_>>().join(", ")
}
