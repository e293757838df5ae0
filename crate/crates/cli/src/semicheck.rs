//! One-step semiclassical transport check of a coherent state.

use std::fs;
use std::path::Path;

use krylov_qc_core::field::PhaseSpaceField;
use krylov_qc_core::quantum::{coherent_state, husimi, husimi_at, HusimiSource};
use krylov_qc_core::semiclassics::{
    default_fit_grid, ehrenfest_estimate, one_step_check, Direction, OneStepReport, Stability,
};

use crate::config::{fmt, RunConfig};
use crate::error::{CliError, Result};

pub const REPORT: &str = "semiclassics.txt";
pub const EVOLVED: &str = "husimi_evolved.kcf";
pub const PULLBACK: &str = "husimi_pullback.kcf";

#[derive(Debug, Clone)]
pub struct SemiclassicsOutcome {
    pub forward: OneStepReport,
    pub backward: OneStepReport,
    /// `∫ |H_{UρU†} - H_ρ ∘ M⁻¹|` on the forward fit grid.
    pub l1: f64,
    pub evolved: PhaseSpaceField,
    pub pullback: PhaseSpaceField,
}

impl SemiclassicsOutcome {
    pub fn to_key_values(&self) -> String {
        let mut s = String::from("[forward]\n");
        s.push_str(&self.forward.to_key_values());
        s.push_str("[backward]\n");
        s.push_str(&self.backward.to_key_values());
        s.push_str("[transport]\n");
        s.push_str(&format!("l1_husimi_vs_pullback = {}\n", fmt(self.l1)));
        let hbar = self.forward.hbar;
        if let Ok(t) = ehrenfest_estimate(hbar, Stability::Stable, 1.0, 1.0) {
            s.push_str(&format!("ehrenfest_estimate_stable = {}\n", fmt(t)));
        }
        s
    }
}

/// Forward and backward one-step fits at the configured initial point and
/// the L¹ distance between the evolved Husimi function and the classical
/// pullback of the initial one.
pub fn semiclassics_check(config: &RunConfig) -> Result<SemiclassicsOutcome> {
    let system = config.quantum_system()?;
    let map = config.build_map()?;
    let x = config.x0;
    let forward = one_step_check(&system, map.as_ref(), x, Direction::Forward, None)?;
    let backward = one_step_check(&system, map.as_ref(), x, Direction::Backward, None)?;

    let grid = default_fit_grid(&system, forward.classical_image, 1.0)?;
    let psi = coherent_state(&system, x)?;
    let evolved_psi = system.unitary()?.apply(&psi);
    let evolved = husimi(&system, HusimiSource::Ket(&evolved_psi), &grid);
    let pullback = PhaseSpaceField::from_fn(grid, |z| {
        husimi_at(&system, HusimiSource::Ket(&psi), map.inverse(z))
    });
    let l1 = evolved.l1_distance(&pullback)?;
    Ok(SemiclassicsOutcome {
        forward,
        backward,
        l1,
        evolved,
        pullback,
    })
}

pub fn write_outcome(dir: &Path, outcome: &SemiclassicsOutcome) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let report = dir.join(REPORT);
    fs::write(&report, outcome.to_key_values()).map_err(CliError::io(&report))?;
    outcome.evolved.save(dir.join(EVOLVED))?;
    outcome.pullback.save(dir.join(PULLBACK))?;
    Ok(())
}
