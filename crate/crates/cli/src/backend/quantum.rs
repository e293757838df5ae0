use krylov_qc_core::classical::{GaussianDensity, PhaseDensity};
use krylov_qc_core::krylov::{arnoldi_build, krylov_wavefunction};
use krylov_qc_core::quantum::{
    coherent_state, husimi, p_rep_density, pure_density, symmetry_report, HusimiSource, KetSpace,
    LiouvilleSpace, QuantumMode, QuantumSystem,
};

use super::{assemble, render};
use crate::config::{fmt, RunConfig};
use crate::error::Result;
use crate::output::RunOutput;
use crate::registry::Backend;

/// Arnoldi with the Floquet unitary on operators or kets.
pub struct QuantumBackend(pub QuantumMode);

impl Backend for QuantumBackend {
    fn name(&self) -> &'static str {
        self.0.name()
    }

    fn is_quantum(&self) -> bool {
        true
    }

    fn run(&self, config: &RunConfig) -> Result<RunOutput> {
        let system = config.quantum_system()?;
        let mut diagnostics = system_diagnostics(&system)?;
        diagnostics.push(("builder".into(), "arnoldi".into()));
        match self.0 {
            QuantumMode::Liouville => {
                let rho0 = GaussianDensity::new(config.x0, config.sigma, config.grid.kind)?;
                rho0.check_grid(&config.grid)?;
                let rho = p_rep_density(&system, &rho0, &config.grid)?;
                diagnostics.push(("initial_state".into(), "p-representation mixture".into()));
                diagnostics.push((
                    "initial_hermiticity_error".into(),
                    fmt(rho.hermiticity_error()),
                ));
                operator_run(config, &system, rho.matrix, diagnostics)
            }
            QuantumMode::Pure => {
                let rho = pure_density(&system, config.x0)?;
                diagnostics.push(("initial_state".into(), "coherent projector".into()));
                operator_run(config, &system, rho.matrix, diagnostics)
            }
            QuantumMode::Ket => {
                diagnostics.push(("initial_state".into(), "coherent ket".into()));
                ket_run(
                    config,
                    &system,
                    coherent_state(&system, config.x0)?,
                    diagnostics,
                )
            }
        }
    }
}

fn system_diagnostics(system: &QuantumSystem) -> Result<Vec<(String, String)>> {
    let u = system.unitary()?;
    let mut d = vec![
        ("hilbert_dimension".to_string(), system.dim().to_string()),
        ("unitarity_error".to_string(), fmt(u.unitarity_error())),
    ];
    if system.is_torus() {
        let r = symmetry_report(system)?;
        if let Some(c) = r.reflection_commutator {
            d.push(("reflection_commutator".into(), fmt(c)));
        }
        d.push(("time_reversal_defect".into(), fmt(r.time_reversal_defect)));
    }
    Ok(d)
}

fn operator_run(
    config: &RunConfig,
    system: &QuantumSystem,
    rho0: ndarray::Array2<krylov_qc_core::C64>,
    diagnostics: Vec<(String, String)>,
) -> Result<RunOutput> {
    let space = LiouvilleSpace::new(system);
    let result = arnoldi_build(&space, &rho0, &config.krylov_options())?;
    let u = system.unitary()?;
    let snapshots =
        std::iter::successors(Some(rho0), |r| Some(u.conjugate(r))).take(config.steps + 1);
    let beta = krylov_wavefunction(&space, &result, snapshots)?;
    let grid = config.portrait_grid()?;
    let dim = result.dim().min(config.steps + 1);
    let portraits = render(config, &result, dim, |k| {
        Ok(husimi(system, HusimiSource::Operator(k), &grid))
    })?;
    Ok(assemble(config, &result, beta, portraits, diagnostics))
}

fn ket_run(
    config: &RunConfig,
    system: &QuantumSystem,
    psi0: ndarray::Array1<krylov_qc_core::C64>,
    diagnostics: Vec<(String, String)>,
) -> Result<RunOutput> {
    let space = KetSpace::new(system);
    let result = arnoldi_build(&space, &psi0, &config.krylov_options())?;
    let u = system.unitary()?;
    let snapshots = std::iter::successors(Some(psi0), |p| Some(u.apply(p))).take(config.steps + 1);
    let beta = krylov_wavefunction(&space, &result, snapshots)?;
    let grid = config.portrait_grid()?;
    let dim = result.dim().min(config.steps + 1);
    let portraits = render(config, &result, dim, |k| {
        Ok(husimi(system, HusimiSource::Ket(k), &grid))
    })?;
    Ok(assemble(config, &result, beta, portraits, diagnostics))
}
