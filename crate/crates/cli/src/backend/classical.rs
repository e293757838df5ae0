use krylov_qc_core::classical::{FieldSpace, GaussianDensity, PfSeries, PhaseDensity};
use krylov_qc_core::krylov::gram_schmidt_build;

use super::{assemble, render};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::RunOutput;
use crate::registry::Backend;

/// Gram-Schmidt over exact Perron-Frobenius snapshots on the grid.
pub struct ClassicalBackend;

impl Backend for ClassicalBackend {
    fn name(&self) -> &'static str {
        "classical"
    }

    fn is_quantum(&self) -> bool {
        false
    }

    fn run(&self, config: &RunConfig) -> Result<RunOutput> {
        let map = config.build_map()?;
        let rho0 = GaussianDensity::new(config.x0, config.sigma, config.grid.kind)?;
        rho0.check_grid(&config.grid)?;
        let series = PfSeries::new(config.grid, map.as_ref(), &rho0, config.steps);
        let result = gram_schmidt_build(series, &FieldSpace, &config.krylov_options())?;
        let beta = result
            .beta
            .clone()
            .ok_or_else(|| CliError::config("Gram-Schmidt produced no wavefunction"))?;
        let dim = result.dim().min(config.steps + 1);
        let portraits = render(config, &result, dim, |f| Ok(f.clone()))?;
        let diagnostics = vec![("builder".to_string(), "gram-schmidt".to_string())];
        Ok(assemble(config, &result, beta, portraits, diagnostics))
    }
}
