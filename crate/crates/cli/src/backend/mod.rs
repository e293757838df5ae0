//! Run backends: the classical Perron-Frobenius pipeline and the three
//! quantum Krylov-vector kinds.

mod classical;
mod quantum;

pub use classical::ClassicalBackend;
pub use quantum::QuantumBackend;

use krylov_qc_core::field::PhaseSpaceField;
use krylov_qc_core::krylov::{krylov_complexity, KrylovResult, Spill};
use krylov_qc_core::C64;
use ndarray::{s, Array2};

use crate::config::{fmt, RunConfig};
use crate::error::Result;
use crate::output::RunOutput;

/// Krylov indices to render: the requested ones that exist, plus `κ₀`
/// which fixes the portrait normalization.
fn portrait_indices(config: &RunConfig, dim: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = config
        .portrait_indices
        .iter()
        .copied()
        .filter(|&n| n < dim)
        .collect();
    idx.push(0);
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Renders the portraits of the requested Krylov states.
fn render<V: Clone + Spill>(
    config: &RunConfig,
    result: &KrylovResult<V>,
    dim: usize,
    draw: impl Fn(&V) -> Result<PhaseSpaceField>,
) -> Result<(Vec<(usize, PhaseSpaceField)>, f64)> {
    let mut out = Vec::new();
    let mut norm = 0.0;
    for n in portrait_indices(config, dim) {
        let field = draw(&result.vector(n)?)?;
        if n == 0 {
            norm = field.max_abs();
        }
        if config.portrait_indices.contains(&n) {
            out.push((n, field));
        }
    }
    Ok((out, norm))
}

/// Assembles the output of a run with `steps + 1` snapshots, trimming the
/// Krylov data to at most `steps + 1` states.
fn assemble<V: Clone + Spill>(
    config: &RunConfig,
    result: &KrylovResult<V>,
    beta: Array2<C64>,
    portraits: (Vec<(usize, PhaseSpaceField)>, f64),
    mut diagnostics: Vec<(String, String)>,
) -> RunOutput {
    let dim = result.dim().min(config.steps + 1);
    let beta = beta.slice(s![..dim, ..]).to_owned();
    let complexity = krylov_complexity(&beta);
    diagnostics.push((
        "complexity_max_column_drift".into(),
        fmt(complexity.max_drift()),
    ));
    let max_imag = result
        .a
        .iter()
        .chain(&result.c)
        .chain(beta.iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    diagnostics.push(("max_imaginary_part".into(), fmt(max_imag)));
    let norm_defect = (0..beta.ncols())
        .map(|t| (beta.column(t).iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    diagnostics.push(("max_wavefunction_norm_defect".into(), fmt(norm_defect)));
    RunOutput {
        a: result.a.iter().take(dim).copied().collect(),
        b: result.b.iter().take(dim).copied().collect(),
        c: result.c.iter().take(dim).copied().collect(),
        beta,
        complexity: complexity.series,
        krylov_dim: dim,
        terminated_at: result.terminated_at,
        portraits: portraits.0,
        portrait_norm: portraits.1,
        diagnostics,
    }
}
