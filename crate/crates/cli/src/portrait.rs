//! Re-renders Krylov-state portraits of an existing run directory.

use std::fs;
use std::path::Path;

use crate::config::{fmt, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::output::{write_meta, write_portraits, CONFIG, STATES};

pub const PORTRAIT_META: &str = "portrait_meta.txt";

/// Rebuilds the run stored in `dir` and writes `states/kappa_<n>.kcf` for
/// every requested `n` together with `states/portrait_meta.txt`, which
/// carries the `κ₀` normalization constant.
pub fn portrait(dir: &Path, indices: &[usize]) -> Result<Vec<usize>> {
    let cfg_path = dir.join(CONFIG);
    if !cfg_path.is_file() {
        return Err(CliError::Input(format!(
            "{} holds no stored run configuration; rerun `krylov-qc run` to create it",
            dir.display()
        )));
    }
    let mut raw = ExperimentConfig::load(&cfg_path)?;
    raw.portraits.indices = Some(indices.to_vec());
    let config = raw.resolve(true)?;
    let backend = config.backend.expect("mode is required");
    let out = backend.run(&config)?;
    write_portraits(dir, &out.portraits)?;
    let written: Vec<usize> = out.portraits.iter().map(|(n, _)| *n).collect();
    let missing: Vec<usize> = indices
        .iter()
        .copied()
        .filter(|n| !written.contains(n))
        .collect();
    let states = dir.join(STATES);
    fs::create_dir_all(&states).map_err(CliError::io(&states))?;
    let join = |v: &[usize]| {
        v.iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let grid = out
        .portraits
        .first()
        .map(|(_, f)| f.geometry().header())
        .unwrap_or_default();
    write_meta(
        &states.join(PORTRAIT_META),
        &[
            ("portrait_norm".into(), fmt(out.portrait_norm)),
            ("portraits_written".into(), join(&written)),
            ("portraits_beyond_krylov_dimension".into(), join(&missing)),
            ("krylov_dimension".into(), out.krylov_dim.to_string()),
            ("grid".into(), grid),
        ],
    )?;
    Ok(written)
}
