//! Run directories: CSV tables, `meta.txt`, the explicit config and the
//! `states/kappa_<n>.kcf` portraits.

use std::fs;
use std::path::{Path, PathBuf};

use krylov_qc_core::field::PhaseSpaceField;
use krylov_qc_core::C64;
use ndarray::Array2;

use crate::config::{fmt, RunConfig};
use crate::error::{CliError, Result};

pub const SEQUENCES: &str = "sequences.csv";
pub const COMPLEXITY: &str = "complexity.csv";
pub const WAVEFUNCTION: &str = "wavefunction.csv";
pub const META: &str = "meta.txt";
pub const CONFIG: &str = "config.toml";
pub const STATES: &str = "states";

/// Everything a backend hands back for writing.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub a: Vec<C64>,
    pub b: Vec<f64>,
    pub c: Vec<C64>,
    /// `beta[[n, t]]`
    pub beta: Array2<C64>,
    pub complexity: Vec<f64>,
    pub krylov_dim: usize,
    pub terminated_at: Option<usize>,
    /// Requested Krylov-state portraits in ascending `n`.
    pub portraits: Vec<(usize, PhaseSpaceField)>,
    /// `max |value|` of the `κ₀` portrait.
    pub portrait_norm: f64,
    /// Backend-specific diagnostics appended to `meta.txt`.
    pub diagnostics: Vec<(String, String)>,
}

pub fn state_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(STATES).join(format!("kappa_{n}.kcf"))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(CliError::io(path))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

pub fn write_sequences(path: &Path, out: &RunOutput) -> Result<()> {
    let rows = (0..out.krylov_dim).map(|n| {
        vec![
            n.to_string(),
            opt(out.a.get(n).map(|z| z.re)),
            opt(out.b.get(n).copied()),
            opt(out.c.get(n).map(|z| z.re)),
            opt(out.a.get(n).map(|z| z.im)),
            opt(out.c.get(n).map(|z| z.im)),
        ]
    });
    write_rows(path, &["n", "a_n", "b_n", "c_n", "a_n_im", "c_n_im"], rows)
}

pub fn write_complexity(path: &Path, series: &[f64]) -> Result<()> {
    write_rows(
        path,
        &["t", "C_K"],
        series
            .iter()
            .enumerate()
            .map(|(t, v)| vec![t.to_string(), fmt(*v)]),
    )
}

pub fn write_wavefunction(path: &Path, beta: &Array2<C64>) -> Result<()> {
    let (k, t_len) = beta.dim();
    let rows = (0..t_len).flat_map(move |t| {
        (0..k).map(move |n| {
            vec![
                t.to_string(),
                n.to_string(),
                fmt(beta[[n, t]].re),
                fmt(beta[[n, t]].im),
            ]
        })
    });
    write_rows(path, &["t", "n", "beta", "beta_im"], rows)
}

pub fn write_meta(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let text: String = entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    fs::write(path, text).map_err(CliError::io(path))
}

pub fn read_meta(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    Ok(text
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect())
}

pub fn write_portraits(dir: &Path, portraits: &[(usize, PhaseSpaceField)]) -> Result<()> {
    let states = dir.join(STATES);
    fs::create_dir_all(&states).map_err(CliError::io(&states))?;
    for (n, field) in portraits {
        field.save(state_path(dir, *n))?;
    }
    Ok(())
}

/// Writes a complete run directory.
pub fn write_run(dir: &Path, config: &RunConfig, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    write_sequences(&dir.join(SEQUENCES), out)?;
    write_complexity(&dir.join(COMPLEXITY), &out.complexity)?;
    write_wavefunction(&dir.join(WAVEFUNCTION), &out.beta)?;
    write_portraits(dir, &out.portraits)?;

    let mut meta = config.meta();
    meta.push(("krylov_dimension".into(), out.krylov_dim.to_string()));
    meta.push((
        "terminated_at".into(),
        out.terminated_at.map_or("none".into(), |t| t.to_string()),
    ));
    meta.push(("portrait_norm".into(), fmt(out.portrait_norm)));
    meta.push((
        "portraits_written".into(),
        out.portraits
            .iter()
            .map(|(n, _)| n.to_string())
            .collect::<Vec<_>>()
            .join(" "),
    ));
    meta.extend(out.diagnostics.iter().cloned());
    write_meta(&dir.join(META), &meta)?;

    let cfg_path = dir.join(CONFIG);
    fs::write(&cfg_path, config.to_config().to_toml()).map_err(CliError::io(&cfg_path))
}

fn read_table(path: &Path) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    r.records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|source| CliError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn parse_cell(path: &Path, cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse()
        .map(Some)
        .map_err(|_| CliError::Input(format!("{}: malformed number `{cell}`", path.display())))
}

pub fn read_complexity(dir: &Path) -> Result<Vec<f64>> {
    let path = dir.join(COMPLEXITY);
    read_table(&path)?
        .iter()
        .map(|rec| {
            parse_cell(&path, rec.get(1).unwrap_or(""))?
                .ok_or_else(|| CliError::Input(format!("{}: missing C_K value", path.display())))
        })
        .collect()
}

/// `(a_n, b_n, c_n)` real parts, `None` where a value is not defined.
pub type SequenceRow = [Option<f64>; 3];

pub fn read_sequences(dir: &Path) -> Result<Vec<SequenceRow>> {
    let path = dir.join(SEQUENCES);
    read_table(&path)?
        .iter()
        .map(|rec| {
            Ok([
                parse_cell(&path, rec.get(1).unwrap_or(""))?,
                parse_cell(&path, rec.get(2).unwrap_or(""))?,
                parse_cell(&path, rec.get(3).unwrap_or(""))?,
            ])
        })
        .collect()
}
