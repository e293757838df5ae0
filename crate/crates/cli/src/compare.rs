//! Quantum-vs-classical complexity and sequence comparison of run
//! directories.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::fmt;
use crate::error::{CliError, Result};
use crate::output::{read_complexity, read_sequences};

/// Denominator guard where the classical complexity vanishes.
pub const EPSILON: f64 = 1e-9;

pub const COMPARE: &str = "compare.csv";
pub const COMPARE_AVG: &str = "compare_avg.csv";
pub const COMPARE_SEQUENCES: &str = "compare_sequences.csv";

/// One quantum run measured against the classical reference.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub label: String,
    /// `|C_Q(t) - C_C(t)| / max(C_C(t), ε)`
    pub rel_diff: Vec<f64>,
    pub running_avg: Vec<f64>,
    pub average: f64,
    /// Per-`n` absolute differences of `(a_n, b_n, c_n)` where both runs
    /// define them.
    pub sequence_diffs: Vec<[Option<f64>; 3]>,
}

pub fn relative_difference(classical: &[f64], quantum: &[f64]) -> Result<Vec<f64>> {
    if classical.len() != quantum.len() {
        return Err(CliError::Input(format!(
            "complexity series lengths differ ({} vs {})",
            classical.len(),
            quantum.len()
        )));
    }
    Ok(classical
        .iter()
        .zip(quantum)
        .map(|(c, q)| (q - c).abs() / c.max(EPSILON))
        .collect())
}

pub fn report(
    label: &str,
    classical_dir: &Path,
    quantum_dir: &Path,
) -> Result<CorrespondenceReport> {
    let rel_diff = relative_difference(
        &read_complexity(classical_dir)?,
        &read_complexity(quantum_dir)?,
    )?;
    let mut running_avg = Vec::with_capacity(rel_diff.len());
    let mut sum = 0.0;
    for (i, v) in rel_diff.iter().enumerate() {
        sum += v;
        running_avg.push(sum / (i + 1) as f64);
    }
    let average = running_avg.last().copied().unwrap_or(0.0);
    let cs = read_sequences(classical_dir)?;
    let qs = read_sequences(quantum_dir)?;
    let sequence_diffs = cs
        .iter()
        .zip(&qs)
        .map(|(c, q)| std::array::from_fn(|i| c[i].zip(q[i]).map(|(x, y)| (x - y).abs())))
        .collect();
    Ok(CorrespondenceReport {
        label: label.to_string(),
        rel_diff,
        running_avg,
        average,
        sequence_diffs,
    })
}

fn labels(dirs: &[PathBuf]) -> Vec<String> {
    let short: Vec<String> = dirs
        .iter()
        .map(|d| {
            d.file_name().map_or_else(
                || d.display().to_string(),
                |n| n.to_string_lossy().into_owned(),
            )
        })
        .collect();
    let unique = short
        .iter()
        .enumerate()
        .all(|(i, a)| short.iter().skip(i + 1).all(|b| a != b));
    if unique {
        short
    } else {
        dirs.iter().map(|d| d.display().to_string()).collect()
    }
}

/// Compares every quantum run in `dirs[1..]` against the classical run in
/// `dirs[0]` and writes the three comparison tables into `out`.
pub fn compare(dirs: &[PathBuf], out: &Path) -> Result<Vec<CorrespondenceReport>> {
    let [reference, quantum @ ..] = dirs else {
        return Err(CliError::config("compare needs a classical run directory"));
    };
    if quantum.is_empty() {
        return Err(CliError::config(
            "compare needs at least one run to set against the classical one",
        ));
    }
    let names = labels(quantum);
    let reports = quantum
        .iter()
        .zip(&names)
        .map(|(dir, label)| report(label, reference, dir))
        .collect::<Result<Vec<_>>>()?;

    fs::create_dir_all(out).map_err(CliError::io(out))?;
    let write = |name: &str, header: &[&str], rows: Vec<Vec<String>>| -> Result<()> {
        let path = out.join(name);
        let err = |source| CliError::Csv {
            path: path.clone(),
            source,
        };
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for r in rows {
            w.write_record(&r).map_err(err)?;
        }
        w.flush().map_err(CliError::io(&path))
    };
    let mut rows = Vec::new();
    for r in &reports {
        for (t, (d, avg)) in r.rel_diff.iter().zip(&r.running_avg).enumerate() {
            rows.push(vec![r.label.clone(), t.to_string(), fmt(*d), fmt(*avg)]);
        }
    }
    write(COMPARE, &["label", "t", "rel_diff", "running_avg"], rows)?;
    write(
        COMPARE_AVG,
        &["label", "avg"],
        reports
            .iter()
            .map(|r| vec![r.label.clone(), fmt(r.average)])
            .collect(),
    )?;
    let mut rows = Vec::new();
    for r in &reports {
        for (n, d) in r.sequence_diffs.iter().enumerate() {
            let mut row = vec![r.label.clone(), n.to_string()];
            row.extend(d.iter().map(|v| v.map(fmt).unwrap_or_default()));
            rows.push(row);
        }
    }
    write(
        COMPARE_SEQUENCES,
        &["label", "n", "abs_diff_a", "abs_diff_b", "abs_diff_c"],
        rows,
    )?;
    Ok(reports)
}
