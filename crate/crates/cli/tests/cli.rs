use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use krylov_qc_core::field::PhaseSpaceField;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_krylov-qc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const HARPER_LIOUVILLE: &str = r#"
system = "harper"
mode = "quantum-liouville"
steps = 30
[quantum]
n = 32
[portraits]
indices = [0, 1, 3]
m = 64
"#;

const HARPER_CLASSICAL: &str = r#"
system = "harper"
mode = "classical"
steps = 30
[grid]
m = 256
[initial]
sigma = 0.05
"#;

fn run_ok(tmp: &TempDir, cfg: &str, name: &str) -> PathBuf {
    let path = write_config(tmp.path(), &format!("{name}.toml"), cfg);
    let out = tmp.path().join(name);
    let o = run(&["run", s(&path), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn run_writes_every_output() {
    let tmp = TempDir::new().unwrap();
    let dir = run_ok(&tmp, HARPER_LIOUVILLE, "q");
    for f in [
        "sequences.csv",
        "complexity.csv",
        "wavefunction.csv",
        "meta.txt",
        "config.toml",
    ] {
        assert!(dir.join(f).is_file(), "missing {f}");
    }
    for n in [0, 1, 3] {
        let field = PhaseSpaceField::load(dir.join(format!("states/kappa_{n}.kcf"))).unwrap();
        assert_eq!(field.geometry().m, 64);
    }
    let complexity = fs::read_to_string(dir.join("complexity.csv")).unwrap();
    assert_eq!(complexity.lines().next(), Some("t,C_K"));
    assert_eq!(complexity.lines().count(), 32);
    let seq = fs::read_to_string(dir.join("sequences.csv")).unwrap();
    assert_eq!(seq.lines().next(), Some("n,a_n,b_n,c_n,a_n_im,c_n_im"));
}

#[test]
fn meta_records_every_resolved_decision() {
    let tmp = TempDir::new().unwrap();
    let dir = run_ok(&tmp, HARPER_LIOUVILLE, "q");
    let meta = fs::read_to_string(dir.join("meta.txt")).unwrap();
    for key in [
        "grid_m",
        "grid_kind",
        "krylov_tol",
        "lattice_sum_cutoff_j",
        "hbar",
        "quantum_n",
        "p_rep_weight_cutoff",
        "portrait_norm",
        "krylov_dimension",
        "unitarity_error",
    ] {
        assert!(
            meta.lines().any(|l| l.starts_with(&format!("{key} = "))),
            "meta lacks {key}"
        );
    }

    let osc = run_ok(
        &tmp,
        "system = \"oscillator\"\nmode = \"quantum-ket\"\nsteps = 5\n[quantum]\nhbar = 0.0625\n",
        "osc",
    );
    let meta = fs::read_to_string(osc.join("meta.txt")).unwrap();
    for key in [
        "grid_window_half_width",
        "oscillator_dimension",
        "oscillator_alpha_max",
    ] {
        assert!(
            meta.lines().any(|l| l.starts_with(&format!("{key} = "))),
            "meta lacks {key}"
        );
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(&tmp, HARPER_LIOUVILLE, "a");
    let b = run_ok(&tmp, HARPER_LIOUVILLE, "b");
    for f in [
        "sequences.csv",
        "complexity.csv",
        "wavefunction.csv",
        "meta.txt",
        "states/kappa_1.kcf",
    ] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn stored_config_reproduces_the_run() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(&tmp, HARPER_LIOUVILLE, "a");
    let b = tmp.path().join("b");
    let o = run(&["run", s(&a.join("config.toml")), "--out", s(&b)]);
    assert!(o.status.success());
    assert_eq!(
        fs::read(a.join("complexity.csv")).unwrap(),
        fs::read(b.join("complexity.csv")).unwrap()
    );
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = TempDir::new().unwrap();
    let cases = [
        (
            "unknown_system",
            "system = \"pendulum\"\nmode = \"classical\"\n",
        ),
        (
            "unknown_mode",
            "system = \"harper\"\nmode = \"semiclassical\"\n",
        ),
        (
            "unknown_key",
            "system = \"harper\"\nmode = \"classical\"\nfoo = 1\n",
        ),
        ("missing_n", "system = \"harper\"\nmode = \"quantum-ket\"\n"),
        (
            "wrong_geometry",
            "system = \"oscillator\"\nmode = \"quantum-ket\"\n[quantum]\nn = 32\n",
        ),
        (
            "coarse_grid",
            "system = \"harper\"\nmode = \"classical\"\n[grid]\nm = 64\n",
        ),
        (
            "needs_streaming",
            "system = \"harper\"\nmode = \"quantum-ket\"\n[quantum]\nn = 1024\n",
        ),
        ("not_toml", "system = = harper"),
    ];
    for (name, text) in cases {
        let path = write_config(tmp.path(), &format!("{name}.toml"), text);
        let o = run(&["run", s(&path), "--out", s(&tmp.path().join(name))]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = run(&[
        "run",
        s(&tmp.path().join("absent.toml")),
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vanishing_initial_density_exits_with_3() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(
        tmp.path(),
        "far.toml",
        "system = \"oscillator\"\nmode = \"classical\"\nsteps = 3\n[initial]\nq0 = 30.0\n[grid]\nwindow = 0.5\nm = 80\n",
    );
    let o = run(&["run", s(&path), "--out", s(&tmp.path().join("far"))]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn zero_steps_give_a_single_state() {
    let tmp = TempDir::new().unwrap();
    for (name, mode) in [("c", "classical"), ("k", "quantum-ket")] {
        let dir = run_ok(
            &tmp,
            &format!("system = \"harper\"\nmode = \"{mode}\"\nsteps = 0\n[quantum]\nn = 32\n"),
            name,
        );
        let complexity = fs::read_to_string(dir.join("complexity.csv")).unwrap();
        assert_eq!(complexity.lines().count(), 2);
        assert!(dir.join("states/kappa_0.kcf").is_file());
        assert!(!dir.join("states/kappa_1.kcf").exists());
    }
}

#[test]
fn compare_of_identical_runs_is_zero() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(&tmp, HARPER_LIOUVILLE, "a");
    let out = tmp.path().join("cmp");
    let o = run(&["compare", s(&a), s(&a), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("compare.csv")).unwrap();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(rec[2].parse::<f64>().unwrap(), 0.0);
        rows += 1;
    }
    assert_eq!(rows, 31);
    let avg = fs::read_to_string(out.join("compare_avg.csv")).unwrap();
    assert_eq!(avg.lines().count(), 2);
}

#[test]
fn compare_length_mismatch_exits_with_2() {
    let tmp = TempDir::new().unwrap();
    let a = run_ok(&tmp, HARPER_LIOUVILLE, "a");
    let b = run_ok(
        &tmp,
        &HARPER_LIOUVILLE.replace("steps = 30", "steps = 20"),
        "b",
    );
    let o = run(&["compare", s(&a), s(&b), "--out", s(&tmp.path().join("cmp"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_classical_against_quantum() {
    let tmp = TempDir::new().unwrap();
    let c = run_ok(&tmp, HARPER_CLASSICAL, "c");
    let q = run_ok(
        &tmp,
        &HARPER_LIOUVILLE.replace("[quantum]", "[initial]\nsigma = 0.05\n[quantum]"),
        "q",
    );
    let out = tmp.path().join("cmp");
    let o = run(&["compare", s(&c), s(&q), "--out", s(&out)]);
    assert!(o.status.success());
    let seqs = fs::read_to_string(out.join("compare_sequences.csv")).unwrap();
    assert_eq!(
        seqs.lines().next(),
        Some("label,n,abs_diff_a,abs_diff_b,abs_diff_c")
    );
    let mut rdr = csv::Reader::from_path(out.join("compare.csv")).unwrap();
    assert!(rdr
        .records()
        .all(|r| r.unwrap()[2].parse::<f64>().unwrap().is_finite()));
}

#[test]
fn portrait_writes_requested_states_and_normalization() {
    let tmp = TempDir::new().unwrap();
    let dir = run_ok(&tmp, HARPER_LIOUVILLE, "q");
    let o = run(&["portrait", s(&dir), "--times", "0,2,7,500"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for n in [0, 2, 7] {
        assert!(dir.join(format!("states/kappa_{n}.kcf")).is_file());
    }
    let meta = fs::read_to_string(dir.join("states/portrait_meta.txt")).unwrap();
    assert!(meta.contains("portraits_beyond_krylov_dimension = 500"));
    let norm: f64 = meta
        .lines()
        .find_map(|l| l.strip_prefix("portrait_norm = "))
        .unwrap()
        .parse()
        .unwrap();
    let k0 = PhaseSpaceField::load(dir.join("states/kappa_0.kcf")).unwrap();
    assert_eq!(norm, k0.max_abs());

    let o = run(&["portrait", s(tmp.path()), "--times", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn semiclassics_check_reports_both_directions() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(
        tmp.path(),
        "s.toml",
        "system = \"harper\"\n[quantum]\nn = 64\n",
    );
    let out = tmp.path().join("sc");
    let o = run(&["semiclassics-check", s(&path), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(out.join("semiclassics.txt")).unwrap();
    for key in [
        "[forward]",
        "[backward]",
        "rel_error_hbar_v_plus_i",
        "l1_husimi_vs_pullback",
    ] {
        assert!(report.contains(key), "report lacks {key}");
    }
    assert!(out.join("husimi_evolved.kcf").is_file());
    assert!(out.join("husimi_pullback.kcf").is_file());
}
