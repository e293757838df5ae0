use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use krylov_qc::config::ExperimentConfig;
use krylov_qc::{compare, portrait, semicheck, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "krylov-qc",
    version,
    about = "Krylov spaces of quantum maps and their classical limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the Krylov space of one configured experiment.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare runs against a classical reference (the first directory).
    Compare {
        #[arg(required = true, num_args = 2..)]
        dirs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render Krylov-state portraits of a stored run.
    Portrait {
        dir: PathBuf,
        /// Comma-separated Krylov indices.
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<usize>,
    },
    /// One-step coherent-state transport check.
    SemiclassicsCheck {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, out } => {
            let dir = krylov_qc::run_config_file(&config, out.as_deref())?;
            println!("{}", dir.display());
        }
        Command::Compare { dirs, out } => {
            for r in compare::compare(&dirs, &out)? {
                println!("{} {:.6e}", r.label, r.average);
            }
        }
        Command::Portrait { dir, times } => {
            let written = portrait::portrait(&dir, &times)?;
            println!(
                "{}",
                written
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
        }
        Command::SemiclassicsCheck { config, out } => {
            let cfg = ExperimentConfig::load(&config)?.resolve(false)?;
            let outcome = semicheck::semiclassics_check(&cfg)?;
            print!("{}", outcome.to_key_values());
            if let Some(dir) = out.or(cfg.output.clone()) {
                semicheck::write_outcome(&dir, &outcome)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
