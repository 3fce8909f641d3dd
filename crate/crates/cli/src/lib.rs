//! Batch front end: parse a run configuration, compute force, torque or
//! dissipation tables, or run the oracle suite, and write CSV.

// NaN must fail the range checks, which `!(x > 0.0)` does and `x <= 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod table;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::{Config, Overrides};
pub use error::CliError;
use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Force,
    Torque,
    Dissipation,
    Verify,
}

#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    /// CSV destination; standard output when absent.
    pub out: Option<PathBuf>,
    /// Optional two-column plot data.
    pub plot: Option<PathBuf>,
    pub overrides: Overrides,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(table: &Table, inv: &Invocation) -> Result<(), CliError> {
    match &inv.out {
        Some(path) => {
            let mut w = create(path)?;
            table.write_csv(&mut w)?;
            w.flush().map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
        }
        None => table.write_csv(std::io::stdout().lock())?,
    }
    if let Some(path) = &inv.plot {
        let mut w = create(path)?;
        table.write_plot(&mut w)?;
        w.flush().map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Run one subcommand end to end.
pub fn execute(inv: &Invocation) -> Result<(), CliError> {
    let cfg = match (&inv.config, inv.command) {
        (Some(path), _) => Config::load(path, &inv.overrides)?,
        // The oracle suite runs at fixed unit parameters and needs no file.
        (None, Command::Verify) => Config::parse("", None, &inv.overrides)?,
        (None, _) => return Err(CliError::Usage("--config <path> is required".into())),
    };
    let table = match inv.command {
        Command::Force => commands::force(&cfg)?,
        Command::Torque => commands::torque(&cfg)?,
        Command::Dissipation => commands::dissipation(&cfg)?,
        Command::Verify => {
            let outcomes = verify::run_suite(&cfg.run);
            emit(&verify::report(&outcomes, &cfg.hash), inv)?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::VerifyFailed {
                    failed,
                    total: outcomes.len(),
                });
            }
            return Ok(());
        }
    };
    emit(&table, inv)
}
