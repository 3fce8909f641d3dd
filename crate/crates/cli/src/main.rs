use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use casimir_friction_cli::{execute, Command, Invocation, Overrides};
use clap::{Parser, Subcommand};

/// Casimir friction between moving plates: forces, torques, dissipated
/// energy and oracle verification.
#[derive(Debug, Parser)]
#[command(name = "casimir-friction", version)]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// Run configuration (TOML).
    #[arg(long, global = true, env = "CF_CONFIG")]
    config: Option<PathBuf>,
    /// CSV output file; standard output when omitted.
    #[arg(long, global = true, env = "CF_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for the numeric kernels.
    #[arg(long, global = true, env = "CF_THREADS")]
    threads: Option<NonZeroUsize>,
    /// Relative quadrature tolerance, replacing `[quadrature] rel_tol`.
    #[arg(long, global = true, env = "CF_TOLERANCE")]
    tolerance: Option<f64>,
    /// Also write gnuplot-ready two-column data here.
    #[arg(long, global = true, env = "CF_PLOT")]
    plot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Friction force per unit area over a speed grid.
    Force,
    /// Rotating-disc torque over radius and angular-velocity grids.
    Torque,
    /// Energy per unit area dissipated along a closed trajectory.
    Dissipation,
    /// Run the oracle suite and print a pass/fail table.
    Verify,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.get()).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let inv = Invocation {
        command: match args.command {
            Sub::Force => Command::Force,
            Sub::Torque => Command::Torque,
            Sub::Dissipation => Command::Dissipation,
            Sub::Verify => Command::Verify,
        },
        config: args.config,
        out: args.out,
        plot: args.plot,
        overrides: Overrides::from_process_env(args.tolerance),
    };
    match execute(&inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
