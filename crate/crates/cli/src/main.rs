//! Command-line front end: run simulations, verify artifacts, sweep
//! parameter axes.
//!
//! Exit codes: 0 success (including the regular front-arrival terminations),
//! 1 I/O or internal error, 2 configuration/validation rejection, 3 abnormal
//! run termination (step failure, moisture floor), 4 verification failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod run_cmd;
mod sweep_cmd;
mod verify_cmd;

/// Environment variable prefixed to relative output paths.
pub const OUT_ROOT_ENV: &str = "EVAPFRONT_OUT_ROOT";

#[derive(Parser)]
#[command(name = "evapfront", version, about = "Two-phase evaporation-front solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    /// Evaluate the invariant certificates of a finished run.
    Certify,
    /// Compare the front trajectory against the similarity-law oracle.
    Oracle,
    /// Observed convergence orders over a ladder of configs.
    Converge,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a config, run the solver, and write an artifact directory.
    Run {
        /// Path to the run config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Artifact output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override the nominal time step.
        #[arg(long)]
        dt: Option<f64>,
        /// Override the time horizon.
        #[arg(long)]
        horizon: Option<f64>,
        /// Override both per-phase node counts.
        #[arg(long)]
        nodes: Option<usize>,
        /// Override the coupling mode (picard | explicit).
        #[arg(long)]
        mode: Option<String>,
        /// Tolerance overrides, `key=value`; keys: validation, sign_factor,
        /// mass_c, enthalpy_c, cumulative_drift, energy_slack,
        /// front_regularity_slack, stefan_factor.
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tolerances: Vec<String>,
    },
    /// Check a finished artifact: certificates, oracle accuracy, or
    /// convergence orders.
    Verify {
        /// Artifact directory produced by `run` (certify/oracle modes).
        #[arg(long, required_unless_present = "ladder")]
        artifact: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        /// Ladder of run configs for converge mode (coarse to fine).
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<PathBuf>,
        /// Report file (defaults to `<artifact>/<mode>_report.json`).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Override the oracle pass bar (relative front error).
        #[arg(long)]
        max_rel_error: Option<f64>,
    },
    /// Run a config template across parameter axes and index the results.
    Sweep {
        /// Path to the template config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Sweep output directory.
        #[arg(long)]
        out: PathBuf,
        /// Axis spec `target=start:stop:count`; targets: horizon,
        /// stepping.dt, oven.level, init.e0, init.w0_scale, params.<field>.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// Worker threads (defaults to the number of cores).
        #[arg(long)]
        parallel: Option<usize>,
    },
}

/// Applies the output-root environment override to relative paths.
pub fn resolve_out(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Ok(root) = std::env::var(OUT_ROOT_ENV) {
            if !root.is_empty() {
                return PathBuf::from(root).join(path);
            }
        }
    }
    path
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            out,
            dt,
            horizon,
            nodes,
            mode,
            tolerances,
        } => run_cmd::execute(run_cmd::RunArgs {
            config,
            out: resolve_out(out),
            dt,
            horizon,
            nodes,
            mode,
            tolerances,
        }),
        Command::Verify {
            artifact,
            mode,
            ladder,
            report,
            max_rel_error,
        } => match mode {
            VerifyMode::Certify => verify_cmd::certify(artifact.as_deref(), report.as_deref()),
            VerifyMode::Oracle => {
                verify_cmd::oracle(artifact.as_deref(), report.as_deref(), max_rel_error)
            }
            VerifyMode::Converge => {
                verify_cmd::converge(&ladder, report.as_deref(), artifact.as_deref())
            }
        },
        Command::Sweep {
            config,
            out,
            axes,
            parallel,
        } => sweep_cmd::execute(&config, &resolve_out(out), &axes, parallel),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
