//! `evapfront run`: validate, simulate, certify, emit the artifact.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use evapfront::artifact::{RunArtifact, RunSummary, SUMMARY_SCHEMA};
use evapfront::config::RunConfig;
use evapfront::front::{run, Classification, CouplingMode, RunOutput};
use evapfront::problem::validate_setup;
use evapfront::verify::{certify_run, hypotheses_of};

pub struct RunArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
    pub nodes: Option<usize>,
    pub mode: Option<String>,
    pub tolerances: Vec<String>,
}

/// Applies one `key=value` tolerance override.
pub fn apply_tolerance(config: &mut RunConfig, spec: &str) -> Result<()> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("tolerance override {spec:?} is not key=value"))?;
    let v: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("tolerance value in {spec:?}"))?;
    let t = &mut config.tolerances;
    match key.trim() {
        "validation" => t.validation = v,
        "sign_factor" => t.certification.sign_factor = v,
        "mass_c" => t.certification.mass_c = v,
        "enthalpy_c" => t.certification.enthalpy_c = v,
        "cumulative_drift" => t.certification.cumulative_drift = v,
        "energy_slack" => t.certification.energy_slack = v,
        "front_regularity_slack" => t.certification.front_regularity_slack = v,
        "stefan_factor" => t.certification.stefan_factor = v,
        other => bail!("unknown tolerance key {other:?}"),
    }
    Ok(())
}

pub fn apply_overrides(config: &mut RunConfig, args: &RunArgs) -> Result<()> {
    if let Some(dt) = args.dt {
        config.stepping.coupling.dt = dt;
    }
    if let Some(h) = args.horizon {
        config.horizon = h;
    }
    if let Some(n) = args.nodes {
        config.grid.n_l = n;
        config.grid.n_a = n;
    }
    if let Some(mode) = &args.mode {
        config.stepping.coupling.mode = match mode.as_str() {
            "picard" => CouplingMode::Picard,
            "explicit" => CouplingMode::Explicit,
            other => bail!("unknown coupling mode {other:?}"),
        };
    }
    for spec in &args.tolerances {
        apply_tolerance(config, spec)?;
    }
    Ok(())
}

/// Runs a materialized config and assembles the artifact (no I/O).
pub fn simulate(config: &RunConfig) -> Result<(RunArtifact, RunOutput)> {
    let setup = config.setup();
    let grid = config.landau_grid().map_err(|e| anyhow!("{e}"))?;
    let coupling = config.coupling();

    let started = Instant::now();
    let output = run(&setup, grid, &coupling).map_err(|e| anyhow!("{e}"))?;
    let wall_time_s = started.elapsed().as_secs_f64();

    let cert = certify_run(
        &setup,
        &grid,
        &coupling,
        &output.ledger,
        &output.report,
        &config.certification(),
    );
    let summary = RunSummary {
        schema: SUMMARY_SCHEMA.into(),
        config_hash: config.config_hash(),
        classification: output.report.classification,
        wall_time_s,
        report: output.report.clone(),
        initial: output.ledger.initial,
        hypotheses: hypotheses_of(&setup, &coupling),
        certificates: cert.digest(),
        certificates_passed: cert.all_passed,
    };
    let artifact = RunArtifact {
        config: config.clone(),
        summary,
        ledger: output.ledger.clone(),
    };
    Ok((artifact, output))
}

pub fn execute(args: RunArgs) -> Result<ExitCode> {
    let mut config = match RunConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config rejected: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    if let Err(e) = apply_overrides(&mut config, &args) {
        eprintln!("config rejected: {e}");
        return Ok(ExitCode::from(2));
    }

    // Validate before creating any output: a rejected setup leaves no
    // partial artifact behind.
    let setup = config.setup();
    match validate_setup(&setup, config.tolerances.validation) {
        Ok(report) if report.runnable() => {}
        Ok(report) => {
            eprintln!("setup not runnable:");
            for check in report.failures() {
                eprintln!(
                    "  {} failed: {}{}",
                    check.assumption,
                    check.detail,
                    check
                        .location
                        .map_or(String::new(), |i| format!(" (index {i})"))
                );
            }
            return Ok(ExitCode::from(2));
        }
        Err(e) => {
            eprintln!("malformed setup: {e}");
            return Ok(ExitCode::from(2));
        }
    }

    let (artifact, output) = simulate(&config)?;
    artifact
        .write_dir(&args.out)
        .with_context(|| format!("writing artifact to {}", args.out.display()))?;

    let report = &output.report;
    println!(
        "{} after {} steps at t = {} (e = {}, hash {})",
        report.classification,
        report.steps,
        report.stop_time,
        report.final_e,
        artifact.summary.config_hash
    );
    println!("artifact: {}", args.out.display());

    Ok(match report.classification {
        Classification::ReachedHorizon
        | Classification::FrontHitZero
        | Classification::FrontHitOne => ExitCode::SUCCESS,
        Classification::MoistureFloorViolated | Classification::StepFailure => ExitCode::from(3),
    })
}
