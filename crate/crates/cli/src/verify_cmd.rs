//! `evapfront verify`: certificate evaluation, oracle comparison, and
//! convergence-order reports over existing artifacts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use evapfront::artifact::RunArtifact;
use evapfront::config::RunConfig;
use evapfront::front::CouplingConfig;
use evapfront::verify::{
    certify_run, compare_front_to_oracle, neumann::neumann_mapping, self_convergence, CertStatus,
};
use serde_json::json;

fn load_artifact(path: Option<&Path>) -> Result<(PathBuf, RunArtifact)> {
    let dir = path.ok_or_else(|| anyhow!("--artifact is required for this mode"))?;
    let artifact = RunArtifact::read_dir(dir)
        .with_context(|| format!("reading artifact {}", dir.display()))?;
    Ok((dir.to_path_buf(), artifact))
}

fn write_report(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    std::fs::write(path, text).with_context(|| format!("writing report {}", path.display()))?;
    println!("report: {}", path.display());
    Ok(())
}

pub fn certify(artifact_dir: Option<&Path>, report_path: Option<&Path>) -> Result<ExitCode> {
    let (dir, artifact) = load_artifact(artifact_dir)?;
    let setup = artifact.config.setup();
    let grid = artifact.config.landau_grid().map_err(|e| anyhow!("{e}"))?;
    let coupling = artifact.config.coupling();
    let report = certify_run(
        &setup,
        &grid,
        &coupling,
        &artifact.ledger,
        &artifact.summary.report,
        &artifact.config.certification(),
    );

    for cert in &report.certificates {
        let tag = match cert.status {
            CertStatus::Pass => "PASS",
            CertStatus::Fail => "FAIL",
            CertStatus::NotApplicable => " n/a",
        };
        println!(
            "{tag} {:<22} observed {:>12.4e}  threshold {:>12.4e}  {}",
            cert.name, cert.observed, cert.threshold, cert.detail
        );
    }

    let value = serde_json::to_value(&report)?;
    let path = report_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join("certify_report.json"));
    write_report(&path, &json!({ "artifact": dir.display().to_string(), "certification": value }))?;
    Ok(if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

pub fn oracle(
    artifact_dir: Option<&Path>,
    report_path: Option<&Path>,
    max_rel_error: Option<f64>,
) -> Result<ExitCode> {
    let (dir, artifact) = load_artifact(artifact_dir)?;
    let cfg = &artifact.config;
    let window = cfg.oracle;
    let bar = max_rel_error.unwrap_or(window.max_rel_error);

    let oven_level = cfg.oven.samples[0].1;
    let mapping = neumann_mapping(&cfg.params, oven_level, cfg.init.e0)
        .map_err(|e| anyhow!("cannot build similarity mapping: {e}"))?;
    let comparison = compare_front_to_oracle(
        &artifact.ledger.records,
        &mapping,
        window.e_floor,
        window.min_displacement,
    );
    if comparison.points_compared == 0 {
        bail!("no series points fall inside the oracle validity window");
    }
    let pass = comparison.max_rel_error <= bar;

    // Thinned error table for the report (the full series stays in the
    // artifact).
    let stride = (artifact.ledger.records.len() / 50).max(1);
    let table: Vec<serde_json::Value> = artifact
        .ledger
        .records
        .iter()
        .step_by(stride)
        .map(|r| {
            let e_star = mapping.front_position(r.t);
            json!({
                "t": r.t,
                "e": r.e,
                "e_oracle": e_star,
                "rel_error": (r.e - e_star).abs() / (e_star - mapping.e0).abs().max(1e-300),
            })
        })
        .collect();

    println!(
        "oracle: lambda = {:.9}, Ste = {:.6}, surface level = {:.6}",
        mapping.lambda, mapping.stefan, mapping.surface_level
    );
    println!(
        "max relative front error {:.4e} over {} window points (bar {:.2e}): {}",
        comparison.max_rel_error,
        comparison.points_compared,
        bar,
        if pass { "PASS" } else { "FAIL" }
    );

    let path = report_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join("oracle_report.json"));
    write_report(
        &path,
        &json!({
            "artifact": dir.display().to_string(),
            "lambda": mapping.lambda,
            "stefan": mapping.stefan,
            "surface_level": mapping.surface_level,
            "t_offset": mapping.t_offset,
            "window": { "e_floor": window.e_floor, "min_displacement": window.min_displacement },
            "max_rel_error": comparison.max_rel_error,
            "max_abs_error": comparison.max_abs_error,
            "points_compared": comparison.points_compared,
            "bar": bar,
            "pass": pass,
            "table": table,
        }),
    )?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

pub fn converge(
    ladder: &[PathBuf],
    report_path: Option<&Path>,
    artifact_dir: Option<&Path>,
) -> Result<ExitCode> {
    if ladder.len() < 3 {
        bail!("converge mode needs a ladder of at least 3 configs (got {})", ladder.len());
    }
    let configs: Vec<RunConfig> = ladder
        .iter()
        .map(|p| RunConfig::from_path(p).map_err(|e| anyhow!("{}: {e}", p.display())))
        .collect::<Result<_>>()?;
    for (i, c) in configs.iter().enumerate().skip(1) {
        if c.params != configs[0].params || c.init != configs[0].init {
            bail!(
                "ladder config {} changes the physics, not just grid/step",
                ladder[i].display()
            );
        }
    }
    let base = &configs[0];
    let setup = base.setup();
    let levels: Vec<(usize, f64)> = configs
        .iter()
        .map(|c| (c.grid.n_l, c.stepping.coupling.dt))
        .collect();
    let coupling = CouplingConfig {
        ..base.coupling()
    };
    let study = self_convergence(&setup, &levels, &coupling).map_err(|e| anyhow!("{e}"))?;

    println!("level   nodes        dt      |u-ref|      |w-ref|      |e-ref|");
    for (i, &(n, dt)) in study.levels.iter().enumerate() {
        println!(
            "{i:>5}  {n:>6}  {dt:>8.2e}  {:>10.4e}  {:>10.4e}  {:>10.4e}",
            study.u_errors[i], study.w_errors[i], study.e_errors[i]
        );
    }
    println!(
        "orders: u {:?}  w {:?}  e {:?}  (monotone: {})",
        study.u_orders, study.w_orders, study.e_orders, study.monotone
    );

    let path = report_path.map(Path::to_path_buf).unwrap_or_else(|| {
        artifact_dir
            .map(|d| d.join("converge_report.json"))
            .unwrap_or_else(|| PathBuf::from("converge_report.json"))
    });
    write_report(
        &path,
        &json!({
            "levels": study.levels,
            "reference": study.reference,
            "u_errors": study.u_errors,
            "w_errors": study.w_errors,
            "e_errors": study.e_errors,
            "u_orders": study.u_orders,
            "w_orders": study.w_orders,
            "e_orders": study.e_orders,
            "monotone": study.monotone,
        }),
    )?;
    Ok(if study.monotone {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}
