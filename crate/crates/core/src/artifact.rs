//! Run artifacts: the on-disk record of one simulation.
//!
//! An artifact directory holds three files:
//!
//! * `config.toml` — canonical snapshot of the materialized [`RunConfig`];
//! * `series.csv` — the per-step time series / balance ledger, one row per
//!   accepted step, schema-tagged with a leading `# evapfront-series-v1`
//!   comment and the fixed header below;
//! * `summary.json` — termination report, initial ledger values, hypothesis
//!   flags, certificate digest, wall time, and the config hash the series
//!   belongs to.
//!
//! Readers never need the original config file: the snapshot is
//! self-contained. Schema tags are checked on read and a mismatch is an
//! explicit migration error, not a parse failure. Float columns are written
//! with the shortest round-trip representation, so identical runs produce
//! byte-identical series.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::RunConfig;
use crate::front::{BalanceLedger, Classification, LedgerInit, StepRecord, TerminationReport};
use crate::verify::Hypotheses;

pub const SERIES_SCHEMA: &str = "evapfront-series-v1";
pub const SUMMARY_SCHEMA: &str = "evapfront-summary-v1";
pub const SERIES_HEADER: &str = "t,dt,e,e_prime,u_boundary,w_front,w_min,mass,enthalpy,energy,mass_residual,enthalpy_residual,u_crumb_max,u_crust_min,comparison_excess,stefan_residual,picard_iters,newton_iters";

pub const CONFIG_FILE: &str = "config.toml";
pub const SERIES_FILE: &str = "series.csv";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema mismatch in {file}: found {found:?}, this build reads {expected:?}; migrate the artifact")]
    SchemaMismatch {
        file: String,
        found: String,
        expected: String,
    },
    #[error("{file} line {line}: {msg}")]
    Malformed {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("summary JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config snapshot: {0}")]
    Config(#[from] crate::config::ConfigError),
}

/// JSON summary of a finished run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema: String,
    pub config_hash: String,
    pub classification: Classification,
    pub wall_time_s: f64,
    pub report: TerminationReport,
    pub initial: LedgerInit,
    pub hypotheses: Hypotheses,
    /// Certificate digest: `(name, pass|fail|n/a)` per certificate.
    pub certificates: Vec<(String, String)>,
    pub certificates_passed: bool,
}

/// A complete run artifact: config snapshot, summary, per-step series.
#[derive(Debug, Clone)]
pub struct RunArtifact {
    pub config: RunConfig,
    pub summary: RunSummary,
    pub ledger: BalanceLedger,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ArtifactError + '_ {
    move |source| ArtifactError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_series(path: &Path, ledger: &BalanceLedger) -> Result<(), ArtifactError> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    let mut out = std::io::BufWriter::new(file);
    let emit = |res: std::io::Result<()>| res.map_err(io_err(path));
    emit(writeln!(out, "# {SERIES_SCHEMA}"))?;
    emit(writeln!(out, "{SERIES_HEADER}"))?;
    for r in &ledger.records {
        emit(writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.t,
            r.dt,
            r.e,
            r.e_prime,
            r.u_boundary,
            r.w_front,
            r.w_min,
            r.mass,
            r.enthalpy,
            r.energy,
            r.mass_residual,
            r.enthalpy_residual,
            r.u_crumb_max,
            r.u_crust_min,
            r.comparison_excess,
            r.stefan_residual,
            r.picard_iters,
            r.newton_iters
        ))?;
    }
    emit(out.flush())
}

fn read_series(path: &Path) -> Result<Vec<StepRecord>, ArtifactError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let file = path.display().to_string();
    let mut lines = text.lines().enumerate();
    let (_, tag) = lines.next().ok_or_else(|| ArtifactError::Malformed {
        file: file.clone(),
        line: 1,
        msg: "empty series file".into(),
    })?;
    let found = tag.trim_start_matches('#').trim().to_string();
    if found != SERIES_SCHEMA {
        return Err(ArtifactError::SchemaMismatch {
            file,
            found,
            expected: SERIES_SCHEMA.into(),
        });
    }
    let (_, header) = lines.next().ok_or_else(|| ArtifactError::Malformed {
        file: file.clone(),
        line: 2,
        msg: "missing header row".into(),
    })?;
    if header.trim() != SERIES_HEADER {
        return Err(ArtifactError::SchemaMismatch {
            file,
            found: header.trim().into(),
            expected: SERIES_HEADER.into(),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 18 {
            return Err(ArtifactError::Malformed {
                file: file.clone(),
                line: idx + 1,
                msg: format!("expected 18 columns, got {}", cells.len()),
            });
        }
        let bad = |msg: String| ArtifactError::Malformed {
            file: file.clone(),
            line: idx + 1,
            msg,
        };
        let f = |k: usize| -> Result<f64, ArtifactError> {
            cells[k]
                .parse()
                .map_err(|_| bad(format!("column {} not a number: {:?}", k + 1, cells[k])))
        };
        let u = |k: usize| -> Result<usize, ArtifactError> {
            cells[k]
                .parse()
                .map_err(|_| bad(format!("column {} not a count: {:?}", k + 1, cells[k])))
        };
        records.push(StepRecord {
            t: f(0)?,
            dt: f(1)?,
            e: f(2)?,
            e_prime: f(3)?,
            u_boundary: f(4)?,
            w_front: f(5)?,
            w_min: f(6)?,
            mass: f(7)?,
            enthalpy: f(8)?,
            energy: f(9)?,
            mass_residual: f(10)?,
            enthalpy_residual: f(11)?,
            u_crumb_max: f(12)?,
            u_crust_min: f(13)?,
            comparison_excess: f(14)?,
            stefan_residual: f(15)?,
            picard_iters: u(16)?,
            newton_iters: u(17)?,
        });
    }
    Ok(records)
}

impl RunArtifact {
    /// Writes `config.toml`, `series.csv`, `summary.json` into `dir`,
    /// creating it as needed.
    pub fn write_dir(&self, dir: &Path) -> Result<(), ArtifactError> {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let config_path = dir.join(CONFIG_FILE);
        std::fs::write(&config_path, self.config.to_canonical_toml())
            .map_err(io_err(&config_path))?;
        write_series(&dir.join(SERIES_FILE), &self.ledger)?;
        let summary_path = dir.join(SUMMARY_FILE);
        let json = serde_json::to_string_pretty(&self.summary)?;
        std::fs::write(&summary_path, json + "\n").map_err(io_err(&summary_path))?;
        Ok(())
    }

    /// Reads an artifact directory back, checking both schema tags.
    pub fn read_dir(dir: &Path) -> Result<Self, ArtifactError> {
        let config = RunConfig::from_path(&dir.join(CONFIG_FILE))?;
        let summary_path = dir.join(SUMMARY_FILE);
        let text = std::fs::read_to_string(&summary_path).map_err(io_err(&summary_path))?;
        let summary: RunSummary = serde_json::from_str(&text)?;
        if summary.schema != SUMMARY_SCHEMA {
            return Err(ArtifactError::SchemaMismatch {
                file: summary_path.display().to_string(),
                found: summary.schema,
                expected: SUMMARY_SCHEMA.into(),
            });
        }
        let records = read_series(&dir.join(SERIES_FILE))?;
        Ok(RunArtifact {
            ledger: BalanceLedger {
                initial: summary.initial,
                records,
            },
            config,
            summary,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::{run, Classification};
    use crate::verify::{certify_run, hypotheses_of, seeded_battery, CertificationConfig};

    fn sample_artifact() -> RunArtifact {
        let case = seeded_battery(1, 3)[0].clone();
        let out = run(&case.setup, case.grid, &case.config).unwrap();
        let cert = certify_run(
            &case.setup,
            &case.grid,
            &case.config,
            &out.ledger,
            &out.report,
            &CertificationConfig::default(),
        );
        let config = RunConfig::from_parts(&case.setup, case.grid, case.config);
        let summary = RunSummary {
            schema: SUMMARY_SCHEMA.into(),
            config_hash: config.config_hash(),
            classification: out.report.classification,
            wall_time_s: 0.25,
            report: out.report.clone(),
            initial: out.ledger.initial,
            hypotheses: hypotheses_of(&case.setup, &case.config),
            certificates: cert.digest(),
            certificates_passed: cert.all_passed,
        };
        RunArtifact {
            config,
            summary,
            ledger: out.ledger,
        }
    }

    #[test]
    fn artifact_round_trips_bit_exactly() {
        let artifact = sample_artifact();
        let dir = std::env::temp_dir().join(format!("evapfront-art-{}", std::process::id()));
        artifact.write_dir(&dir).unwrap();
        let back = RunArtifact::read_dir(&dir).unwrap();
        assert_eq!(back.ledger.records.len(), artifact.ledger.records.len());
        for (a, b) in artifact.ledger.records.iter().zip(&back.ledger.records) {
            assert_eq!(a.t, b.t);
            assert_eq!(a.e, b.e);
            assert_eq!(a.mass_residual, b.mass_residual);
            assert_eq!(a.newton_iters, b.newton_iters);
        }
        assert_eq!(back.summary.config_hash, artifact.summary.config_hash);
        assert_eq!(back.config, artifact.config);
        // Writing the read-back artifact reproduces identical bytes.
        let dir2 = dir.with_extension("copy");
        back.write_dir(&dir2).unwrap();
        for file in [CONFIG_FILE, SERIES_FILE, SUMMARY_FILE] {
            let x = std::fs::read(dir.join(file)).unwrap();
            let y = std::fs::read(dir2.join(file)).unwrap();
            assert_eq!(x, y, "{file} not byte-identical");
        }
        std::fs::remove_dir_all(&dir).ok();
        std::fs::remove_dir_all(&dir2).ok();
    }

    #[test]
    fn schema_mismatch_is_a_migration_error() {
        let artifact = sample_artifact();
        let dir = std::env::temp_dir().join(format!("evapfront-mig-{}", std::process::id()));
        artifact.write_dir(&dir).unwrap();
        let series = dir.join(SERIES_FILE);
        let text = std::fs::read_to_string(&series).unwrap();
        std::fs::write(&series, text.replace("series-v1", "series-v0")).unwrap();
        match RunArtifact::read_dir(&dir) {
            Err(ArtifactError::SchemaMismatch { found, .. }) => {
                assert!(found.contains("series-v0"));
            }
            other => panic!("expected schema mismatch, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn classification_serializes_stably() {
        let json = serde_json::to_string(&Classification::FrontHitZero).unwrap();
        assert_eq!(json, "\"FrontHitZero\"");
    }
}
