//! On-disk run configuration.
//!
//! A run is described by one TOML file with sections `params`, `sorption`,
//! `oven`, `init`, `grid`, `stepping`, `tolerances`, `oracle` and the
//! top-level `horizon`. Initial fields may be given inline (`u0 = [...]`) or
//! as references to single-column CSV files (`u0_csv = "u0.csv"`, resolved
//! relative to the config file). Loading materializes CSV references into
//! inline arrays, so a stored snapshot is always self-contained, and the
//! config hash is content-based: the SHA-256 of the canonical TOML
//! serialization.
//!
//! ```toml
//! horizon = 0.4
//!
//! [params]
//! c_l = 1.0      # crumb volumetric heat capacity
//! c_a = 1.0
//! k_l = 1.0      # conductivities
//! k_a = 1.0
//! d_l = 0.2      # moisture diffusivities
//! d_a = 0.1
//! h = 1.0        # convective coefficient at x = 1
//! sigma = 1e-2   # radiative constant
//! b1 = 1.0       # sorption flux coefficients
//! b2 = 1.0
//! latent = 1.0   # latent heat
//! theta_c = 1.0  # phase-transition temperature offset
//!
//! [sorption]
//! breakpoints = [[0.0, 0.5], [2.0, 0.9]]
//! smoothing_halfwidth = 0.0
//! cap = 1.0
//! argument = "shifted"   # p applied to u(t,1)+theta_c; "literal" uses u(t,1)
//!
//! [oven]
//! samples = [[0.0, 2.0]]
//! constant = true
//!
//! [init]
//! e0 = 0.5
//! u0 = [0.0, 0.0, 0.0]   # uniform samples of [0,1]; or u0_csv = "u0.csv"
//! w0 = [1.0, 1.0, 1.0]
//!
//! [grid]
//! n_l = 101
//! n_a = 101
//!
//! [stepping]
//! mode = "picard"
//! dt = 1e-4
//! # picard_tol, picard_max_iter, delta_stop, cfl_safety, newton_tol,
//! # newton_max_iter, delta1_factor, dt_growth, dt_growth_every,
//! # dt_min_factor, validation_tol, radiative_guard
//!
//! [tolerances]
//! validation = 1e-6
//! # sign_factor, mass_c, enthalpy_c, cumulative_drift, energy_slack,
//! # front_regularity_slack, stefan_factor
//!
//! [oracle]
//! e_floor = 0.2
//! min_displacement = 0.05
//! max_rel_error = 0.01
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::front::CouplingConfig;
use crate::landau::LandauGrid;
use crate::problem::{
    InitialData, ModelFlags, OvenSchedule, PhysicalParams, ProblemSetup, SorptionArg,
    SorptionFunction,
};
use crate::verify::CertificationConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("TOML parse error: {0}")]
    Parse(String),
    #[error("init field {0}: provide exactly one of the inline array and the CSV reference")]
    AmbiguousField(&'static str),
    #[error("init field {0} missing (neither inline array nor CSV reference)")]
    MissingField(&'static str),
    #[error("CSV field file {path}, line {line}: {msg}")]
    CsvField {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("invalid grid: {0}")]
    Grid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SorptionSection {
    #[serde(flatten)]
    pub function: SorptionFunction,
    #[serde(default)]
    pub argument: SorptionArg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitSection {
    pub e0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0_csv: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub n_l: usize,
    pub n_a: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { n_l: 101, n_a: 101 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SteppingSection {
    #[serde(flatten)]
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub radiative_guard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceSection {
    /// Discrete slack of the admissibility checks (A2), (A5).
    pub validation: f64,
    #[serde(flatten)]
    pub certification: CertificationConfig,
}

impl Default for ToleranceSection {
    fn default() -> Self {
        ToleranceSection {
            validation: 1e-6,
            certification: CertificationConfig::default(),
        }
    }
}

/// Validity window and pass bar of the similarity-oracle comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleSection {
    /// Compare only while the oracle front stays above this level.
    pub e_floor: f64,
    /// Compare only once the oracle displacement exceeds this.
    pub min_displacement: f64,
    /// Maximum relative front error accepted.
    pub max_rel_error: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            e_floor: 0.2,
            min_displacement: 0.05,
            max_rel_error: 0.01,
        }
    }
}

/// Complete, self-contained description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub horizon: f64,
    pub params: PhysicalParams,
    pub sorption: SorptionSection,
    pub oven: OvenSchedule,
    pub init: InitSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub stepping: SteppingSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

fn read_field_csv(path: &Path) -> Result<Vec<f64>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // Accept a single column, or take the last comma-separated column
        // (so "x,value" exports also load).
        let cell = line.rsplit(',').next().unwrap().trim();
        let v: f64 = cell.parse().map_err(|_| ConfigError::CsvField {
            path: path.display().to_string(),
            line: idx + 1,
            msg: format!("not a number: {cell:?}"),
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(ConfigError::CsvField {
            path: path.display().to_string(),
            line: 0,
            msg: "no data rows".into(),
        });
    }
    Ok(values)
}

impl RunConfig {
    /// Parses a config from TOML text. `base_dir` resolves CSV field
    /// references; pass `None` to reject them.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config: RunConfig =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.materialize(base_dir)?;
        Ok(config)
    }

    /// Loads and materializes a config file.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text, path.parent())
    }

    /// Resolves CSV references into inline arrays.
    fn materialize(&mut self, base_dir: Option<&Path>) -> Result<(), ConfigError> {
        let resolve = |inline: &mut Option<Vec<f64>>,
                       csv: &mut Option<String>,
                       name: &'static str|
         -> Result<(), ConfigError> {
            match (inline.is_some(), csv.as_ref()) {
                (true, Some(_)) => Err(ConfigError::AmbiguousField(name)),
                (true, None) => Ok(()),
                (false, Some(rel)) => {
                    let path = match base_dir {
                        Some(dir) => dir.join(rel),
                        None => Path::new(rel).to_path_buf(),
                    };
                    *inline = Some(read_field_csv(&path)?);
                    *csv = None;
                    Ok(())
                }
                (false, None) => Err(ConfigError::MissingField(name)),
            }
        };
        let init = &mut self.init;
        resolve(&mut init.u0, &mut init.u0_csv, "u0")?;
        resolve(&mut init.w0, &mut init.w0_csv, "w0")?;
        Ok(())
    }

    /// The physical problem this config describes.
    pub fn setup(&self) -> ProblemSetup {
        ProblemSetup {
            params: self.params,
            sorption: self.sorption.function.clone(),
            oven: self.oven.clone(),
            init: InitialData {
                e0: self.init.e0,
                u0: self.init.u0.clone().unwrap_or_default(),
                w0: self.init.w0.clone().unwrap_or_default(),
            },
            horizon: self.horizon,
            flags: ModelFlags {
                sorption_arg: self.sorption.argument,
                radiative_guard: self.stepping.radiative_guard,
            },
        }
    }

    pub fn landau_grid(&self) -> Result<LandauGrid, ConfigError> {
        LandauGrid::new(self.grid.n_l, self.grid.n_a).map_err(|e| ConfigError::Grid(e.to_string()))
    }

    /// Coupling controls with the validation tolerance wired in.
    pub fn coupling(&self) -> CouplingConfig {
        CouplingConfig {
            validation_tol: self.tolerances.validation,
            ..self.stepping.coupling
        }
    }

    pub fn certification(&self) -> CertificationConfig {
        self.tolerances.certification
    }

    /// Canonical serialization: struct field order, CSV references already
    /// materialized. Stable across runs for identical content.
    pub fn to_canonical_toml(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }

    /// Hex-truncated SHA-256 of the canonical serialization.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_canonical_toml().as_bytes());
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Builds a config from library-side pieces (generators, sweeps, tests).
    pub fn from_parts(
        setup: &ProblemSetup,
        grid: LandauGrid,
        coupling: CouplingConfig,
    ) -> RunConfig {
        RunConfig {
            horizon: setup.horizon,
            params: setup.params,
            sorption: SorptionSection {
                function: setup.sorption.clone(),
                argument: setup.flags.sorption_arg,
            },
            oven: setup.oven.clone(),
            init: InitSection {
                e0: setup.init.e0,
                u0: Some(setup.init.u0.clone()),
                u0_csv: None,
                w0: Some(setup.init.w0.clone()),
                w0_csv: None,
            },
            grid: GridSection {
                n_l: grid.n_l(),
                n_a: grid.n_a(),
            },
            stepping: SteppingSection {
                coupling,
                radiative_guard: setup.flags.radiative_guard,
            },
            tolerances: ToleranceSection::default(),
            oracle: OracleSection::default(),
        }
    }
}
