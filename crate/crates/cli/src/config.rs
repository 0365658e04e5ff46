//! The run configuration document.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{as_config_error, CliError, CliResult};
use boussinesq_core::harness::{CheckId, Exponents, PerturbationSpec};
use boussinesq_core::initial::InitialData;
use boussinesq_core::lp::{GammaSpec, LpFamily, LpProfile};
use boussinesq_core::solver::SolverConfig;
use boussinesq_core::spectral::Grid;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Simulate,
    Verify,
    Sweep,
    Report,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
            Command::Report => "report",
        }
    }
}

/// Quantities a sweep may vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Kappa,
    Nu,
    Dt,
    TEnd,
    N,
    Seed,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Kappa => "kappa",
            SweepParameter::Nu => "nu",
            SweepParameter::Dt => "dt",
            SweepParameter::TEnd => "t_end",
            SweepParameter::N => "n",
            SweepParameter::Seed => "seed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessConfig {
    pub perturbation: PerturbationSpec,
}

/// Truncation levels of the approximation experiment; `omega` and `rho`
/// initial data play the roles of `f` and `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximationConfig {
    pub m_values: Vec<i32>,
}

fn default_n() -> usize {
    128
}

fn default_gamma() -> String {
    "log".into()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("output")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Command,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub lp_profile: LpProfile,
    #[serde(default = "default_gamma")]
    pub gamma: String,
    #[serde(default)]
    pub exponents: Exponents,
    #[serde(default)]
    pub initial_data: Option<InitialData>,
    /// Checks evaluated by `verify`; empty selects every streaming check.
    #[serde(default)]
    pub checks: Vec<CheckId>,
    #[serde(default)]
    pub chemin_band: Option<i32>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub uniqueness: Option<UniquenessConfig>,
    #[serde(default)]
    pub approximation: Option<ApproximationConfig>,
}

impl RunConfig {
    pub fn grid(&self) -> CliResult<Grid> {
        Grid::new(self.n).map_err(as_config_error)
    }

    pub fn family(&self) -> CliResult<LpFamily> {
        LpFamily::new(self.grid()?, self.lp_profile).map_err(as_config_error)
    }

    pub fn gamma_spec(&self) -> CliResult<GammaSpec> {
        GammaSpec::catalog(&self.gamma).map_err(as_config_error)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        self.solver.validate().map_err(as_config_error)?;
        self.lp_profile.validate().map_err(as_config_error)?;
        self.exponents.validate().map_err(as_config_error)?;
        self.gamma_spec()?;
        let family = self.family()?;
        if self.command != Command::Report && self.initial_data.is_none() {
            return Err(CliError::config("initial_data", "required for simulate, verify and sweep"));
        }
        if let Some(j) = self.chemin_band {
            if j < 0 || j > family.j_max() {
                return Err(CliError::config("chemin_band", format!("{j} is outside [0, {}]", family.j_max())));
            }
        }
        match (&self.sweep, self.command) {
            (None, Command::Sweep) => return Err(CliError::config("sweep", "required for the sweep command")),
            (Some(s), _) if s.values.is_empty() => {
                return Err(CliError::config("sweep.values", "must not be empty"))
            }
            _ => {}
        }
        if let Some(a) = &self.approximation {
            if a.m_values.len() < 3 {
                return Err(CliError::config("approximation.m_values", "needs at least three levels"));
            }
            if let Some(m) = a.m_values.iter().find(|m| **m < -1 || **m > family.j_max()) {
                return Err(CliError::config(
                    "approximation.m_values",
                    format!("{m} is outside [-1, {}]", family.j_max()),
                ));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON of every field except the output directory.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let text = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn short_hash(&self) -> String {
        self.hash()[..8].to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses and validates a JSON configuration, filling defaults.
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let config: RunConfig = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        // serde names the offending key in its message.
        let field = msg
            .split('`')
            .nth(1)
            .map(str::to_string)
            .unwrap_or_else(|| "document".into());
        CliError::config(field, msg)
    })?;
    config.validate()?;
    Ok(config)
}
