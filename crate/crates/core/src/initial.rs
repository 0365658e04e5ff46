//! Declarative initial data, as read from run configurations.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::snapshot::read_snapshot;
use crate::spectral::{Grid, SpectralField};
use crate::surrogate::{random_field, SurrogateSpec};

fn one() -> f64 {
    1.0
}

/// One initial field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Zero,
    /// `amplitude * cos(k1 x1 + k2 x2 + phase)`.
    Mode {
        k1: i64,
        k2: i64,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Vorticity `2 amplitude sin x1 sin x2` of the cellular steady flow.
    TaylorGreen {
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Seeded random-phase power-law field.
    Random {
        #[serde(flatten)]
        spec: SurrogateSpec,
    },
    /// A field stored in the snapshot format. Relative paths resolve against
    /// the configuration's directory.
    Snapshot { path: PathBuf },
    Sum { terms: Vec<FieldSpec> },
}

impl FieldSpec {
    pub fn build(&self, grid: Grid, seed: u64, base_dir: Option<&Path>) -> Result<SpectralField> {
        match self {
            FieldSpec::Zero => Ok(SpectralField::zeros(grid)),
            FieldSpec::Mode { k1, k2, amplitude, phase } => {
                if !grid.is_resolved(*k1, *k2) {
                    return Err(Error::param("initial_data", format!("mode ({k1}, {k2}) is not resolved on a {} grid", grid.n())));
                }
                SpectralField::wave(grid, *k1, *k2, *amplitude, *phase)
            }
            FieldSpec::TaylorGreen { amplitude } => {
                Ok(SpectralField::from_fn(grid, |x, y| 2.0 * amplitude * x.sin() * y.sin()))
            }
            FieldSpec::Random { spec } => random_field(grid, spec, seed),
            FieldSpec::Snapshot { path } => {
                let full = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                let (field, _) = read_snapshot(&full)?;
                if field.grid() != grid {
                    return Err(Error::GridMismatch(field.grid().n(), grid.n()));
                }
                Ok(field)
            }
            FieldSpec::Sum { terms } => terms.iter().try_fold(SpectralField::zeros(grid), |acc, t| {
                Ok(&acc + &t.build(grid, seed, base_dir)?)
            }),
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self {
            FieldSpec::Zero => "zero".into(),
            FieldSpec::Mode { k1, k2, amplitude, phase } => format!("{amplitude} cos({k1} x1 + {k2} x2 + {phase})"),
            FieldSpec::TaylorGreen { amplitude } => format!("taylor-green({amplitude})"),
            FieldSpec::Random { spec } => format!(
                "random(beta={}, amplitude={}, kmin={}, kmax={:?}, offset={})",
                spec.beta, spec.amplitude, spec.kmin, spec.kmax, spec.seed_offset
            ),
            FieldSpec::Snapshot { path } => format!("snapshot({})", path.display()),
            FieldSpec::Sum { terms } => terms.iter().map(|t| t.describe()).collect::<Vec<_>>().join(" + "),
        }
    }
}

/// Vorticity and density specs of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub omega: FieldSpec,
    pub rho: FieldSpec,
}

impl InitialData {
    pub fn build(&self, grid: Grid, seed: u64, base_dir: Option<&Path>) -> Result<(SpectralField, SpectralField)> {
        Ok((self.omega.build(grid, seed, base_dir)?, self.rho.build(grid, seed, base_dir)?))
    }

    pub fn describe(&self) -> String {
        format!("omega = {}; rho = {}", self.omega.describe(), self.rho.describe())
    }
}
