//! Calibrated constants for checks whose constants are only known to exist.
//!
//! The constants come from the bundled reference configuration and are
//! enforced only on runs whose configuration hash equals the reference hash.

use std::collections::BTreeMap;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::config::{parse_config, RunConfig};
use crate::error::CliResult;
use boussinesq_core::lp::LpFamily;
use boussinesq_core::paraproduct::commutator_sweep;
use boussinesq_core::spectral::{biot_savart, Grid, SpectralField, VelocityField};
use boussinesq_core::surrogate::{random_field, SurrogateSpec};

pub const REFERENCE_CONFIG: &str = include_str!("../configs/reference.json");
pub const BUNDLED_CALIBRATION: &str = include_str!("../data/calibration.json");

/// How the random commutator pairs are drawn.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorCalibration {
    pub grid_n: usize,
    pub seeds: u64,
    pub kcut: f64,
    pub beta: f64,
    /// Sup of the band ratio over all seeds on the calibration grid.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub reference_hash: String,
    pub constants: BTreeMap<String, f64>,
    pub commutator: CommutatorCalibration,
}

impl Calibration {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_CALIBRATION).expect("bundled calibration is valid JSON")
    }

    /// The calibrated constant for `check_id`, if `config_hash` is the reference.
    pub fn constant_for(&self, config_hash: &str, check_id: &str) -> Option<f64> {
        if config_hash != self.reference_hash {
            return None;
        }
        self.constants.get(check_id).copied()
    }
}

pub fn reference_config() -> RunConfig {
    parse_config(REFERENCE_CONFIG).expect("bundled reference config is valid")
}

/// Velocity and density of the commutator pair for `seed`. The fields are
/// the same on every grid resolving `kcut`.
pub fn commutator_pair(grid: Grid, seed: u64, kcut: f64, beta: f64) -> boussinesq_core::Result<(VelocityField, SpectralField)> {
    let omega = random_field(grid, &SurrogateSpec::new(beta, 1.0, 1.0, kcut), seed)?;
    let rho_spec = SurrogateSpec {
        seed_offset: 1 << 32,
        ..SurrogateSpec::new(beta, 1.0, 1.0, kcut)
    };
    let rho = random_field(grid, &rho_spec, seed)?;
    Ok((biot_savart(&omega), rho))
}

/// Sup over all bands and seeds `0..seeds` of the commutator ratio on an `n` grid.
pub fn commutator_sup(n: usize, seeds: u64, kcut: f64, beta: f64, workers: usize) -> boussinesq_core::Result<f64> {
    let grid = Grid::new(n)?;
    let family = LpFamily::with_default_profile(grid)?;
    let workers = workers.max(1) as u64;
    let partial: Vec<boussinesq_core::Result<f64>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let family = &family;
                s.spawn(move || {
                    let mut best = 0.0f64;
                    for seed in (w..seeds).step_by(workers as usize) {
                        let (u, rho) = commutator_pair(grid, seed, kcut, beta)?;
                        for r in commutator_sweep(&u, &rho, family) {
                            best = best.max(r.ratio);
                        }
                    }
                    Ok(best)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    partial.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// Recomputes every calibrated constant from the reference configuration.
pub fn generate(workers: usize) -> CliResult<Calibration> {
    let config = reference_config();
    let outcome = crate::dispatch::evaluate_checks(&config, None)?;
    let constants = outcome
        .records
        .iter()
        .filter(|r| {
            r.check_id
                .parse::<boussinesq_core::harness::CheckId>()
                .map(|id| id.universal_threshold().is_none())
                .unwrap_or(false)
        })
        .map(|r| (r.check_id.clone(), r.empirical_constant()))
        .collect();
    let (grid_n, seeds, kcut, beta) = (64, 50, 20.0, 2.0);
    Ok(Calibration {
        reference_hash: config.hash(),
        constants,
        commutator: CommutatorCalibration {
            grid_n,
            seeds,
            kcut,
            beta,
            constant: commutator_sup(grid_n, seeds, kcut, beta, workers)?,
        },
    })
}
