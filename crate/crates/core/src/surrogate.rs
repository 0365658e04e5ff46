//! Seeded random-phase fields with a prescribed power-law spectrum, used as
//! stand-ins for rough initial data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Modes with `kmin <= |k| <= kmax` get physical amplitude
/// `amplitude * |k|^(-beta)` and an independent uniform phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurrogateSpec {
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_kmin")]
    pub kmin: f64,
    /// Defaults to the grid's dealias radius.
    #[serde(default)]
    pub kmax: Option<f64>,
    #[serde(default)]
    pub seed_offset: u64,
}

fn default_beta() -> f64 {
    3.0
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_kmin() -> f64 {
    1.0
}

impl Default for SurrogateSpec {
    fn default() -> Self {
        SurrogateSpec {
            beta: default_beta(),
            amplitude: default_amplitude(),
            kmin: default_kmin(),
            kmax: None,
            seed_offset: 0,
        }
    }
}

impl SurrogateSpec {
    pub fn new(beta: f64, amplitude: f64, kmin: f64, kmax: f64) -> Self {
        SurrogateSpec {
            beta,
            amplitude,
            kmin,
            kmax: Some(kmax),
            seed_offset: 0,
        }
    }
}

/// Builds the surrogate field. The random draws depend only on `spec` and
/// `seed`, so the same field is produced on every grid that resolves it.
pub fn random_field(grid: Grid, spec: &SurrogateSpec, seed: u64) -> Result<SpectralField> {
    let radius = grid.dealias_radius() as f64;
    let kmax = spec.kmax.unwrap_or(radius);
    if !(kmax <= radius) {
        return Err(Error::param(
            "kmax",
            format!("{kmax} exceeds the dealias radius {radius} of a {} grid", grid.n()),
        ));
    }
    if !(spec.kmin >= 0.0 && spec.kmin <= kmax) {
        return Err(Error::param("kmin", format!("{} is not in [0, kmax]", spec.kmin)));
    }
    if !spec.beta.is_finite() || !spec.amplitude.is_finite() {
        return Err(Error::param("beta", "beta and amplitude must be finite"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(spec.seed_offset));
    let bound = kmax.floor() as i64;
    let mut f = SpectralField::zeros(grid);
    for k2 in 0..=bound {
        for k1 in -bound..=bound {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let phase = rng.random::<f64>() * std::f64::consts::TAU;
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            if r < spec.kmin || r > kmax {
                continue;
            }
            f.add_wave(k1, k2, spec.amplitude * r.powf(-spec.beta), phase)?;
        }
    }
    Ok(f)
}
