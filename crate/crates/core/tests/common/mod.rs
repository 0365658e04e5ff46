#![allow(dead_code)]

use boussinesq_core::lp::LpFamily;
use boussinesq_core::spectral::{biot_savart, Grid, SpectralField, VelocityField};
use boussinesq_core::surrogate::{random_field, SurrogateSpec};

pub fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

pub fn family(n: usize) -> LpFamily {
    LpFamily::with_default_profile(grid(n)).unwrap()
}

/// Random-phase field with spectrum `|k|^-beta` on `kmin <= |k| <= kmax`.
pub fn smooth(n: usize, beta: f64, kmax: f64, seed: u64) -> SpectralField {
    random_field(grid(n), &SurrogateSpec::new(beta, 1.0, 1.0, kmax), seed).unwrap()
}

pub fn velocity(n: usize, kmax: f64, seed: u64) -> VelocityField {
    biot_savart(&smooth(n, 2.0, kmax, seed))
}
