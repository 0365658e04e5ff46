use std::ops::RangeInclusive;

use super::profile::LpProfile;
use crate::error::{Error, Result};
use crate::spectral::{lp_norm_samples, pointwise_magnitude, Grid, LebesgueExponent, SpectralField};

/// Largest band index whose blocks can interact: `Delta_j Delta_k = 0` for `|j - k| > OVERLAP`.
pub const OVERLAP: i32 = 1;

/// Whether [`band_project`] applies a single block or a partial sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `Delta_j`, zero for `j <= -2`.
    Delta,
    /// `S_j = sum_{k <= j} Delta_k`, zero for `j <= -2`.
    PartialSum,
}

/// Dyadic Fourier multipliers evaluated on a grid's lattice.
///
/// Bands run from `-1` to `j_max`, where `2^{j_max}` covers every mode kept
/// by dealiasing, so `S_{j_max}` is the identity on dealiased fields.
#[derive(Clone, Debug)]
pub struct LpFamily {
    grid: Grid,
    profile: LpProfile,
    j_max: i32,
    radii: Vec<f64>,
    bands: Vec<Vec<f64>>,
    partials: Vec<Vec<f64>>,
}

impl LpFamily {
    pub fn new(grid: Grid, profile: LpProfile) -> Result<Self> {
        profile.validate()?;
        let r = grid.dealias_radius();
        if r < 2 {
            return Err(Error::param("n", "grid too small to host the j = 0 annulus"));
        }
        let reach = std::f64::consts::SQRT_2 * r as f64;
        let mut j_max = 0;
        while 2f64.powi(j_max) < reach {
            j_max += 1;
        }
        let radii: Vec<f64> = (0..grid.points())
            .map(|idx| {
                let (k1, k2) = grid.mode(idx);
                ((k1 * k1 + k2 * k2) as f64).sqrt()
            })
            .collect();
        let mut family = LpFamily {
            grid,
            profile,
            j_max,
            radii,
            bands: Vec::new(),
            partials: Vec::new(),
        };
        family.bands = (-1..=j_max).map(|j| family.band_table(j)).collect();
        family.partials = (-1..=j_max).map(|j| family.partial_table(j)).collect();
        Ok(family)
    }

    pub fn with_default_profile(grid: Grid) -> Result<Self> {
        Self::new(grid, LpProfile::default())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn profile(&self) -> LpProfile {
        self.profile
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn overlap(&self) -> i32 {
        OVERLAP
    }

    /// Band indices `-1..=j_max`.
    pub fn band_range(&self) -> RangeInclusive<i32> {
        -1..=self.j_max
    }

    pub fn band_count(&self) -> usize {
        (self.j_max + 2) as usize
    }

    /// Multiplier of `Delta_j` at radius `r`.
    pub fn band_value(&self, j: i32, r: f64) -> f64 {
        match j {
            j if j < -1 => 0.0,
            -1 => self.profile.low(r),
            j => self.profile.annulus(r / 2f64.powi(j)),
        }
    }

    /// Multiplier of `S_j` at radius `r`.
    pub fn partial_value(&self, j: i32, r: f64) -> f64 {
        if j < -1 {
            0.0
        } else {
            self.profile.cutoff(r / 2f64.powi(j + 1))
        }
    }

    fn band_table(&self, j: i32) -> Vec<f64> {
        self.radii.iter().map(|&r| self.band_value(j, r)).collect()
    }

    fn partial_table(&self, j: i32) -> Vec<f64> {
        self.radii.iter().map(|&r| self.partial_value(j, r)).collect()
    }

    pub fn delta(&self, f: &SpectralField, j: i32) -> SpectralField {
        band_project(f, self, j, Projection::Delta)
    }

    pub fn partial(&self, f: &SpectralField, j: i32) -> SpectralField {
        band_project(f, self, j, Projection::PartialSum)
    }

    pub fn decompose(&self, f: &SpectralField) -> BandDecomposition {
        BandDecomposition {
            j_max: self.j_max,
            bands: self.band_range().map(|j| self.delta(f, j)).collect(),
        }
    }

    /// Physical samples of every band, indexed by `j + 1`.
    pub fn band_samples(&self, f: &SpectralField) -> Vec<Vec<f64>> {
        self.band_range().map(|j| self.delta(f, j).to_physical()).collect()
    }

    /// `||Delta_j f||_p` for every band, indexed by `j + 1`.
    pub fn band_norms(&self, f: &SpectralField, p: LebesgueExponent) -> Vec<f64> {
        self.band_samples(f)
            .into_iter()
            .map(|s| lp_norm_samples(self.grid, s.into_iter(), p))
            .collect()
    }

    /// Band norms of a vector field, with pointwise Euclidean magnitude.
    pub fn band_norms_vector(&self, components: &[&SpectralField], p: LebesgueExponent) -> Vec<f64> {
        self.band_range()
            .map(|j| {
                let samples: Vec<Vec<f64>> =
                    components.iter().map(|c| self.delta(c, j).to_physical()).collect();
                lp_norm_samples(self.grid, pointwise_magnitude(&samples).into_iter(), p)
            })
            .collect()
    }

    pub fn band_sups(&self, f: &SpectralField) -> Vec<f64> {
        self.band_norms(f, LebesgueExponent::Infinity)
    }

    pub fn band_sups_vector(&self, components: &[&SpectralField]) -> Vec<f64> {
        self.band_norms_vector(components, LebesgueExponent::Infinity)
    }

    fn check_grid(&self, f: &SpectralField) {
        assert_eq!(
            f.grid(),
            self.grid,
            "field grid {} does not match the family grid {}",
            f.grid().n(),
            self.grid.n()
        );
    }
}

/// Applies `Delta_j` or `S_j` to `f`.
pub fn band_project(f: &SpectralField, family: &LpFamily, j: i32, mode: Projection) -> SpectralField {
    family.check_grid(f);
    if j < -1 {
        return SpectralField::zeros(f.grid());
    }
    let table = match mode {
        Projection::Delta => &family.bands,
        Projection::PartialSum => &family.partials,
    };
    match table.get((j + 1) as usize) {
        Some(m) => f.apply_multiplier(m),
        None => {
            let m: Vec<f64> = match mode {
                Projection::Delta => family.band_table(j),
                Projection::PartialSum => family.partial_table(j),
            };
            f.apply_multiplier(&m)
        }
    }
}

/// The blocks `Delta_{-1} f, ..., Delta_{j_max} f`.
#[derive(Clone, Debug)]
pub struct BandDecomposition {
    pub j_max: i32,
    pub bands: Vec<SpectralField>,
}

impl BandDecomposition {
    pub fn band(&self, j: i32) -> Option<&SpectralField> {
        if j < -1 {
            return None;
        }
        self.bands.get((j + 1) as usize)
    }

    pub fn sum(&self) -> SpectralField {
        let mut total = SpectralField::zeros(self.bands[0].grid());
        for b in &self.bands {
            total += b;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(n: usize) -> LpFamily {
        LpFamily::with_default_profile(Grid::new(n).unwrap()).unwrap()
    }

    #[test]
    fn j_max_covers_dealiased_disc() {
        assert_eq!(family(16).j_max(), 3);
        assert_eq!(family(64).j_max(), 5);
        assert_eq!(family(128).j_max(), 6);
        assert_eq!(family(256).j_max(), 7);
    }

    #[test]
    fn mode_three_meets_bands_one_and_two() {
        let fam = family(32);
        let f = SpectralField::wave(fam.grid(), 3, 0, 1.0, 0.4).unwrap();
        let d1 = fam.delta(&f, 1);
        let d2 = fam.delta(&f, 2);
        assert!((&d1 + &d2).max_coeff_diff(&f) < 1e-15);
        assert!(d1.max_coeff() > 0.0 && d2.max_coeff() > 0.0);
        assert_eq!(fam.delta(&f, 5).max_coeff(), 0.0);
        assert_eq!(fam.delta(&f, -2).max_coeff(), 0.0);
    }

    #[test]
    fn low_block_is_the_mean_on_the_lattice() {
        let fam = family(32);
        let f = SpectralField::from_fn(fam.grid(), |x, y| 2.0 + x.cos() + (x + y).sin());
        let low = fam.delta(&f, -1);
        assert!(low.max_coeff_diff(&SpectralField::constant(fam.grid(), 2.0)) < 1e-15);
    }

    #[test]
    fn partial_sum_matches_cumulative_bands() {
        let fam = family(32);
        let f = SpectralField::from_fn(fam.grid(), |x, y| (3.0 * x).cos() * (5.0 * y).sin() + x.sin());
        for j in fam.band_range() {
            let mut acc = SpectralField::zeros(fam.grid());
            for k in -1..=j {
                acc += &fam.delta(&f, k);
            }
            assert!(acc.max_coeff_diff(&fam.partial(&f, j)) < 1e-15);
        }
        assert!(fam.partial(&f, fam.j_max()).max_coeff_diff(&f) < 1e-15);
    }
}
