use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::fft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Real scalar field on the torus stored as Fourier coefficients.
///
/// The physical field is `f(x) = sum_k c_k e^{ik.x}`, so coefficients carry
/// the units of the field itself. Physical samples are the real part of the
/// inverse transform; Hermitian symmetry of `c_k` is preserved by every
/// operator in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::default(); grid.points()],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(value, 0.0);
        f
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.points() {
            return Err(Error::LengthMismatch {
                expected: grid.points(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn from_physical(grid: Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.points() {
            return Err(Error::LengthMismatch {
                expected: grid.points(),
                got: samples.len(),
            });
        }
        let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft::forward(grid.n(), &mut data);
        let scale = 1.0 / grid.points() as f64;
        for c in &mut data {
            *c *= scale;
        }
        Ok(SpectralField { grid, coeffs: data })
    }

    /// Samples `f` at the grid nodes and transforms.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.points())
            .map(|idx| {
                let (x1, x2) = grid.coords(idx);
                f(x1, x2)
            })
            .collect();
        Self::from_physical(grid, &samples).expect("sample count matches grid")
    }

    /// `amplitude * cos(k.x + phase)`.
    pub fn wave(grid: Grid, k1: i64, k2: i64, amplitude: f64, phase: f64) -> Result<Self> {
        let mut f = Self::zeros(grid);
        f.add_wave(k1, k2, amplitude, phase)?;
        Ok(f)
    }

    /// Adds `amplitude * cos(k.x + phase)` in place.
    pub fn add_wave(&mut self, k1: i64, k2: i64, amplitude: f64, phase: f64) -> Result<()> {
        let half = (self.grid.n() / 2) as i64;
        if k1.abs() >= half || k2.abs() >= half {
            return Err(Error::param(
                "k",
                format!("wavevector ({k1}, {k2}) is not resolved on a {} grid", self.grid.n()),
            ));
        }
        if k1 == 0 && k2 == 0 {
            self.coeffs[0] += Complex64::new(amplitude * phase.cos(), 0.0);
            return Ok(());
        }
        let c = Complex64::from_polar(0.5 * amplitude, phase);
        let plus = self.grid.index_of(k1, k2).expect("checked above");
        let minus = self.grid.index_of(-k1, -k2).expect("checked above");
        self.coeffs[plus] += c;
        self.coeffs[minus] += c.conj();
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid
            .index_of(k1, k2)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    /// Physical samples in row-major order.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft::inverse(self.grid.n(), &mut data);
        data.into_iter().map(|c| c.re).collect()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Returns a copy with the mean mode removed.
    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = Complex64::default();
        f
    }

    /// Applies a real multiplier given per flat index.
    pub fn apply_multiplier(&self, m: &[f64]) -> Self {
        debug_assert_eq!(m.len(), self.coeffs.len());
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(m).map(|(c, &w)| c * w).collect(),
        }
    }

    /// Applies a complex multiplier evaluated per wavevector.
    pub fn map_modes(&self, mut f: impl FnMut(i64, i64, Complex64) -> Complex64) -> Self {
        let grid = self.grid;
        SpectralField {
            grid,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(idx, &c)| {
                    let (k1, k2) = grid.mode(idx);
                    f(k1, k2, c)
                })
                .collect(),
        }
    }

    /// Zeroes every mode outside the 2/3 dealiasing square.
    pub fn dealias(&mut self) {
        let grid = self.grid;
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let (k1, k2) = grid.mode(idx);
            if !grid.is_resolved(k1, k2) {
                *c = Complex64::default();
            }
        }
    }

    pub fn dealiased(mut self) -> Self {
        self.dealias();
        self
    }

    pub fn is_dealiased(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(idx, c)| {
            let (k1, k2) = self.grid.mode(idx);
            self.grid.is_resolved(k1, k2) || *c == Complex64::default()
        })
    }

    pub fn scaled(&self, a: f64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        self.check_grid(other);
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o * a;
        }
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise difference to `other`.
    pub fn max_coeff_diff(&self, other: &SpectralField) -> f64 {
        self.check_grid(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Dealiased pointwise product.
    pub fn product(&self, other: &SpectralField) -> SpectralField {
        self.check_grid(other);
        let a = self.to_physical();
        let b = other.to_physical();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        SpectralField::from_physical(self.grid, &prod)
            .expect("same grid")
            .dealiased()
    }

    fn check_grid(&self, other: &SpectralField) {
        assert_eq!(
            self.grid, other.grid,
            "fields live on different grids ({} vs {})",
            self.grid.n(),
            other.grid.n()
        );
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        self.check_grid(rhs);
        for (c, o) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c += o;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        self.check_grid(rhs);
        for (c, o) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *c -= o;
        }
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;

    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_has_expected_coefficients() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::wave(g, 1, 0, 1.0, -std::f64::consts::FRAC_PI_2).unwrap();
        // sin x1 = (e^{ix} - e^{-ix}) / 2i
        assert!((f.coeff(1, 0) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((f.coeff(-1, 0) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn physical_round_trip() {
        let g = Grid::new(32).unwrap();
        let f = SpectralField::from_fn(g, |x, y| (2.0 * x).sin() * y.cos() + 0.3);
        let back = SpectralField::from_physical(g, &f.to_physical()).unwrap();
        assert!(f.max_coeff_diff(&back) < 1e-15);
        assert!((f.mean() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn product_of_waves() {
        let g = Grid::new(32).unwrap();
        let a = SpectralField::from_fn(g, |x, _| x.cos());
        let b = SpectralField::from_fn(g, |_, y| (2.0 * y).cos());
        let expected = SpectralField::from_fn(g, |x, y| x.cos() * (2.0 * y).cos());
        assert!(a.product(&b).max_coeff_diff(&expected) < 1e-15);
    }

    #[test]
    fn dealias_clears_high_modes() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::wave(g, 6, 0, 1.0, 0.0).unwrap().dealiased();
        assert_eq!(f.max_coeff(), 0.0);
        let f = SpectralField::wave(g, 5, 5, 1.0, 0.0).unwrap().dealiased();
        assert!(f.max_coeff() > 0.0);
        assert!(f.is_dealiased());
    }
}
