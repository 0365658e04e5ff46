use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform `n x n` grid on the torus `[0, 2pi)^2`.
///
/// Physical samples and Fourier coefficients share one row-major layout:
/// index `i2 * n + i1`, where `i1` runs along `x1` and `i2` along `x2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of samples, `n^2`.
    pub fn points(&self) -> usize {
        self.n * self.n
    }

    pub fn period(&self) -> f64 {
        TAU
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Quadrature weight of a single sample, `(2pi/n)^2`.
    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    /// Largest wavenumber per axis kept by the 2/3 rule.
    pub fn dealias_radius(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Signed wavenumber stored at position `i` along one axis.
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavevector `(k1, k2)` stored at flat index `idx`.
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (self.wavenumber(idx % self.n), self.wavenumber(idx / self.n))
    }

    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k1 < -half || k1 >= half || k2 < -half || k2 >= half {
            return None;
        }
        let wrap = |k: i64| k.rem_euclid(self.n as i64) as usize;
        Some(wrap(k2) * self.n + wrap(k1))
    }

    pub fn is_resolved(&self, k1: i64, k2: i64) -> bool {
        let r = self.dealias_radius();
        k1.abs() <= r && k2.abs() <= r
    }

    /// Physical coordinates `(x1, x2)` of sample `idx`.
    pub fn coords(&self, idx: usize) -> (f64, f64) {
        let h = self.spacing();
        ((idx % self.n) as f64 * h, (idx / self.n) as f64 * h)
    }
}

impl TryFrom<usize> for Grid {
    type Error = Error;

    fn try_from(n: usize) -> Result<Self> {
        Grid::new(n)
    }
}

impl From<Grid> for usize {
    fn from(g: Grid) -> usize {
        g.n
    }
}
