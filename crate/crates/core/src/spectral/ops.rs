use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Differential operator selector for [`spectral_derivative`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivative {
    X1,
    X2,
    Laplacian,
}

/// Multiplies each coefficient by `i k_axis`, or by `-|k|^2` for the Laplacian.
///
/// Odd derivatives vanish on the Nyquist row/column, whose conjugate partner
/// is itself.
pub fn spectral_derivative(f: &SpectralField, op: Derivative) -> SpectralField {
    let nyquist = -((f.grid().n() / 2) as i64);
    match op {
        Derivative::X1 => f.map_modes(|k1, _, c| {
            if k1 == nyquist {
                Complex64::default()
            } else {
                c * Complex64::new(0.0, k1 as f64)
            }
        }),
        Derivative::X2 => f.map_modes(|_, k2, c| {
            if k2 == nyquist {
                Complex64::default()
            } else {
                c * Complex64::new(0.0, k2 as f64)
            }
        }),
        Derivative::Laplacian => f.map_modes(|k1, k2, c| c * -((k1 * k1 + k2 * k2) as f64)),
    }
}

pub fn gradient(f: &SpectralField) -> [SpectralField; 2] {
    [
        spectral_derivative(f, Derivative::X1),
        spectral_derivative(f, Derivative::X2),
    ]
}

/// Two-component velocity field.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    pub u1: SpectralField,
    pub u2: SpectralField,
}

impl VelocityField {
    pub fn zeros(grid: Grid) -> Self {
        VelocityField {
            u1: SpectralField::zeros(grid),
            u2: SpectralField::zeros(grid),
        }
    }

    pub fn uniform(grid: Grid, velocity: [f64; 2]) -> Self {
        VelocityField {
            u1: SpectralField::constant(grid, velocity[0]),
            u2: SpectralField::constant(grid, velocity[1]),
        }
    }

    pub fn grid(&self) -> Grid {
        self.u1.grid()
    }

    pub fn components(&self) -> [&SpectralField; 2] {
        [&self.u1, &self.u2]
    }

    pub fn mean(&self) -> [f64; 2] {
        [self.u1.mean(), self.u2.mean()]
    }

    pub fn scaled(&self, a: f64) -> Self {
        VelocityField {
            u1: self.u1.scaled(a),
            u2: self.u2.scaled(a),
        }
    }

    /// Adds a uniform background flow.
    pub fn with_mean_flow(mut self, velocity: [f64; 2]) -> Self {
        let grid = self.grid();
        self.u1 += &SpectralField::constant(grid, velocity[0]);
        self.u2 += &SpectralField::constant(grid, velocity[1]);
        self
    }

    pub fn divergence(&self) -> SpectralField {
        let mut d = spectral_derivative(&self.u1, Derivative::X1);
        d += &spectral_derivative(&self.u2, Derivative::X2);
        d
    }

    /// Scalar curl `d1 u2 - d2 u1`.
    pub fn curl(&self) -> SpectralField {
        let mut c = spectral_derivative(&self.u2, Derivative::X1);
        c -= &spectral_derivative(&self.u1, Derivative::X2);
        c
    }

    pub fn to_physical(&self) -> [Vec<f64>; 2] {
        [self.u1.to_physical(), self.u2.to_physical()]
    }

    /// Velocity gradient components `[d1 u1, d2 u1, d1 u2, d2 u2]`.
    pub fn gradient(&self) -> [SpectralField; 4] {
        let [a, b] = gradient(&self.u1);
        let [c, d] = gradient(&self.u2);
        [a, b, c, d]
    }

    pub fn difference(&self, other: &VelocityField) -> VelocityField {
        VelocityField {
            u1: &self.u1 - &other.u1,
            u2: &self.u2 - &other.u2,
        }
    }
}

/// Velocity with vorticity `w` and zero mean: `u = grad^perp (-Delta)^{-1} w`.
///
/// The mean mode of `w` is ignored, as are Nyquist modes.
pub fn biot_savart(w: &SpectralField) -> VelocityField {
    let nyquist = -((w.grid().n() / 2) as i64);
    let invert = |k1: i64, k2: i64, c: Complex64| {
        if (k1 == 0 && k2 == 0) || k1 == nyquist || k2 == nyquist {
            None
        } else {
            Some(c / ((k1 * k1 + k2 * k2) as f64))
        }
    };
    let u1 = w.map_modes(|k1, k2, c| {
        invert(k1, k2, c).map_or_else(Complex64::default, |s| s * Complex64::new(0.0, k2 as f64))
    });
    let u2 = w.map_modes(|k1, k2, c| {
        invert(k1, k2, c).map_or_else(Complex64::default, |s| s * Complex64::new(0.0, -(k1 as f64)))
    });
    VelocityField { u1, u2 }
}

/// Mean magnitude above which [`biot_savart_strict`] rejects its input.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Like [`biot_savart`] but rejects vorticity with a nonzero mean.
pub fn biot_savart_strict(w: &SpectralField) -> Result<VelocityField> {
    let mean = w.mean();
    if mean.abs() > MEAN_TOLERANCE {
        return Err(Error::NonzeroMean(mean));
    }
    Ok(biot_savart(w))
}

/// Lebesgue exponent in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LebesgueExponent {
    Finite(f64),
    Infinity,
}

impl LebesgueExponent {
    pub const TWO: LebesgueExponent = LebesgueExponent::Finite(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(LebesgueExponent::Infinity)
        } else if p >= 1.0 {
            Ok(LebesgueExponent::Finite(p))
        } else {
            Err(Error::param("p", format!("{p} is not in [1, inf]")))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            LebesgueExponent::Finite(p) => *p,
            LebesgueExponent::Infinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for LebesgueExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LebesgueExponent::Finite(p) => write!(f, "{p}"),
            LebesgueExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Equal-weight quadrature of `|f|^p` from pointwise magnitudes.
pub fn lp_norm_samples(grid: Grid, magnitudes: impl Iterator<Item = f64>, p: LebesgueExponent) -> f64 {
    match p {
        LebesgueExponent::Infinity => magnitudes.map(f64::abs).fold(0.0, f64::max),
        LebesgueExponent::Finite(p) => {
            let sum: f64 = if p == 2.0 {
                magnitudes.map(|v| v * v).sum()
            } else if p == 1.0 {
                magnitudes.map(f64::abs).sum()
            } else {
                magnitudes.map(|v| v.abs().powf(p)).sum()
            };
            (sum * grid.cell_area()).powf(1.0 / p)
        }
    }
}

pub fn lp_norm(f: &SpectralField, p: LebesgueExponent) -> f64 {
    lp_norm_samples(f.grid(), f.to_physical().into_iter(), p)
}

/// L^p norm of the pointwise Euclidean magnitude of a vector field.
pub fn lp_norm_vector(components: &[&SpectralField], p: LebesgueExponent) -> f64 {
    let grid = components[0].grid();
    let samples: Vec<Vec<f64>> = components.iter().map(|c| c.to_physical()).collect();
    lp_norm_samples(grid, pointwise_magnitude(&samples).into_iter(), p)
}

/// Euclidean magnitude across components at each sample.
pub fn pointwise_magnitude(samples: &[Vec<f64>]) -> Vec<f64> {
    let len = samples[0].len();
    (0..len)
        .map(|i| samples.iter().map(|s| s[i] * s[i]).sum::<f64>().sqrt())
        .collect()
}

/// `u . grad f`, computed pseudospectrally and dealiased.
pub fn advect(u: &VelocityField, f: &SpectralField) -> SpectralField {
    advect_physical(&u.to_physical(), f)
}

/// [`advect`] with the velocity already in physical space.
pub fn advect_physical(u: &[Vec<f64>; 2], f: &SpectralField) -> SpectralField {
    let [g1, g2] = gradient(f);
    let g1 = g1.to_physical();
    let g2 = g2.to_physical();
    let prod: Vec<f64> = (0..g1.len())
        .map(|i| u[0][i] * g1[i] + u[1][i] * g2[i])
        .collect();
    SpectralField::from_physical(f.grid(), &prod)
        .expect("same grid")
        .dealiased()
}
