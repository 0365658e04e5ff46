//! Periodic grid, Fourier representation and the basic operators on it.

mod fft;
mod field;
mod grid;
mod ops;
pub mod snapshot;

pub use field::SpectralField;
pub use grid::Grid;
pub use ops::{
    advect, advect_physical, biot_savart, biot_savart_strict, gradient, lp_norm, lp_norm_samples,
    lp_norm_vector, pointwise_magnitude, spectral_derivative, Derivative, LebesgueExponent,
    VelocityField, MEAN_TOLERANCE,
};
