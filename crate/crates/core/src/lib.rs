//! Pseudospectral solver for the two-dimensional Boussinesq system with
//! density diffusion on the torus, a computational Littlewood-Paley toolkit,
//! and monitors that evaluate both sides of the associated a priori,
//! commutator, uniqueness and approximation estimates.

pub mod error;
pub mod harness;
pub mod initial;
pub mod lp;
pub mod paraproduct;
pub mod solver;
pub mod spectral;
pub mod surrogate;

pub use error::{Error, Result};
