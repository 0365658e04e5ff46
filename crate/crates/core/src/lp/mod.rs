//! Dyadic decomposition, Besov-type norms and growth-function admissibility.

mod family;
mod gamma;
mod norms;
mod profile;

pub use family::{band_project, BandDecomposition, LpFamily, Projection, OVERLAP};
pub use gamma::{validate_gamma, ConditionResult, GammaReport, GammaSpec, CATALOG, DERIVATIVE_STEP};
pub use norms::{norm, norm_vector, GammaWeight, NormSpec, NormValue};
pub use profile::LpProfile;
