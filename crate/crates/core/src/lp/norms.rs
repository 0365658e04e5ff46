use super::family::LpFamily;
use super::gamma::GammaSpec;
use crate::spectral::{LebesgueExponent, SpectralField};

/// Which growth function weights a `B_Gamma`-type norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaWeight {
    Gamma,
    Gamma1,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    /// `(sum_j (2^{js} ||Delta_j f||_p)^q)^{1/q}`.
    Besov {
        s: f64,
        p: LebesgueExponent,
        q: LebesgueExponent,
    },
    /// `sup_N G(N)^{-1} sum_{j <= N} ||Delta_j f||_inf`.
    BGamma { gamma: GammaSpec, weight: GammaWeight },
    /// `sup_j ||Delta_j f||_inf`.
    B0InfInf,
}

impl NormSpec {
    pub fn besov(s: f64, p: f64, q: f64) -> Self {
        NormSpec::Besov {
            s,
            p: LebesgueExponent::new(p).expect("valid exponent"),
            q: LebesgueExponent::new(q).expect("valid exponent"),
        }
    }

    pub fn gamma(gamma: &GammaSpec) -> Self {
        NormSpec::BGamma {
            gamma: gamma.clone(),
            weight: GammaWeight::Gamma,
        }
    }

    pub fn gamma1(gamma: &GammaSpec) -> Self {
        NormSpec::BGamma {
            gamma: gamma.clone(),
            weight: GammaWeight::Gamma1,
        }
    }

    fn band_exponent(&self) -> LebesgueExponent {
        match self {
            NormSpec::Besov { p, .. } => *p,
            _ => LebesgueExponent::Infinity,
        }
    }

    /// Evaluates the norm from per-band `L^p` norms indexed by `j + 1`.
    pub fn from_band_norms(&self, bands: &[f64]) -> f64 {
        match self {
            NormSpec::Besov { s, q, .. } => besov_sum(bands, *s, *q),
            NormSpec::BGamma { gamma, weight } => gamma_sup(bands, |n| match weight {
                GammaWeight::Gamma => gamma.eval(n),
                GammaWeight::Gamma1 => gamma.eval_gamma1(n),
            }),
            NormSpec::B0InfInf => bands.iter().cloned().fold(0.0, f64::max),
        }
    }
}

/// A norm value together with the last band included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub j_max: i32,
}

fn besov_sum(bands: &[f64], s: f64, q: LebesgueExponent) -> f64 {
    let weighted = bands
        .iter()
        .enumerate()
        .map(|(i, b)| 2f64.powf(s * (i as f64 - 1.0)) * b);
    match q {
        LebesgueExponent::Infinity => weighted.fold(0.0, f64::max),
        LebesgueExponent::Finite(q) if q == 1.0 => weighted.sum(),
        LebesgueExponent::Finite(q) => weighted.map(|w| w.powf(q)).sum::<f64>().powf(1.0 / q),
    }
}

fn gamma_sup(bands: &[f64], weight: impl Fn(f64) -> f64) -> f64 {
    let mut partial = 0.0;
    let mut best = 0.0f64;
    for (i, b) in bands.iter().enumerate() {
        partial += b;
        best = best.max(partial / weight(i as f64 - 1.0));
    }
    best
}

pub fn norm(f: &SpectralField, spec: &NormSpec, family: &LpFamily) -> NormValue {
    let bands = family.band_norms(f, spec.band_exponent());
    NormValue {
        value: spec.from_band_norms(&bands),
        j_max: family.j_max(),
    }
}

/// Norm of a vector field, using the pointwise Euclidean magnitude of each band.
pub fn norm_vector(components: &[&SpectralField], spec: &NormSpec, family: &LpFamily) -> NormValue {
    let bands = family.band_norms_vector(components, spec.band_exponent());
    NormValue {
        value: spec.from_band_norms(&bands),
        j_max: family.j_max(),
    }
}
