//! Twin runs from nearby data and their Osgood envelope.

use std::thread;

use serde::{Deserialize, Serialize};

use super::checks::Trapezoid;
use super::osgood::OsgoodProblem;
use crate::error::{Error, Result};
use crate::lp::{norm, GammaSpec, LpFamily, NormSpec};
use crate::solver::{simulate, SimState, SolverConfig, Trajectory};
use crate::spectral::{gradient, SpectralField};

/// Perturbations smaller than this (but nonzero) are indistinguishable from roundoff.
pub const SPECTRAL_FLOOR: f64 = 1e-14;

/// Range of constants tried when fitting the envelope.
const MIN_CONSTANT: f64 = 1e-9;
const MAX_CONSTANT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbedField {
    Omega,
    Rho,
}

/// `size * cos(2^band x1)` added to one of the initial fields
/// (a constant shift of `rho` for band `-1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub field: PerturbedField,
    pub band: i32,
    pub size: f64,
}

impl PerturbationSpec {
    pub fn describe(&self) -> String {
        let name = match self.field {
            PerturbedField::Omega => "omega",
            PerturbedField::Rho => "rho",
        };
        format!("{name} += {:e} cos(2^{} x1)", self.size, self.band)
    }

    fn shape(&self, family: &LpFamily) -> Result<SpectralField> {
        let grid = family.grid();
        if self.band < -1 || self.band > family.j_max() {
            return Err(Error::param("band", format!("{} is outside [-1, {}]", self.band, family.j_max())));
        }
        if self.band == -1 {
            return match self.field {
                PerturbedField::Omega => Err(Error::param("band", "band -1 of omega is its mean, which must vanish")),
                PerturbedField::Rho => Ok(SpectralField::constant(grid, 1.0)),
            };
        }
        let k = 1i64 << self.band;
        if !grid.is_resolved(k, 0) {
            return Err(Error::param("band", format!("mode 2^{} is not resolved on this grid", self.band)));
        }
        SpectralField::wave(grid, k, 0, 1.0, 0.0)
    }

    /// Adds the perturbation to the pair `(omega, rho)`.
    pub fn apply(&self, omega: &SpectralField, rho: &SpectralField, family: &LpFamily) -> Result<(SpectralField, SpectralField)> {
        if self.size != 0.0 && self.size.abs() < SPECTRAL_FLOOR {
            return Err(Error::PerturbationTooSmall(self.size));
        }
        if !self.size.is_finite() {
            return Err(Error::param("size", "must be finite"));
        }
        let bump = self.shape(family)?.scaled(self.size);
        Ok(match self.field {
            PerturbedField::Omega => (omega + &bump, rho.clone()),
            PerturbedField::Rho => (omega.clone(), rho + &bump),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinRunResult {
    pub perturbation: PerturbationSpec,
    pub description: String,
    pub times: Vec<f64>,
    /// `sum_j (||Delta_j v||_inf + ||Delta_j rho||_inf)` over `j <= j_max`.
    pub band_sum: Vec<f64>,
    /// Time integral of `band_sum`.
    pub f_series: Vec<f64>,
    /// Slope of `F` at 0, the initial band-sum gap.
    pub delta_prime: f64,
    /// Smallest constant with `F <= eta(.; C, delta')` at every sample.
    pub fitted_constant: f64,
    pub envelope: Vec<f64>,
    /// Smallest constant with `F' <= eta(.; C, delta')`, the sharper
    /// comparison since `F(0) = 0 < delta'` makes the envelope on `F` loose
    /// over short horizons.
    pub rate_constant: f64,
    /// Sup over time of the Abel-type bound on the bands above `j_max`.
    pub tail_residual: f64,
    pub modulus: String,
}

impl TwinRunResult {
    pub fn dominated(&self) -> bool {
        self.f_series
            .iter()
            .zip(&self.envelope)
            .all(|(f, e)| *f <= *e * (1.0 + 1e-9))
    }
}

/// Band sum of the differences between two states.
fn difference_band_sum(a: &SimState, b: &SimState, family: &LpFamily) -> f64 {
    let v = a.velocity([0.0; 2]).difference(&b.velocity([0.0; 2]));
    let rho = &a.rho - &b.rho;
    let v_sum: f64 = family.band_sups_vector(&[&v.u1, &v.u2]).iter().sum();
    let r_sum: f64 = family.band_sups(&rho).iter().sum();
    v_sum + r_sum
}

fn tail_bound(a: &SimState, b: &SimState, family: &LpFamily, gamma: &GammaSpec) -> f64 {
    let n = family.j_max();
    let spec = NormSpec::gamma(gamma);
    let rho = &a.rho - &b.rho;
    let g = gradient(&rho);
    let grad_rho = crate::lp::norm_vector(&[&g[0], &g[1]], &spec, family).value;
    // The velocity gradient is controlled by the vorticity difference.
    let omega = norm(&(&a.omega - &b.omega), &spec, family).value;
    2f64.powi(-n) * gamma.eval(n as f64) * (grad_rho + omega)
}

fn dominates(f: &[f64], times: &[f64], modulus: &GammaSpec, constant: f64, delta: f64) -> Result<Option<Vec<f64>>> {
    let horizon = times.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let sol = OsgoodProblem::new(modulus.clone(), constant, delta, horizon).solve_at(times)?;
    let mut env = sol.eta;
    // A truncated run means eta blew past the modulus domain: it dominates from there on.
    env.resize(times.len(), f64::INFINITY);
    let ok = f.iter().zip(&env).all(|(a, b)| *a <= *b);
    Ok(ok.then_some(env))
}

/// Runs the unperturbed and perturbed problems side by side and fits the
/// Osgood envelope to `F(t)`.
pub fn uniqueness_experiment(
    omega0: &SpectralField,
    rho0: &SpectralField,
    perturbation: &PerturbationSpec,
    config: &SolverConfig,
    family: &LpFamily,
    gamma: &GammaSpec,
) -> Result<TwinRunResult> {
    let (omega1, rho1) = perturbation.apply(omega0, rho0, family)?;
    let (first, second) = thread::scope(|s| {
        let a = s.spawn(|| simulate(omega0, rho0, config));
        let b = s.spawn(|| simulate(&omega1, &rho1, config));
        (a.join().expect("twin run panicked"), b.join().expect("twin run panicked"))
    });
    let (first, second): (Trajectory, Trajectory) = (first?, second?);
    let times = first.times();
    let band_sum: Vec<f64> = first
        .states
        .iter()
        .zip(&second.states)
        .map(|(a, b)| difference_band_sum(a, b, family))
        .collect();
    let mut integral = Trapezoid::default();
    let f_series: Vec<f64> = times.iter().zip(&band_sum).map(|(t, v)| integral.push(*t, *v)).collect();
    let tail_residual = first
        .states
        .iter()
        .zip(&second.states)
        .map(|(a, b)| tail_bound(a, b, family, gamma))
        .fold(0.0, f64::max);
    let delta_prime = band_sum[0];
    let modulus = gamma.clone();
    let (fitted_constant, envelope, rate_constant) = if delta_prime == 0.0 {
        (0.0, vec![0.0; times.len()], 0.0)
    } else {
        let (c, env) = fit_constant(&f_series, &times, &modulus, delta_prime)?;
        (c, env, fit_constant(&band_sum, &times, &modulus, delta_prime)?.0)
    };
    Ok(TwinRunResult {
        perturbation: *perturbation,
        description: perturbation.describe(),
        times,
        band_sum,
        f_series,
        delta_prime,
        fitted_constant,
        envelope,
        rate_constant,
        tail_residual,
        modulus: modulus.name().to_string(),
    })
}

/// Bisects for the smallest constant whose envelope dominates `f`.
fn fit_constant(f: &[f64], times: &[f64], modulus: &GammaSpec, delta: f64) -> Result<(f64, Vec<f64>)> {
    // Validate the modulus once; the bisection then reuses it unchecked.
    if let Some(env) = dominates(f, times, modulus, MIN_CONSTANT, delta)? {
        return Ok((MIN_CONSTANT, env));
    }
    let modulus = &modulus.clone().with_modulus(false);
    let mut lo = MIN_CONSTANT;
    let mut hi = 1e-3;
    let mut best = loop {
        if let Some(env) = dominates(f, times, modulus, hi, delta)? {
            break env;
        }
        hi *= 2.0;
        if hi > MAX_CONSTANT {
            return Err(Error::param("constant", "no Osgood envelope dominates the measured F"));
        }
    };
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        match dominates(f, times, modulus, mid, delta)? {
            Some(env) => {
                hi = mid;
                best = env;
            }
            None => lo = mid,
        }
    }
    Ok((hi, best))
}
