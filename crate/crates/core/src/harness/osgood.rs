//! The comparison equation `eta' = C Pi(-log2 eta) eta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{validate_gamma, GammaSpec};

/// Relative tolerance of the step-doubling error control.
pub const OSGOOD_TOLERANCE: f64 = 1e-12;

/// Range and step used when the modulus has to be validated on the fly.
const VALIDATION_RANGE: f64 = 64.0;
const VALIDATION_STEP: f64 = 0.01;

/// Integration stops once `-log2 eta` drops below the left end of the
/// modulus domain.
const DOMAIN_START: f64 = -2.0;

#[derive(Clone, Debug)]
pub struct OsgoodProblem {
    /// The modulus `Pi`. Entries without the modulus flag skip validation.
    pub modulus: GammaSpec,
    pub constant: f64,
    pub delta: f64,
    pub horizon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OsgoodSolution {
    pub times: Vec<f64>,
    pub eta: Vec<f64>,
    /// Set when `eta` left the regime `eta <= 1/2`.
    pub warnings: Vec<String>,
    /// The run stopped before the horizon because `eta` left the modulus domain.
    pub truncated: bool,
}

impl OsgoodSolution {
    /// Value at the last output time.
    pub fn terminal(&self) -> f64 {
        *self.eta.last().expect("nonempty")
    }
}

impl OsgoodProblem {
    pub fn new(modulus: GammaSpec, constant: f64, delta: f64, horizon: f64) -> Self {
        OsgoodProblem {
            modulus,
            constant,
            delta,
            horizon,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.constant > 0.0 && self.constant.is_finite()) {
            return Err(Error::param("constant", format!("{} must be positive", self.constant)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::param("delta", format!("{} must be nonnegative", self.delta)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::param("horizon", format!("{} must be positive", self.horizon)));
        }
        if self.modulus.is_modulus() && self.delta > 0.0 {
            let report = validate_gamma(&self.modulus, VALIDATION_RANGE, VALIDATION_STEP)?;
            if !report.usable_as_modulus() {
                return Err(Error::param(
                    "modulus",
                    format!("`{}` fails the modulus conditions", self.modulus.name()),
                ));
            }
            let m1 = report.m1.unwrap_or(0);
            let limit = 2f64.powi(-m1 - 1);
            if self.delta >= limit {
                return Err(Error::param(
                    "delta",
                    format!("{} must be below 2^(-M1-1) = {limit}", self.delta),
                ));
            }
        }
        Ok(())
    }

    fn rate(&self, eta: f64) -> f64 {
        if eta <= 0.0 {
            return 0.0;
        }
        self.constant * self.modulus.eval(-eta.log2()) * eta
    }

    fn rk4(&self, eta: f64, h: f64) -> f64 {
        let k1 = self.rate(eta);
        let k2 = self.rate(eta + 0.5 * h * k1);
        let k3 = self.rate(eta + 0.5 * h * k2);
        let k4 = self.rate(eta + h * k3);
        eta + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    }

    /// Advances from `eta` over `span`, halving the step until one step and
    /// two half steps agree.
    fn advance(&self, mut eta: f64, span: f64) -> f64 {
        let mut remaining = span;
        let mut h = span;
        while remaining > 0.0 {
            h = h.min(remaining);
            let full = self.rk4(eta, h);
            let half = self.rk4(self.rk4(eta, 0.5 * h), 0.5 * h);
            let scale = half.abs().max(f64::MIN_POSITIVE);
            if (full - half).abs() <= OSGOOD_TOLERANCE * scale || h < span * 1e-9 {
                eta = half;
                remaining -= h;
                if (full - half).abs() < 0.1 * OSGOOD_TOLERANCE * scale {
                    h *= 2.0;
                }
            } else {
                h *= 0.5;
            }
        }
        eta
    }

    /// `eta` at the given nondecreasing output times, starting from `t = 0`.
    pub fn solve_at(&self, times: &[f64]) -> Result<OsgoodSolution> {
        self.validate()?;
        if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|t| *t < 0.0) {
            return Err(Error::param("times", "output times must be nonnegative and sorted"));
        }
        let mut out = OsgoodSolution {
            times: Vec::with_capacity(times.len()),
            eta: Vec::with_capacity(times.len()),
            warnings: Vec::new(),
            truncated: false,
        };
        let mut eta = self.delta;
        let mut t = 0.0;
        for &target in times {
            if target > t {
                eta = self.advance(eta, target - t).max(eta);
                t = target;
            }
            if eta > 0.5 && out.warnings.is_empty() {
                out.warnings.push(format!(
                    "eta = {eta:.3e} exceeds 1/2 at t = {t}; -log2(eta) has left the monotone regime"
                ));
            }
            out.times.push(t);
            out.eta.push(eta);
            if -eta.log2() < DOMAIN_START {
                out.truncated = true;
                break;
            }
        }
        Ok(out)
    }
}

/// `eta` on the uniform grid `0, dt, ..., horizon`.
pub fn osgood_integrate(problem: &OsgoodProblem, dt: f64) -> Result<OsgoodSolution> {
    if !(dt > 0.0) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let steps = (problem.horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let times: Vec<f64> = (0..=steps).map(|k| (k as f64 * dt).min(problem.horizon)).collect();
    problem.solve_at(&times)
}

/// Closed form for `Pi(xi) = max(1, xi)` while `eta <= 1/2`:
/// `-log2 eta(t) = (-log2 delta) exp(-C t / ln 2)`.
pub fn ramp_closed_form(constant: f64, delta: f64, t: f64) -> f64 {
    let s0 = -delta.log2();
    2f64.powf(-s0 * (-constant * t / std::f64::consts::LN_2).exp())
}
