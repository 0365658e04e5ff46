use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Explicit part of the time integrator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Second-order Heun scheme in integrating-factor form.
    #[default]
    ImexRk2,
    /// First-order forward Euler in integrating-factor form.
    ImexEuler,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Density diffusivity.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    /// Viscosity; zero in the regime of interest, available for sanity runs.
    #[serde(default)]
    pub nu: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default)]
    pub integrator: Integrator,
    /// Largest admissible `dt max|u| / h`.
    #[serde(default = "default_cfl")]
    pub cfl_limit: f64,
    /// Number of steps between recorded samples.
    #[serde(default = "default_stride")]
    pub stride: usize,
    /// Disable to drop the `d1 rho` source from the vorticity equation.
    #[serde(default = "default_buoyancy")]
    pub buoyancy: bool,
    /// Uniform background velocity added to the Biot-Savart velocity.
    #[serde(default)]
    pub mean_flow: [f64; 2],
}

fn default_kappa() -> f64 {
    0.1
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t_end() -> f64 {
    1.0
}

fn default_cfl() -> f64 {
    0.5
}

fn default_stride() -> usize {
    10
}

fn default_buoyancy() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            kappa: default_kappa(),
            nu: 0.0,
            dt: default_dt(),
            t_end: default_t_end(),
            integrator: Integrator::default(),
            cfl_limit: default_cfl(),
            stride: default_stride(),
            buoyancy: default_buoyancy(),
            mean_flow: [0.0, 0.0],
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |name: &'static str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} must be finite and nonnegative")))
            }
        };
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("{v} must be finite and positive")))
            }
        };
        nonneg("kappa", self.kappa)?;
        nonneg("nu", self.nu)?;
        positive("dt", self.dt)?;
        nonneg("t_end", self.t_end)?;
        positive("cfl_limit", self.cfl_limit)?;
        if self.stride == 0 {
            return Err(Error::param("stride", "must be at least 1"));
        }
        if !self.mean_flow.iter().all(|v| v.is_finite()) {
            return Err(Error::param("mean_flow", "components must be finite"));
        }
        Ok(())
    }
}
