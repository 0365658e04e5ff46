use num_complex::Complex64;

use super::config::{Integrator, SolverConfig};
use crate::error::{Error, Result};
use crate::spectral::{advect_physical, biot_savart, spectral_derivative, Derivative, Grid, SpectralField, VelocityField};

/// Vorticity and density at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub omega: SpectralField,
    pub rho: SpectralField,
}

impl SimState {
    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    /// Biot-Savart velocity plus the configured background flow.
    pub fn velocity(&self, mean_flow: [f64; 2]) -> VelocityField {
        biot_savart(&self.omega).with_mean_flow(mean_flow)
    }
}

/// Time stepper holding the per-mode diffusion factors for the current `dt`.
pub struct Stepper {
    config: SolverConfig,
    grid: Grid,
    cached_dt: f64,
    rho_decay: Vec<f64>,
    omega_decay: Vec<f64>,
}

fn decay(grid: Grid, rate: f64, dt: f64) -> Vec<f64> {
    (0..grid.points())
        .map(|idx| {
            let (k1, k2) = grid.mode(idx);
            (-rate * (k1 * k1 + k2 * k2) as f64 * dt).exp()
        })
        .collect()
}

fn combine(a: &SpectralField, decay: &[f64], dt: f64, n: &SpectralField) -> SpectralField {
    let coeffs: Vec<Complex64> = a
        .coeffs()
        .iter()
        .zip(n.coeffs())
        .zip(decay)
        .map(|((x, y), e)| (x + y * dt) * e)
        .collect();
    SpectralField::from_coeffs(a.grid(), coeffs).expect("same grid")
}

impl Stepper {
    pub fn new(grid: Grid, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Stepper {
            config: config.clone(),
            grid,
            cached_dt: f64::NAN,
            rho_decay: Vec::new(),
            omega_decay: Vec::new(),
        })
    }

    fn prepare(&mut self, dt: f64) {
        if self.cached_dt != dt {
            self.rho_decay = decay(self.grid, self.config.kappa, dt);
            self.omega_decay = decay(self.grid, self.config.nu, dt);
            self.cached_dt = dt;
        }
    }

    /// Explicit tendencies `(N_omega, N_rho)`.
    fn tendencies(&self, omega: &SpectralField, rho: &SpectralField, u: &[Vec<f64>; 2]) -> (SpectralField, SpectralField) {
        let mut n_omega = advect_physical(u, omega).scaled(-1.0);
        if self.config.buoyancy {
            n_omega += &spectral_derivative(rho, Derivative::X1);
        }
        let n_rho = advect_physical(u, rho).scaled(-1.0);
        (n_omega, n_rho)
    }

    /// Advances `state` by `dt` using the stage-one velocity `u`.
    pub fn step(&mut self, state: &SimState, u: &VelocityField, dt: f64) -> Result<SimState> {
        let grid = self.grid;
        let up = u.to_physical();
        let speed = up[0]
            .iter()
            .zip(&up[1])
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max);
        let h = grid.spacing();
        if speed * dt > self.config.cfl_limit * h {
            return Err(Error::Cfl {
                dt,
                suggested: 0.9 * self.config.cfl_limit * h / speed,
            });
        }
        self.prepare(dt);
        let (nw0, nr0) = self.tendencies(&state.omega, &state.rho, &up);
        let (mut omega, rho) = match self.config.integrator {
            Integrator::ImexEuler => (
                combine(&state.omega, &self.omega_decay, dt, &nw0),
                combine(&state.rho, &self.rho_decay, dt, &nr0),
            ),
            Integrator::ImexRk2 => {
                let omega_s = combine(&state.omega, &self.omega_decay, dt, &nw0);
                let rho_s = combine(&state.rho, &self.rho_decay, dt, &nr0);
                let us = biot_savart(&omega_s)
                    .with_mean_flow(self.config.mean_flow)
                    .to_physical();
                let (nw1, nr1) = self.tendencies(&omega_s, &rho_s, &us);
                let mut omega = combine(&state.omega, &self.omega_decay, 0.5 * dt, &nw0);
                omega.axpy(0.5 * dt, &nw1);
                let mut rho = combine(&state.rho, &self.rho_decay, 0.5 * dt, &nr0);
                rho.axpy(0.5 * dt, &nr1);
                (omega, rho)
            }
        };
        omega = omega.without_mean();
        let t = state.t + dt;
        if !omega.is_finite() {
            return Err(Error::NonFinite { field: "omega", t });
        }
        if !rho.is_finite() {
            return Err(Error::NonFinite { field: "rho", t });
        }
        Ok(SimState { t, omega, rho })
    }
}

/// One step of size `config.dt` with velocity `u`.
pub fn imex_step(state: &SimState, u: &VelocityField, config: &SolverConfig) -> Result<SimState> {
    Stepper::new(state.grid(), config)?.step(state, u, config.dt)
}
