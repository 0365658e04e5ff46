use super::config::SolverConfig;
use super::step::{SimState, Stepper};
use crate::error::{Error, Result};
use crate::lp::LpFamily;
use crate::spectral::{biot_savart_strict, Grid, SpectralField, VelocityField, MEAN_TOLERANCE};

/// Time-ordered samples of a run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<SimState>,
    pub config: SolverConfig,
    /// Free-form description of the initial data.
    pub descriptor: String,
}

impl Trajectory {
    pub fn grid(&self) -> Grid {
        self.states[0].grid()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.states[0].t, self.states[self.states.len() - 1].t)
    }

    pub fn initial(&self) -> &SimState {
        &self.states[0]
    }

    pub fn last(&self) -> &SimState {
        &self.states[self.states.len() - 1]
    }

    pub fn velocity(&self, i: usize) -> VelocityField {
        self.states[i].velocity(self.config.mean_flow)
    }

    /// Largest gap between consecutive samples.
    pub fn max_sample_gap(&self) -> f64 {
        self.states
            .windows(2)
            .map(|w| w[1].t - w[0].t)
            .fold(0.0, f64::max)
    }
}

fn prepare_initial(omega0: &SpectralField, rho0: &SpectralField) -> Result<SimState> {
    if omega0.grid() != rho0.grid() {
        return Err(Error::GridMismatch(omega0.grid().n(), rho0.grid().n()));
    }
    let omega = omega0.clone().dealiased();
    biot_savart_strict(&omega)?;
    Ok(SimState {
        t: 0.0,
        omega: omega.without_mean(),
        rho: rho0.clone().dealiased(),
    })
}

/// Runs the solver and hands every recorded sample, starting with `t = 0`,
/// to `observer`. Returns the final state.
///
/// Samples are taken every `config.stride` steps and at `t_end`. Steps that
/// violate the CFL limit are retried with the suggested smaller step.
pub fn simulate_observed(
    omega0: &SpectralField,
    rho0: &SpectralField,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&SimState) -> Result<()>,
) -> Result<SimState> {
    config.validate()?;
    let mut state = prepare_initial(omega0, rho0)?;
    if state.omega.mean().abs() > MEAN_TOLERANCE {
        return Err(Error::NonzeroMean(state.omega.mean()));
    }
    let mut stepper = Stepper::new(state.grid(), config)?;
    observer(&state)?;
    let slack = 1e-9 * config.dt;
    let mut steps = 0usize;
    let mut recorded = true;
    while state.t < config.t_end - slack {
        let mut dt = config.dt.min(config.t_end - state.t);
        let u = state.velocity(config.mean_flow);
        let mut next = loop {
            match stepper.step(&state, &u, dt) {
                Ok(s) => break s,
                Err(Error::Cfl { suggested, .. }) if suggested > 1e-9 * config.dt => dt = suggested,
                Err(e) => return Err(e),
            }
        };
        if (config.t_end - next.t).abs() <= slack {
            next.t = config.t_end;
        }
        state = next;
        steps += 1;
        recorded = steps % config.stride == 0;
        if recorded {
            observer(&state)?;
        }
    }
    if !recorded {
        observer(&state)?;
    }
    Ok(state)
}

/// Runs the solver and keeps every recorded sample.
pub fn simulate(omega0: &SpectralField, rho0: &SpectralField, config: &SolverConfig) -> Result<Trajectory> {
    let mut states = Vec::new();
    simulate_observed(omega0, rho0, config, &mut |s| {
        states.push(s.clone());
        Ok(())
    })?;
    Ok(Trajectory {
        states,
        config: config.clone(),
        descriptor: String::new(),
    })
}

/// `S_m f`, the low-pass truncation used to build approximating data.
pub fn truncate_initial_data(f: &SpectralField, m: i32, family: &LpFamily) -> Result<SpectralField> {
    if m < -1 || m > family.j_max() {
        return Err(Error::param(
            "m",
            format!("{m} is outside [-1, {}]", family.j_max()),
        ));
    }
    Ok(family.partial(f, m))
}
