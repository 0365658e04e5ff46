//! Time integration of the vorticity-density system and particle maps.

mod config;
mod flow_map;
mod simulate;
mod step;

pub use config::{Integrator, SolverConfig};
pub use flow_map::{
    bicubic, forward_flow_map, inverse_flow_map, inverse_flow_map_with_steps, transport_points, FlowMap,
};
pub use simulate::{simulate, simulate_observed, truncate_initial_data, Trajectory};
pub use step::{imex_step, SimState, Stepper};
