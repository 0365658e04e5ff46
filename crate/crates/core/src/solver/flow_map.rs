//! Particle maps along a stored trajectory.
//!
//! Velocities are interpolated bicubically in space and by cubic Lagrange
//! polynomials in time; particles are advanced with classical RK4.

use std::f64::consts::TAU;

use super::simulate::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Cubic Lagrange weights on nodes `-1, 0, 1, 2` at offset `s` in `[0, 1)`.
fn cubic_weights(s: f64) -> [f64; 4] {
    [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ]
}

/// Periodic bicubic interpolation of row-major samples at `(x1, x2)`.
pub fn bicubic(grid: Grid, samples: &[f64], x1: f64, x2: f64) -> f64 {
    let n = grid.n();
    let h = grid.spacing();
    let (s1, s2) = (x1.rem_euclid(TAU) / h, x2.rem_euclid(TAU) / h);
    let (i1, i2) = (s1.floor(), s2.floor());
    let (w1, w2) = (cubic_weights(s1 - i1), cubic_weights(s2 - i2));
    let (i1, i2) = (i1 as isize, i2 as isize);
    let wrap = |i: isize| i.rem_euclid(n as isize) as usize;
    let mut acc = 0.0;
    for (b, wb) in w2.iter().enumerate() {
        if *wb == 0.0 {
            continue;
        }
        let row = wrap(i2 + b as isize - 1) * n;
        let mut line = 0.0;
        for (a, wa) in w1.iter().enumerate() {
            line += wa * samples[row + wrap(i1 + a as isize - 1)];
        }
        acc += wb * line;
    }
    acc
}

/// Lagrange weights for the nodes `ts` at time `s`.
fn lagrange_weights(ts: &[f64], s: f64) -> Vec<f64> {
    (0..ts.len())
        .map(|i| {
            ts.iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, tk)| (s - tk) / (ts[i] - tk))
                .product()
        })
        .collect()
}

/// Physical velocity samples of a trajectory, with time interpolation.
struct VelocityHistory {
    grid: Grid,
    times: Vec<f64>,
    first: usize,
    samples: Vec<[Vec<f64>; 2]>,
}

impl VelocityHistory {
    fn new(traj: &Trajectory, from: f64, to: f64) -> Self {
        let times = traj.times();
        let lo = from.min(to);
        let hi = from.max(to);
        let start = times.partition_point(|t| *t <= lo).saturating_sub(3);
        let end = (times.partition_point(|t| *t < hi) + 3).min(times.len());
        let samples = (start..end).map(|i| traj.velocity(i).to_physical()).collect();
        VelocityHistory {
            grid: traj.grid(),
            times: times[start..end].to_vec(),
            first: start,
            samples,
        }
    }

    /// Stencil of up to four samples around `s` and their weights.
    fn stencil(&self, s: f64) -> (usize, Vec<f64>) {
        let len = self.times.len();
        if len <= 4 {
            return (0, lagrange_weights(&self.times, s));
        }
        let i = self.times.partition_point(|t| *t <= s).saturating_sub(1).min(len - 2);
        let start = i.saturating_sub(1).min(len - 4);
        (start, lagrange_weights(&self.times[start..start + 4], s))
    }

    fn at(&self, x: [f64; 2], stencil: &(usize, Vec<f64>)) -> [f64; 2] {
        let (start, weights) = stencil;
        let mut v = [0.0; 2];
        for (k, w) in weights.iter().enumerate() {
            let u = &self.samples[start + k];
            v[0] += w * bicubic(self.grid, &u[0], x[0], x[1]);
            v[1] += w * bicubic(self.grid, &u[1], x[0], x[1]);
        }
        v
    }

    #[allow(dead_code)]
    fn first_index(&self) -> usize {
        self.first
    }
}

/// Positions at time `to` of particles that sit at grid nodes at time `from`.
#[derive(Clone, Debug)]
pub struct FlowMap {
    grid: Grid,
    from: f64,
    to: f64,
    points: Vec<[f64; 2]>,
}

impl FlowMap {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// `(earlier, later)` times of the map.
    pub fn span(&self) -> (f64, f64) {
        (self.from.min(self.to), self.from.max(self.to))
    }

    pub fn from_time(&self) -> f64 {
        self.from
    }

    pub fn to_time(&self) -> f64 {
        self.to
    }

    /// Image points, not reduced modulo the period.
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Image points on the torus `[0, 2pi)^2`.
    pub fn torus_points(&self) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .map(|p| [p[0].rem_euclid(TAU), p[1].rem_euclid(TAU)])
            .collect()
    }

    /// Displacement of each node, `X(x) - x`.
    pub fn displacements(&self) -> Vec<[f64; 2]> {
        self.points
            .iter()
            .enumerate()
            .map(|(idx, p)| {
                let (x1, x2) = self.grid.coords(idx);
                [p[0] - x1, p[1] - x2]
            })
            .collect()
    }

    /// Jacobian determinant at each node from centred differences of the
    /// periodic displacement.
    pub fn jacobian_determinants(&self) -> Vec<f64> {
        let n = self.grid.n();
        let h2 = 2.0 * self.grid.spacing();
        let d = self.displacements();
        let at = |i: usize, j: usize| d[(j % n) * n + (i % n)];
        (0..self.grid.points())
            .map(|idx| {
                let (i, j) = (idx % n, idx / n);
                let east = at(i + 1, j);
                let west = at(i + n - 1, j);
                let north = at(i, j + 1);
                let south = at(i, j + n - 1);
                let a = 1.0 + (east[0] - west[0]) / h2;
                let b = (north[0] - south[0]) / h2;
                let c = (east[1] - west[1]) / h2;
                let e = 1.0 + (north[1] - south[1]) / h2;
                a * e - b * c
            })
            .collect()
    }

    /// `f` evaluated at the image points (bicubically) and projected back to the grid.
    pub fn compose(&self, f: &SpectralField) -> SpectralField {
        let samples = f.to_physical();
        let values: Vec<f64> = self
            .points
            .iter()
            .map(|p| bicubic(self.grid, &samples, p[0], p[1]))
            .collect();
        SpectralField::from_physical(self.grid, &values)
            .expect("same grid")
            .dealiased()
    }
}

fn check_time(traj: &Trajectory, time: f64) -> Result<()> {
    let (start, end) = traj.span();
    let slack = 1e-12 * end.abs().max(1.0);
    if time < start - slack || time > end + slack || !time.is_finite() {
        return Err(Error::OutsideSpan { time, start, end });
    }
    Ok(())
}

/// Default number of RK4 steps: at most half a sample gap per step.
fn default_steps(traj: &Trajectory, from: f64, to: f64) -> usize {
    let gap = traj.max_sample_gap();
    if gap == 0.0 {
        return 1;
    }
    ((to - from).abs() / (0.5 * gap)).ceil().max(1.0) as usize
}

/// Moves `points` from time `from` to time `to` along the trajectory.
pub fn transport_points(
    traj: &Trajectory,
    points: &[[f64; 2]],
    from: f64,
    to: f64,
    steps: usize,
) -> Result<Vec<[f64; 2]>> {
    check_time(traj, from)?;
    check_time(traj, to)?;
    if steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    if from == to {
        return Ok(points.to_vec());
    }
    let history = VelocityHistory::new(traj, from, to);
    let h = (to - from) / steps as f64;
    let mut pts = points.to_vec();
    for k in 0..steps {
        let s = from + k as f64 * h;
        let st0 = history.stencil(s);
        let st1 = history.stencil(s + 0.5 * h);
        let st2 = history.stencil(s + h);
        for p in pts.iter_mut() {
            let k1 = history.at(*p, &st0);
            let k2 = history.at([p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1]], &st1);
            let k3 = history.at([p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1]], &st1);
            let k4 = history.at([p[0] + h * k3[0], p[1] + h * k3[1]], &st2);
            p[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            p[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        }
    }
    Ok(pts)
}

fn grid_nodes(grid: Grid) -> Vec<[f64; 2]> {
    (0..grid.points())
        .map(|idx| {
            let (x1, x2) = grid.coords(idx);
            [x1, x2]
        })
        .collect()
}

fn particle_map(traj: &Trajectory, from: f64, to: f64, steps: usize) -> Result<FlowMap> {
    let grid = traj.grid();
    let points = transport_points(traj, &grid_nodes(grid), from, to, steps)?;
    Ok(FlowMap { grid, from, to, points })
}

/// Departure points `X^{-1}(x, t; tau)`: where the particle found at `x` at
/// time `t` was at time `tau`.
pub fn inverse_flow_map(traj: &Trajectory, tau: f64, t: f64) -> Result<FlowMap> {
    inverse_flow_map_with_steps(traj, tau, t, default_steps(traj, tau, t))
}

pub fn inverse_flow_map_with_steps(traj: &Trajectory, tau: f64, t: f64, steps: usize) -> Result<FlowMap> {
    if tau > t {
        return Err(Error::param("tau", format!("{tau} exceeds t = {t}")));
    }
    particle_map(traj, t, tau, steps)
}

/// Arrival points `X(x, t; tau)` of particles leaving the grid nodes at `tau`.
pub fn forward_flow_map(traj: &Trajectory, tau: f64, t: f64) -> Result<FlowMap> {
    if tau > t {
        return Err(Error::param("tau", format!("{tau} exceeds t = {t}")));
    }
    particle_map(traj, tau, t, default_steps(traj, tau, t))
}
