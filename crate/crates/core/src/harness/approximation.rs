//! Runs from truncated data `(S_m f, S_m g)` and the decay of their gaps.

use std::thread;

use serde::{Deserialize, Serialize};

use super::fit::linear_fit;
use crate::error::{Error, Result};
use crate::lp::{GammaSpec, LpFamily};
use crate::solver::{simulate, truncate_initial_data, SolverConfig, Trajectory};
use crate::spectral::{biot_savart, SpectralField, VelocityField};

/// Allowed excess of the fitted slope over `-1 + slope(log2 Gamma)`.
pub const SLOPE_TOLERANCE: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationRow {
    pub l: i32,
    pub m: i32,
    /// `sum_j ||Delta_j (S_m - S_l) g||_inf`, the initial density gap.
    pub iota: f64,
    /// The same band sum for the velocity gap.
    pub kappa_gap: f64,
    /// `sup_t sum_j (||Delta_j v||_inf + ||Delta_j rho||_inf)` between the two runs.
    pub cauchy_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationTable {
    pub rows: Vec<ApproximationRow>,
    pub gamma: String,
    /// Least-squares slope of `log2 iota` against `l`; absent when some gap vanishes.
    pub slope: Option<f64>,
    /// Slope of `log2 Gamma(l)` over the same `l`.
    pub gamma_slope: f64,
    /// `-1 + gamma_slope`.
    pub target_slope: f64,
    pub slope_ok: bool,
    pub cauchy_monotone: bool,
}

fn band_sum(family: &LpFamily, f: &SpectralField) -> f64 {
    family.band_sups(f).iter().sum()
}

fn velocity_band_sum(family: &LpFamily, v: &VelocityField) -> f64 {
    family.band_sups_vector(&[&v.u1, &v.u2]).iter().sum()
}

fn cauchy_gap(a: &Trajectory, b: &Trajectory, family: &LpFamily) -> Result<f64> {
    if a.times() != b.times() {
        return Err(Error::TrajectoryMismatch("approximating runs sampled at different times".into()));
    }
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| {
            let v = x.velocity([0.0; 2]).difference(&y.velocity([0.0; 2]));
            velocity_band_sum(family, &v) + band_sum(family, &(&x.rho - &y.rho))
        })
        .fold(0.0, f64::max))
}

/// Builds the decay table for consecutive pairs of `m_values`.
pub fn approximation_experiment(
    f: &SpectralField,
    g: &SpectralField,
    m_values: &[i32],
    config: &SolverConfig,
    family: &LpFamily,
    gamma: &GammaSpec,
) -> Result<ApproximationTable> {
    if m_values.len() < 3 {
        return Err(Error::param("m_values", "at least three truncation levels are needed for a slope"));
    }
    if m_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("m_values", "must be strictly increasing"));
    }
    let data = m_values
        .iter()
        .map(|&m| Ok((truncate_initial_data(f, m, family)?, truncate_initial_data(g, m, family)?)))
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<Result<Trajectory>> = thread::scope(|s| {
        let handles: Vec<_> = data
            .iter()
            .map(|(w, r)| s.spawn(move || simulate(&w.without_mean(), r, config)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("approximation run panicked")).collect()
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for i in 1..m_values.len() {
        let (l, m) = (m_values[i - 1], m_values[i]);
        let dg = &data[i].1 - &data[i - 1].1;
        let df = &data[i].0 - &data[i - 1].0;
        rows.push(ApproximationRow {
            l,
            m,
            iota: band_sum(family, &dg),
            kappa_gap: velocity_band_sum(family, &biot_savart(&df)),
            cauchy_gap: cauchy_gap(&runs[i], &runs[i - 1], family)?,
        });
    }
    let ls: Vec<f64> = rows.iter().map(|r| r.l as f64).collect();
    let slope = if rows.iter().all(|r| r.iota > 0.0) {
        let logs: Vec<f64> = rows.iter().map(|r| r.iota.log2()).collect();
        Some(linear_fit(&ls, &logs)?.0)
    } else {
        None
    };
    let gamma_logs: Vec<f64> = ls.iter().map(|l| gamma.eval(*l).log2()).collect();
    let gamma_slope = if ls.len() >= 2 { linear_fit(&ls, &gamma_logs)?.0 } else { 0.0 };
    let target_slope = -1.0 + gamma_slope;
    Ok(ApproximationTable {
        slope_ok: slope.is_some_and(|s| s <= target_slope + SLOPE_TOLERANCE),
        cauchy_monotone: rows.windows(2).all(|w| w[1].cauchy_gap < w[0].cauchy_gap),
        rows,
        gamma: gamma.name().to_string(),
        slope,
        gamma_slope,
        target_slope,
    })
}
