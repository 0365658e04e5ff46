use super::checks::{CheckContext, CheckId};
use super::record::{EstimateRecord, Relation};
use crate::error::{Error, Result};
use crate::lp::{norm, NormSpec};
use crate::solver::{inverse_flow_map, Trajectory};
use crate::spectral::SpectralField;

/// Number of `(0, t)` pairs used when none are given.
const DEFAULT_PAIRS: usize = 5;

/// `(0, t)` for a handful of evenly spread sample times, including `t = 0`.
pub fn default_sample_pairs(traj: &Trajectory) -> Vec<(f64, f64)> {
    let times = traj.times();
    let last = times.len() - 1;
    let mut picks: Vec<usize> = (0..DEFAULT_PAIRS).map(|i| i * last / (DEFAULT_PAIRS - 1).max(1)).collect();
    picks.dedup();
    picks.into_iter().map(|i| (0.0, times[i])).collect()
}

/// Tracks `||f o X^{-1}(t; tau)||_{Gamma1} / ||f||_Gamma` over the given
/// `(tau, t)` pairs. The record time is `t - tau`; pairs must yield
/// increasing lags.
pub fn flow_composition_check(
    traj: &Trajectory,
    f: &SpectralField,
    ctx: &CheckContext,
    pairs: &[(f64, f64)],
) -> Result<EstimateRecord> {
    if f.grid() != traj.grid() {
        return Err(Error::GridMismatch(f.grid().n(), traj.grid().n()));
    }
    let id = CheckId::FlowComposition;
    let mut record = EstimateRecord::new(id.as_str(), Relation::UpperBound, ctx.meta());
    let base = norm(f, &NormSpec::gamma(&ctx.gamma), &ctx.family).value;
    let companion = NormSpec::gamma1(&ctx.gamma);
    for &(tau, t) in pairs {
        let composed = inverse_flow_map(traj, tau, t)?.compose(f);
        let lhs = norm(&composed, &companion, &ctx.family).value;
        record.push(t - tau, lhs, base);
    }
    if !record.points.windows(2).all(|w| w[1].t > w[0].t) {
        return Err(Error::param("pairs", "lags t - tau must be strictly increasing"));
    }
    Ok(record)
}
