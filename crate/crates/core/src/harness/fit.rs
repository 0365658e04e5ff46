use crate::error::{Error, Result};
use crate::lp::LpFamily;
use crate::solver::Trajectory;
use crate::spectral::{lp_norm, LebesgueExponent};

/// Least-squares line through `(xs, ys)`, as `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::param("points", "a line needs at least two points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("points", "abscissae must not all coincide"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Fitted exponential decay rate of `||Delta_j rho(t)||_2` along a run.
pub fn band_decay_rate(traj: &Trajectory, family: &LpFamily, j: i32) -> Result<f64> {
    let times = traj.times();
    let logs: Vec<f64> = traj
        .states
        .iter()
        .map(|s| lp_norm(&family.delta(&s.rho, j), LebesgueExponent::TWO).ln())
        .collect();
    Ok(-linear_fit(&times, &logs)?.0)
}

/// Decay rate `-ln|c_k(t)/c_k(0)| / t` of one Fourier coefficient of `rho`
/// between the first and last samples.
pub fn mode_decay_rate(traj: &Trajectory, k1: i64, k2: i64) -> f64 {
    let (t0, t1) = traj.span();
    let c0 = traj.initial().rho.coeff(k1, k2).norm();
    let c1 = traj.last().rho.coeff(k1, k2).norm();
    -(c1 / c0).ln() / (t1 - t0)
}
