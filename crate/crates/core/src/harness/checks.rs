//! The registry of monitored inequalities and the observers that evaluate them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::composition::{default_sample_pairs, flow_composition_check};
use super::record::{ratio, EstimateRecord, Exponents, RecordMeta, Relation};
use crate::error::{Error, Result};
use crate::lp::{norm, norm_vector, GammaSpec, LpFamily, NormSpec};
use crate::paraproduct::{commutator_sweep, transport_pieces};
use crate::solver::{simulate_observed, SimState, SolverConfig, Trajectory};
use crate::spectral::{
    advect, biot_savart, gradient, lp_norm, lp_norm_vector, LebesgueExponent, SpectralField,
};

/// Largest admissible sample spacing, in solver steps.
pub const MAX_STRIDE: usize = 10;

/// Band used by the heat-smoothing check unless configured otherwise.
pub const DEFAULT_CHEMIN_BAND: i32 = 3;

macro_rules! checks {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        /// Identifier of a monitored inequality.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum CheckId {
            $(#[serde(rename = $name)] $variant,)+
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)+
                }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(CheckId::$variant),)+
                    other => Err(Error::UnknownCheck(other.to_string())),
                }
            }
        }
    };
}

checks! {
    VorticityTransportP0 => "vorticity_transport_p0",
    VorticityTransportP1 => "vorticity_transport_p1",
    EnergyIdentity => "energy_identity",
    BernsteinChain => "bernstein_chain",
    DuhamelBesovInf => "duhamel_besov_inf",
    DuhamelBesovP0 => "duhamel_besov_p0",
    CheminHeat => "chemin_heat",
    ThetaUpsilon => "theta_upsilon",
    ParaproductRemainder => "paraproduct_remainder",
    ParaproductLowHigh => "paraproduct_low_high",
    AprioriOmegaGamma1 => "apriori_omega_gamma1",
    AprioriGradrhoGamma => "apriori_gradrho_gamma",
    AprioriGradrhoP0 => "apriori_gradrho_p0",
    AprioriGradrhoP1 => "apriori_gradrho_p1",
    AbelTail => "abel_tail",
    Commutator => "commutator",
    FlowComposition => "flow_composition",
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl CheckId {
    pub fn relation(&self) -> Relation {
        match self {
            CheckId::EnergyIdentity => Relation::Equality,
            _ => Relation::UpperBound,
        }
    }

    /// Thresholds that hold with unit constants on every run: the ratio bound
    /// for transport checks and the relative drift for the energy identity.
    pub fn universal_threshold(&self) -> Option<f64> {
        match self {
            CheckId::VorticityTransportP0 | CheckId::VorticityTransportP1 => Some(1.0 + 1e-3),
            CheckId::EnergyIdentity => Some(1e-6),
            _ => None,
        }
    }

    /// Checks that need the stored trajectory rather than a streaming observer.
    pub fn needs_trajectory(&self) -> bool {
        matches!(self, CheckId::FlowComposition)
    }
}

/// Everything a check needs besides the states themselves.
#[derive(Clone, Debug)]
pub struct CheckContext {
    pub family: LpFamily,
    pub gamma: GammaSpec,
    pub exponents: Exponents,
    pub config: SolverConfig,
    pub seed: u64,
    pub chemin_band: i32,
}

impl CheckContext {
    pub fn new(family: LpFamily, gamma: GammaSpec, exponents: Exponents, config: SolverConfig, seed: u64) -> Result<Self> {
        exponents.validate()?;
        config.validate()?;
        let chemin_band = DEFAULT_CHEMIN_BAND.min(family.j_max());
        Ok(CheckContext {
            family,
            gamma,
            exponents,
            config,
            seed,
            chemin_band,
        })
    }

    pub fn meta(&self) -> RecordMeta {
        RecordMeta::new(&self.family, &self.gamma, self.exponents, &self.config, self.seed)
    }

    fn exponent(p: f64) -> LebesgueExponent {
        LebesgueExponent::new(p).expect("validated exponent")
    }

    fn grad_lp(&self, f: &SpectralField, p: f64) -> f64 {
        let g = gradient(f);
        lp_norm_vector(&[&g[0], &g[1]], Self::exponent(p))
    }

    fn grad_norm(&self, f: &SpectralField, spec: &NormSpec) -> f64 {
        let g = gradient(f);
        norm_vector(&[&g[0], &g[1]], spec, &self.family).value
    }

    fn scalar_norm(&self, f: &SpectralField, spec: &NormSpec) -> f64 {
        norm(f, spec, &self.family).value
    }

    /// Abel-type bound `2^{-N} Gamma(N) ||grad rho||_Gamma` on the bands above `N = j_max`.
    pub fn tail_residual(&self, rho: &SpectralField) -> f64 {
        let n = self.family.j_max();
        let grad = self.grad_norm(rho, &NormSpec::gamma(&self.gamma));
        2f64.powi(-n) * self.gamma.eval(n as f64) * grad
    }
}

/// Running trapezoid integral over irregular samples.
#[derive(Clone, Copy, Debug, Default)]
pub struct Trapezoid {
    last: Option<(f64, f64)>,
    total: f64,
}

impl Trapezoid {
    pub fn push(&mut self, t: f64, value: f64) -> f64 {
        if let Some((t0, v0)) = self.last {
            self.total += 0.5 * (t - t0) * (v0 + value);
        }
        self.last = Some((t, value));
        self.total
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

struct Sample {
    lhs: f64,
    rhs: f64,
    ratio: Option<f64>,
    residual: Option<f64>,
}

impl Sample {
    fn new(lhs: f64, rhs: f64) -> Self {
        Sample {
            lhs,
            rhs,
            ratio: None,
            residual: None,
        }
    }

    fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }
}

type Evaluator<'a> = Box<dyn FnMut(&SimState) -> Result<Sample> + Send + 'a>;

/// A step observer accumulating one [`EstimateRecord`].
pub struct Monitor<'a> {
    id: CheckId,
    record: EstimateRecord,
    eval: Evaluator<'a>,
}

impl<'a> Monitor<'a> {
    pub fn new(id: CheckId, ctx: &'a CheckContext) -> Result<Self> {
        Ok(Monitor {
            id,
            record: EstimateRecord::new(id.as_str(), id.relation(), ctx.meta()),
            eval: evaluator(id, ctx)?,
        })
    }

    pub fn id(&self) -> CheckId {
        self.id
    }

    pub fn observe(&mut self, state: &SimState) -> Result<()> {
        let s = (self.eval)(state)?;
        let r = s.ratio.unwrap_or_else(|| ratio(s.lhs, s.rhs));
        self.record.push_with_ratio(state.t, s.lhs, s.rhs, r);
        if let Some(res) = s.residual {
            let prev = self.record.truncation_residual.unwrap_or(0.0);
            self.record.truncation_residual = Some(prev.max(res));
        }
        Ok(())
    }

    pub fn finish(self) -> EstimateRecord {
        self.record
    }
}

/// Lazily captured value of the first observed state.
fn initial<T: Copy>(slot: &mut Option<T>, make: impl FnOnce() -> T) -> T {
    *slot.get_or_insert_with(make)
}

fn evaluator<'a>(id: CheckId, ctx: &'a CheckContext) -> Result<Evaluator<'a>> {
    let kappa = ctx.config.kappa;
    let (p0, p1) = (ctx.exponents.p0, ctx.exponents.p1);
    let gamma_spec = NormSpec::gamma(&ctx.gamma);
    let gamma1_spec = NormSpec::gamma1(&ctx.gamma);
    Ok(match id {
        CheckId::VorticityTransportP0 | CheckId::VorticityTransportP1 => {
            let p = if id == CheckId::VorticityTransportP0 { p0 } else { p1 };
            let exp = CheckContext::exponent(p);
            let mut start = None;
            let mut integral = Trapezoid::default();
            Box::new(move |s| {
                let w = lp_norm(&s.omega, exp);
                let w0 = initial(&mut start, || w);
                let source = integral.push(s.t, ctx.grad_lp(&s.rho, p));
                Ok(Sample::new(w, w0 + source))
            })
        }
        CheckId::EnergyIdentity => {
            let mut start = None;
            let mut integral = Trapezoid::default();
            Box::new(move |s| {
                let mass = lp_norm(&s.rho, LebesgueExponent::TWO).powi(2);
                let m0 = initial(&mut start, || mass);
                let dissipated = integral.push(s.t, ctx.grad_lp(&s.rho, 2.0).powi(2));
                Ok(Sample::new(mass + 2.0 * kappa * dissipated, m0))
            })
        }
        CheckId::BernsteinChain => Box::new(move |s| {
            let lhs = ctx.scalar_norm(&s.rho, &NormSpec::B0InfInf);
            let rhs = lp_norm(&s.rho, LebesgueExponent::TWO) + ctx.grad_lp(&s.rho, 2.0);
            Ok(Sample::new(lhs, rhs))
        }),
        CheckId::DuhamelBesovInf | CheckId::DuhamelBesovP0 => {
            let p = if id == CheckId::DuhamelBesovInf { f64::INFINITY } else { p0 };
            let smooth = NormSpec::besov(1.0, p, 1.0);
            let rough = NormSpec::besov(-1.0, p, 1.0);
            let mut start = None;
            let mut gain = Trapezoid::default();
            let mut forcing = Trapezoid::default();
            Box::new(move |s| {
                let r0 = initial(&mut start, || ctx.scalar_norm(&s.rho, &rough));
                let lhs = kappa * gain.push(s.t, ctx.scalar_norm(&s.rho, &smooth));
                let u = s.velocity(ctx.config.mean_flow);
                let h = ctx.scalar_norm(&advect(&u, &s.rho), &rough);
                let rhs = (1.0 + kappa * s.t) * (r0 + forcing.push(s.t, h));
                Ok(Sample::new(lhs, rhs).with_residual(ctx.tail_residual(&s.rho)))
            })
        }
        CheckId::CheminHeat => {
            let j = ctx.chemin_band;
            if j < 0 {
                return Err(Error::param("chemin_band", "the heat check needs an annulus band j >= 0"));
            }
            let mut start: Option<(SpectralField, f64)> = None;
            Box::new(move |s| {
                let (band, sup0) = start
                    .get_or_insert_with(|| {
                        let band = ctx.family.delta(&s.rho, j);
                        let sup0 = lp_norm(&band, LebesgueExponent::Infinity);
                        (band, sup0)
                    })
                    .clone();
                let t = s.t;
                let decayed = band.map_modes(|k1, k2, c| c * (-kappa * t * (k1 * k1 + k2 * k2) as f64).exp());
                let lhs = lp_norm(&decayed, LebesgueExponent::Infinity);
                let rhs = (-kappa * t * 4f64.powi(j - 1)).exp() * sup0;
                Ok(Sample::new(lhs, rhs))
            })
        }
        CheckId::ThetaUpsilon => {
            if kappa <= 0.0 {
                return Err(Error::param("kappa", "the Theta/Upsilon check needs kappa > 0"));
            }
            let rough_p0 = NormSpec::besov(-1.0, p0, 1.0);
            let rough_inf = NormSpec::besov(-1.0, f64::INFINITY, 1.0);
            let p0_exp = CheckContext::exponent(p0);
            let mut start = None;
            let mut theta = Trapezoid::default();
            Box::new(move |s| {
                let (n1, mass, n2) = initial(&mut start, || {
                    let n1 = ctx.scalar_norm(&s.rho, &rough_p0).max(ctx.scalar_norm(&s.rho, &rough_inf));
                    let mass = lp_norm(&s.rho, LebesgueExponent::TWO).powi(2);
                    let n2 = lp_norm(&s.omega, p0_exp).max(ctx.scalar_norm(&s.omega, &gamma_spec));
                    (n1, mass, n2)
                });
                let integrand = ctx.grad_lp(&s.rho, p0).max(ctx.grad_norm(&s.rho, &gamma_spec));
                let lhs = theta.push(s.t, integrand);
                let log_rhs = log_upsilon(kappa, s.t, n1, mass, n2);
                let r = if lhs > 0.0 { (lhs.ln() - log_rhs).exp() } else { 0.0 };
                Ok(Sample {
                    lhs,
                    rhs: log_rhs.exp(),
                    ratio: Some(r),
                    residual: Some(ctx.tail_residual(&s.rho)),
                })
            })
        }
        CheckId::ParaproductRemainder | CheckId::ParaproductLowHigh => {
            let rough = NormSpec::besov(-1.0, f64::INFINITY, 1.0);
            let p0_exp = CheckContext::exponent(p0);
            Box::new(move |s| {
                // The background flow is a test device, not part of the Biot-Savart velocity.
                let u = biot_savart(&s.omega);
                let (rem, para) = transport_pieces(&u, &s.rho, &ctx.family);
                let piece = if id == CheckId::ParaproductRemainder { rem } else { para };
                let lhs = ctx.scalar_norm(&piece, &rough);
                let rho_b0 = ctx.scalar_norm(&s.rho, &NormSpec::B0InfInf);
                let w = lp_norm(&s.omega, p0_exp) + ctx.scalar_norm(&s.omega, &gamma1_spec);
                Ok(Sample::new(lhs, rho_b0 * w).with_residual(ctx.tail_residual(&s.rho)))
            })
        }
        CheckId::AprioriOmegaGamma1 => {
            let mut start = None;
            let mut integral = Trapezoid::default();
            Box::new(move |s| {
                let w0 = initial(&mut start, || ctx.scalar_norm(&s.omega, &gamma_spec));
                let lhs = ctx.scalar_norm(&s.omega, &gamma1_spec);
                let source = integral.push(s.t, ctx.grad_norm(&s.rho, &gamma_spec));
                Ok(Sample::new(lhs, w0 + source).with_residual(ctx.tail_residual(&s.rho)))
            })
        }
        CheckId::AprioriGradrhoGamma => {
            let mut start = None;
            Box::new(move |s| {
                let g = ctx.grad_norm(&s.rho, &gamma_spec);
                let g0 = initial(&mut start, || g);
                Ok(Sample::new(g, g0).with_residual(ctx.tail_residual(&s.rho)))
            })
        }
        CheckId::AprioriGradrhoP0 | CheckId::AprioriGradrhoP1 => {
            let p = if id == CheckId::AprioriGradrhoP0 { p0 } else { p1 };
            let mut start = None;
            Box::new(move |s| {
                let g = ctx.grad_lp(&s.rho, p);
                let g0 = initial(&mut start, || g);
                Ok(Sample::new(g, g0))
            })
        }
        CheckId::AbelTail => {
            let cut = ctx.family.j_max() - 2;
            Box::new(move |s| {
                let g = gradient(&s.rho);
                let sups = ctx.family.band_sups_vector(&[&g[0], &g[1]]);
                let lhs: f64 = ctx
                    .family
                    .band_range()
                    .filter(|j| *j > cut)
                    .map(|j| 2f64.powi(-j) * sups[(j + 1) as usize])
                    .sum();
                let pi_norm = NormSpec::gamma(&ctx.gamma).from_band_norms(&sups);
                let rhs = 2f64.powi(-cut) * ctx.gamma.eval(cut as f64) * pi_norm;
                Ok(Sample::new(lhs, rhs))
            })
        }
        CheckId::Commutator => Box::new(move |s| {
            let u = s.velocity(ctx.config.mean_flow);
            let worst = commutator_sweep(&u, &s.rho, &ctx.family)
                .into_iter()
                .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
                .expect("at least one band");
            Ok(Sample {
                lhs: worst.lhs,
                rhs: worst.rhs,
                ratio: Some(worst.ratio),
                residual: None,
            })
        }),
        CheckId::FlowComposition => {
            return Err(Error::TrajectoryMismatch(
                "flow_composition needs a stored trajectory; use run_inequality_check".into(),
            ))
        }
    })
}

/// `ln Upsilon(t)` with unit constant, where `alpha = (1 + kappa t) / kappa`:
/// `alpha [n1^2 + alpha t mass n2^2]^{1/2} exp(alpha^3 mass t)`.
pub fn log_upsilon(kappa: f64, t: f64, n1: f64, mass: f64, n2: f64) -> f64 {
    let alpha = (1.0 + kappa * t) / kappa;
    alpha.ln() + 0.5 * (n1 * n1 + alpha * t * mass * n2 * n2).ln() + alpha.powi(3) * mass * t
}

fn check_trajectory(traj: &Trajectory, ctx: &CheckContext) -> Result<()> {
    if traj.grid() != ctx.family.grid() {
        return Err(Error::TrajectoryMismatch(format!(
            "trajectory grid {} differs from the decomposition grid {}",
            traj.grid().n(),
            ctx.family.grid().n()
        )));
    }
    let dt = traj.config.dt;
    if traj.max_sample_gap() > MAX_STRIDE as f64 * dt * (1.0 + 1e-9) {
        return Err(Error::TrajectoryMismatch(format!(
            "sample spacing {} exceeds {MAX_STRIDE} solver steps",
            traj.max_sample_gap()
        )));
    }
    ctx.exponents.validate()
}

/// Evaluates one registered check along a stored trajectory.
pub fn run_inequality_check(id: CheckId, traj: &Trajectory, ctx: &CheckContext) -> Result<EstimateRecord> {
    check_trajectory(traj, ctx)?;
    if id == CheckId::FlowComposition {
        let pairs = default_sample_pairs(traj);
        return flow_composition_check(traj, &traj.initial().omega, ctx, &pairs);
    }
    let mut monitor = Monitor::new(id, ctx)?;
    for s in &traj.states {
        monitor.observe(s)?;
    }
    Ok(monitor.finish())
}

/// [`run_inequality_check`] by name.
pub fn run_check_by_name(id: &str, traj: &Trajectory, ctx: &CheckContext) -> Result<EstimateRecord> {
    run_inequality_check(id.parse()?, traj, ctx)
}

/// Runs the solver with every check in `ids` attached as an observer, so
/// no states are stored. Records come back in the order of `ids`.
pub fn run_checks_streaming(
    omega0: &SpectralField,
    rho0: &SpectralField,
    ids: &[CheckId],
    ctx: &CheckContext,
) -> Result<(Vec<EstimateRecord>, SimState)> {
    if ctx.config.stride > MAX_STRIDE {
        return Err(Error::param(
            "stride",
            format!("{} exceeds {MAX_STRIDE} steps between samples", ctx.config.stride),
        ));
    }
    if omega0.grid() != ctx.family.grid() {
        return Err(Error::GridMismatch(omega0.grid().n(), ctx.family.grid().n()));
    }
    let mut monitors = ids.iter().map(|id| Monitor::new(*id, ctx)).collect::<Result<Vec<_>>>()?;
    let last = simulate_observed(omega0, rho0, &ctx.config, &mut |s| {
        monitors.iter_mut().try_for_each(|m| m.observe(s))
    })?;
    Ok((monitors.into_iter().map(Monitor::finish).collect(), last))
}
