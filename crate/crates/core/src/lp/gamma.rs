//! Growth functions for the borderline spaces and their admissibility checks.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Step used for central-difference derivatives of growth functions.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Catalog identifiers accepted by [`GammaSpec::catalog`].
pub const CATALOG: &[&str] = &["lin", "log", "sqrtlog", "ramp", "unit"];

type GrowthFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Linear,
    Log,
    SqrtLog,
    Ramp,
    Unit,
    Custom(GrowthFn),
}

/// A growth function `Gamma` together with its companion
/// `Gamma1(a) = (a + 2) Gamma(a)` for `a >= -1`, and `1` below.
#[derive(Clone)]
pub struct GammaSpec {
    name: String,
    kind: Kind,
    modulus: bool,
}

impl fmt::Debug for GammaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GammaSpec")
            .field("name", &self.name)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GammaSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.modulus == other.modulus
    }
}

fn log_term(alpha: f64) -> f64 {
    1.0 + (alpha + 2.0).log2()
}

impl GammaSpec {
    /// `max(1, a + 2)`.
    pub fn linear() -> Self {
        Self::builtin("lin", Kind::Linear, true)
    }

    /// `1 + log2(a + 2)` for `a >= -1`.
    pub fn log() -> Self {
        Self::builtin("log", Kind::Log, true)
    }

    /// `sqrt(1 + log2(a + 2))` for `a >= -1`.
    pub fn sqrt_log() -> Self {
        Self::builtin("sqrtlog", Kind::SqrtLog, true)
    }

    /// `max(1, a)`.
    pub fn ramp() -> Self {
        Self::builtin("ramp", Kind::Ramp, true)
    }

    /// Constant `1`. Not admissible; only for exercising the Osgood integrator
    /// in its linear limit.
    pub fn unit() -> Self {
        Self::builtin("unit", Kind::Unit, false)
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GammaSpec {
            name: name.into(),
            kind: Kind::Custom(Arc::new(f)),
            modulus: false,
        }
    }

    pub fn catalog(name: &str) -> Result<Self> {
        match name {
            "lin" => Ok(Self::linear()),
            "log" => Ok(Self::log()),
            "sqrtlog" => Ok(Self::sqrt_log()),
            "ramp" => Ok(Self::ramp()),
            "unit" => Ok(Self::unit()),
            other => Err(Error::UnknownCatalog(other.to_string())),
        }
    }

    fn builtin(name: &str, kind: Kind, modulus: bool) -> Self {
        GammaSpec {
            name: name.to_string(),
            kind,
            modulus,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether this function is declared usable as the uniqueness modulus.
    pub fn is_modulus(&self) -> bool {
        self.modulus
    }

    pub fn with_modulus(mut self, modulus: bool) -> Self {
        self.modulus = modulus;
        self
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        match &self.kind {
            Kind::Linear => (alpha + 2.0).max(1.0),
            Kind::Log => {
                if alpha <= -1.0 {
                    1.0
                } else {
                    log_term(alpha)
                }
            }
            Kind::SqrtLog => {
                if alpha <= -1.0 {
                    1.0
                } else {
                    log_term(alpha).sqrt()
                }
            }
            Kind::Ramp => alpha.max(1.0),
            Kind::Unit => 1.0,
            Kind::Custom(f) => f(alpha),
        }
    }

    pub fn eval_gamma1(&self, alpha: f64) -> f64 {
        if alpha >= -1.0 {
            (alpha + 2.0) * self.eval(alpha)
        } else {
            1.0
        }
    }

    /// Central difference of `Gamma`.
    pub fn derivative(&self, alpha: f64) -> f64 {
        (self.eval(alpha + DERIVATIVE_STEP) - self.eval(alpha - DERIVATIVE_STEP)) / (2.0 * DERIVATIVE_STEP)
    }

    /// Closed-form verdict on whether `int_1^inf 1/Gamma1` diverges, when known.
    pub fn known_gamma1_divergence(&self) -> Option<bool> {
        match self.kind {
            Kind::Linear | Kind::Ramp => Some(false),
            Kind::Log | Kind::SqrtLog | Kind::Unit => Some(true),
            Kind::Custom(_) => None,
        }
    }
}

/// Outcome of one admissibility condition.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub id: String,
    pub passed: bool,
    pub measured: f64,
    pub detail: String,
}

/// Per-condition verdicts for a growth function.
#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub name: String,
    pub alpha_max: f64,
    pub step: f64,
    pub conditions: Vec<ConditionResult>,
    /// Heuristic verdict for condition (vi) before any closed-form override.
    pub divergence_heuristic: bool,
    pub divergence_override: Option<bool>,
    /// Smallest integer from which `Pi(xi) 2^{-xi}` is nonincreasing.
    pub m1: Option<i32>,
}

impl GammaReport {
    pub fn condition(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn passes(&self, id: &str) -> bool {
        self.condition(id).is_some_and(|c| c.passed)
    }

    /// Conditions (i)-(vi).
    pub fn admissible(&self) -> bool {
        ["i", "ii", "iii", "iv", "v", "vi"].iter().all(|id| self.passes(id))
    }

    /// Conditions (i)-(iii) plus the two modulus assumptions.
    pub fn usable_as_modulus(&self) -> bool {
        ["i", "ii", "iii", "pi-divergence", "pi-decay"]
            .iter()
            .all(|id| self.passes(id))
    }
}

/// Tolerance for "the measured constant no longer grows" between the half
/// range and the full range.
const SATURATION: f64 = 1e-3;

/// Ratio of consecutive dyadic increments of a partial integral above which
/// the integral is judged divergent.
const DIVERGENCE_RATIO: f64 = 0.8;

fn result(id: &str, passed: bool, measured: f64, detail: String) -> ConditionResult {
    ConditionResult {
        id: id.to_string(),
        passed,
        measured,
        detail,
    }
}

/// Sup of `value` over samples with `alpha <= half` and over all samples.
fn split_sup(samples: impl Iterator<Item = (f64, f64)>, half: f64) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut all = f64::NEG_INFINITY;
    for (a, v) in samples {
        if a <= half {
            lo = lo.max(v);
        }
        all = all.max(v);
    }
    (lo, all)
}

fn saturated(half: f64, full: f64) -> bool {
    full.is_finite() && full <= half.abs() * (1.0 + SATURATION) + f64::EPSILON
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, step: f64) -> f64 {
    let mut m = ((b - a) / step).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let m = m.max(2);
    let h = (b - a) / m as f64;
    let mut sum = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Ratio of consecutive dyadic increments of `int_1^A 1/g`.
fn divergence_ratio(g: impl Fn(f64) -> f64, alpha_max: f64, step: f64) -> f64 {
    let quarter = alpha_max / 4.0;
    let half = alpha_max / 2.0;
    let inv = |a: f64| 1.0 / g(a);
    let d_half = simpson(inv, quarter, half, step);
    let d_full = simpson(inv, half, alpha_max, step);
    d_full / d_half
}

/// Checks the admissibility conditions of `g` on `[-2, alpha_max]`.
///
/// Each sup-type constant is measured on `[-1, alpha_max/2]` and on
/// `[-1, alpha_max]`; a condition passes when the constant has saturated.
pub fn validate_gamma(g: &GammaSpec, alpha_max: f64, step: f64) -> Result<GammaReport> {
    if !(alpha_max >= 16.0) {
        return Err(Error::param("alpha_max", format!("{alpha_max} must be at least 16")));
    }
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::param("step", format!("{step} must lie in (0, 0.1]")));
    }
    let count = ((alpha_max + 2.0) / step).round() as usize;
    let alphas: Vec<f64> = (0..=count).map(|i| -2.0 + (alpha_max + 2.0) * i as f64 / count as f64).collect();
    let values: Vec<f64> = alphas.iter().map(|&a| g.eval(a)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonEvaluableGamma {
            name: g.name().to_string(),
            alpha: alphas[i],
        });
    }
    let half = alpha_max / 2.0;
    let mut conditions = Vec::new();

    // (i)
    let below_dev = alphas
        .iter()
        .zip(&values)
        .filter(|(a, _)| **a <= -1.0)
        .map(|(_, v)| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let monotone = values.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let top = g.eval(alpha_max);
    let growing = top > g.eval(half) * (1.0 + 1e-9);
    conditions.push(result(
        "i",
        below_dev <= 1e-12 && min_value >= 1.0 - 1e-12 && monotone && growing,
        top,
        format!(
            "max |G-1| below -1: {below_dev:e}; min G: {min_value}; nondecreasing: {monotone}; G(A) = {top} vs G(A/2) = {}",
            g.eval(half)
        ),
    ));

    // (ii)
    let ratio_samples = alphas.iter().filter(|a| **a >= -1.0 && **a <= alpha_max - 1.0).map(|&a| {
        let base = g.eval(a);
        let worst = [0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|d| {
                let other = g.eval(a + d);
                (other / base).max(base / other)
            })
            .fold(0.0, f64::max);
        (a, worst)
    });
    let (lo, all) = split_sup(ratio_samples, half);
    conditions.push(result(
        "ii",
        saturated(lo, all),
        all,
        format!("sup G(a)/G(b) over |a-b| <= 1: {lo} on [-1, A/2], {all} on [-1, A]"),
    ));

    // (iii), (iv)
    let tail_points: Vec<f64> = (0..400)
        .map(|i| -1.0 + (alpha_max + 1.0) * (i as f64 / 399.0).powi(3))
        .collect();
    let tail_step = step.max(0.01);
    for (id, func) in [
        ("iii", &(|a: f64| g.eval(a)) as &dyn Fn(f64) -> f64),
        ("iv", &(|a: f64| g.eval_gamma1(a)) as &dyn Fn(f64) -> f64),
    ] {
        let mut converged = true;
        let samples: Vec<(f64, f64)> = tail_points
            .iter()
            .map(|&a| {
                let base = func(a);
                let integrand = |s: f64| (-s * std::f64::consts::LN_2).exp() * func(a + s) / base;
                let short = simpson(integrand, 0.0, 64.0, tail_step);
                let long = short + simpson(integrand, 64.0, 128.0, tail_step);
                if !(long.is_finite() && (long - short).abs() <= 1e-6 * long) {
                    converged = false;
                }
                (a, long)
            })
            .collect();
        let (lo, all) = split_sup(samples.into_iter(), half);
        conditions.push(result(
            id,
            converged && saturated(lo, all),
            all,
            format!("sup tail ratio: {lo} on [-1, A/2], {all} on [-1, A]; tail converged: {converged}"),
        ));
    }

    // (v)
    let convex_points: Vec<f64> = (0..300)
        .map(|i| -2.0 + (alpha_max + 2.0) * (i as f64 / 299.0).powi(2))
        .collect();
    let g1: Vec<f64> = convex_points.iter().map(|&a| g.eval_gamma1(a)).collect();
    let mut worst = 0.0f64;
    for i in 0..convex_points.len() {
        for j in (i + 1)..convex_points.len() {
            let mid = g.eval_gamma1(0.5 * (convex_points[i] + convex_points[j]));
            let chord = 0.5 * (g1[i] + g1[j]);
            worst = worst.max((mid - chord) / chord);
        }
    }
    conditions.push(result(
        "v",
        worst <= 1e-12,
        worst,
        format!("largest relative midpoint excess of G1: {worst:e}"),
    ));

    // (vi)
    let ratio = divergence_ratio(|a| g.eval_gamma1(a), alpha_max, step);
    let heuristic = ratio >= DIVERGENCE_RATIO;
    let known = g.known_gamma1_divergence();
    conditions.push(result(
        "vi",
        known.unwrap_or(heuristic),
        ratio,
        format!(
            "dyadic increment ratio of int 1/G1: {ratio}; heuristic {}; closed form {}",
            if heuristic { "divergent" } else { "convergent" },
            known.map_or("n/a", |k| if k { "divergent" } else { "convergent" })
        ),
    ));

    // (2.2), (2.3)
    let interior = || alphas.iter().cloned().filter(|a| *a >= -1.0 + 1e-3);
    let (lo, all) = split_sup(interior().map(|a| (a, (a + 2.0) * g.derivative(a))), half);
    conditions.push(result(
        "2.2",
        saturated(lo, all),
        all,
        format!("sup (a+2) G'(a): {lo} on [-1, A/2], {all} on [-1, A]"),
    ));
    let (lo, all) = split_sup(interior().map(|a| (a, g.derivative(a) * g.eval_gamma1(a))), half);
    conditions.push(result(
        "2.3",
        saturated(lo, all),
        all,
        format!("sup G'(a) G1(a): {lo} on [-1, A/2], {all} on [-1, A]"),
    ));

    // Modulus assumptions: divergence of int 1/Pi and eventual decay of Pi 2^{-xi}.
    let ratio = divergence_ratio(|a| g.eval(a), alpha_max, step);
    conditions.push(result(
        "pi-divergence",
        ratio >= DIVERGENCE_RATIO,
        ratio,
        format!("dyadic increment ratio of int 1/G: {ratio}"),
    ));
    let logs: Vec<(f64, f64)> = alphas
        .iter()
        .zip(&values)
        .filter(|(a, _)| **a >= -1.0)
        .map(|(&a, &v)| (a, v.ln() - a * std::f64::consts::LN_2))
        .collect();
    let last_rise = logs
        .windows(2)
        .rposition(|w| w[1].1 > w[0].1 + 1e-14 * w[0].1.abs().max(1.0))
        .map(|i| logs[i + 1].0);
    let m1 = match last_rise {
        None => Some(-1),
        Some(a) if a < alpha_max - 1.0 => Some(a.ceil() as i32),
        Some(_) => None,
    };
    let decays = logs.last().map_or(false, |l| l.1 < -1.0);
    conditions.push(result(
        "pi-decay",
        m1.is_some() && decays,
        m1.map_or(f64::NAN, f64::from),
        format!("G(x) 2^-x nonincreasing from x = {m1:?}"),
    ));

    Ok(GammaReport {
        name: g.name().to_string(),
        alpha_max,
        step,
        conditions,
        divergence_heuristic: heuristic,
        divergence_override: known,
        m1,
    })
}
