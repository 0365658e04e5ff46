//! Bony's paraproduct splitting, the commutator with dyadic blocks, and the
//! ratios of both sides of the associated bounds.

use serde::Serialize;

use crate::lp::{norm_vector, LpFamily, NormSpec};
use crate::spectral::{advect, gradient, pointwise_magnitude, SpectralField, VelocityField};

/// `f g = T_f g + T_g f + R(f, g)`.
#[derive(Clone, Debug)]
pub struct BonySplit {
    pub t_fg: SpectralField,
    pub t_gf: SpectralField,
    pub remainder: SpectralField,
}

impl BonySplit {
    pub fn sum(&self) -> SpectralField {
        let mut s = &self.t_fg + &self.t_gf;
        s += &self.remainder;
        s
    }
}

fn cumulative(bands: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut acc = vec![0.0; bands[0].len()];
    bands
        .iter()
        .map(|b| {
            for (a, v) in acc.iter_mut().zip(b) {
                *a += v;
            }
            acc.clone()
        })
        .collect()
}

/// `T_a b = sum_{j >= 0} S_{j-2} a Delta_j b` in physical space, with `S_{-2} = 0`.
fn paraproduct_samples(low: &[Vec<f64>], high: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; high[0].len()];
    // Band j sits at index j + 1 and S_{j-2} at index j - 1.
    for j in 1..high.len() as i32 - 1 {
        let s = &low[(j - 1) as usize];
        let d = &high[(j + 1) as usize];
        for ((o, a), b) in out.iter_mut().zip(s).zip(d) {
            *o += a * b;
        }
    }
    out
}

pub fn bony_decompose(f: &SpectralField, g: &SpectralField, family: &LpFamily) -> BonySplit {
    let grid = f.grid();
    let fb = family.band_samples(f);
    let gb = family.band_samples(g);
    let t_fg = paraproduct_samples(&cumulative(&fb), &gb);
    let t_gf = paraproduct_samples(&cumulative(&gb), &fb);
    let mut rem = vec![0.0; grid.points()];
    for (j, fj) in fb.iter().enumerate() {
        for k in j.saturating_sub(1)..(j + 2).min(gb.len()) {
            for ((r, a), b) in rem.iter_mut().zip(fj).zip(&gb[k]) {
                *r += a * b;
            }
        }
    }
    let back = |s: Vec<f64>| {
        SpectralField::from_physical(grid, &s)
            .expect("same grid")
            .dealiased()
    };
    BonySplit {
        t_fg: back(t_fg),
        t_gf: back(t_gf),
        remainder: back(rem),
    }
}

/// Index of the low-frequency cutoff paired with band `j` in the commutator:
/// `S_{j-2}`, read as `S_{-1}` for `j = -1, 0`.
fn commutator_cutoff(j: i32) -> i32 {
    (j - 2).max(-1)
}

fn fluctuation(u: &VelocityField) -> VelocityField {
    VelocityField {
        u1: u.u1.without_mean(),
        u2: u.u2.without_mean(),
    }
}

/// `R_j(u, rho) = Delta_j (u . grad rho) - (S_{j-2} u . grad) Delta_j rho`.
///
/// The mean of `u` commutes with `Delta_j` and passes through `S_{j-2}`
/// unchanged, so it cancels identically and only the fluctuation is used.
pub fn commutator_rj(u: &VelocityField, rho: &SpectralField, j: i32, family: &LpFamily) -> SpectralField {
    let w = fluctuation(u);
    commutator_from_parts(&w, &advect(&w, rho), rho, j, family)
}

fn commutator_from_parts(
    w: &VelocityField,
    transport: &SpectralField,
    rho: &SpectralField,
    j: i32,
    family: &LpFamily,
) -> SpectralField {
    let cut = commutator_cutoff(j);
    let low = VelocityField {
        u1: family.partial(&w.u1, cut),
        u2: family.partial(&w.u2, cut),
    };
    let mut r = family.delta(transport, j);
    r -= &advect(&low, &family.delta(rho, j));
    r
}

/// Both sides of the commutator bound for one band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorRatio {
    pub j: i32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// Set when the right side vanishes while the left does not.
    pub violation: bool,
}

/// Left sides below this count as zero when the right side vanishes.
pub const RATIO_FLOOR: f64 = 1e-13;

pub(crate) fn ratio_of(lhs: f64, rhs: f64) -> (f64, bool) {
    if rhs > 0.0 {
        (lhs / rhs, false)
    } else if lhs <= RATIO_FLOOR {
        (0.0, false)
    } else {
        (f64::INFINITY, true)
    }
}

/// Band data shared by every `j` of a commutator sweep.
struct CommutatorInputs<'a> {
    family: &'a LpFamily,
    rho: &'a SpectralField,
    w: VelocityField,
    transport: SpectralField,
    rho_sup: Vec<f64>,
    rho_low_sup: Vec<f64>,
    grad_sup: Vec<f64>,
    grad_low_sup: Vec<f64>,
    mean_speed: f64,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

impl<'a> CommutatorInputs<'a> {
    fn new(u: &VelocityField, rho: &'a SpectralField, family: &'a LpFamily) -> Self {
        let w = fluctuation(u);
        let transport = advect(&w, rho);
        let rho_bands = family.band_samples(rho);
        let rho_cum = cumulative(&rho_bands);
        let grad = u.gradient();
        let grad_bands: Vec<Vec<Vec<f64>>> = grad.iter().map(|c| family.band_samples(c)).collect();
        let grad_cum: Vec<Vec<Vec<f64>>> = grad_bands.iter().map(|b| cumulative(b)).collect();
        let bands = family.band_count();
        let magnitude = |src: &Vec<Vec<Vec<f64>>>, i: usize| {
            let comps: Vec<Vec<f64>> = src.iter().map(|c| c[i].clone()).collect();
            sup(&pointwise_magnitude(&comps))
        };
        // Index of S_{l-2} (read as S_{-1} for l = -1, 0) within the cumulative tables.
        let low_index = |i: usize| (commutator_cutoff(i as i32 - 1) + 1) as usize;
        let mean = u.mean();
        CommutatorInputs {
            family,
            rho,
            transport,
            w,
            rho_sup: rho_bands.iter().map(|b| sup(b)).collect(),
            rho_low_sup: (0..bands).map(|i| sup(&rho_cum[low_index(i)])).collect(),
            grad_sup: (0..bands).map(|i| magnitude(&grad_bands, i)).collect(),
            grad_low_sup: (0..bands).map(|i| magnitude(&grad_cum, low_index(i))).collect(),
            mean_speed: mean[0].hypot(mean[1]),
        }
    }

    fn rhs(&self, j: i32) -> f64 {
        let j_max = self.family.j_max();
        let at = |l: i32| (l + 1) as usize;
        let mut near = 0.0;
        for l in (j - 1).max(-1)..=(j + 1).min(j_max) {
            near += self.rho_low_sup[at(l)] * self.grad_sup[at(l)]
                + self.grad_low_sup[at(l)] * self.rho_sup[at(l)];
        }
        let mut far = 0.0;
        for l in (j - 1).max(-1)..=j_max {
            // Primed sum: at l = -1 the gradient block is replaced by ||Delta_{-1} u||_inf.
            let factor = if l == -1 { self.mean_speed } else { self.grad_sup[at(l)] };
            let neighbours: f64 = ((l - 1).max(-1)..=(l + 1).min(j_max))
                .map(|m| self.rho_sup[at(m)])
                .sum();
            far += 2f64.powi(-l) * factor * neighbours;
        }
        near + 2f64.powi(j) * far
    }

    fn ratio(&self, j: i32) -> CommutatorRatio {
        let r = commutator_from_parts(&self.w, &self.transport, self.rho, j, self.family);
        let lhs = sup(&r.to_physical());
        let rhs = self.rhs(j);
        let (ratio, violation) = ratio_of(lhs, rhs);
        CommutatorRatio {
            j,
            lhs,
            rhs,
            ratio,
            violation,
        }
    }
}

/// `||R_j(u, rho)||_inf` against the commutator bound with unit constant,
/// both band sums truncated at `j_max`.
pub fn commutator_bound_ratio(u: &VelocityField, rho: &SpectralField, j: i32, family: &LpFamily) -> CommutatorRatio {
    CommutatorInputs::new(u, rho, family).ratio(j)
}

/// [`commutator_bound_ratio`] for every band `-1..=j_max`, sharing the band data.
pub fn commutator_sweep(u: &VelocityField, rho: &SpectralField, family: &LpFamily) -> Vec<CommutatorRatio> {
    let inputs = CommutatorInputs::new(u, rho, family);
    family.band_range().map(|j| inputs.ratio(j)).collect()
}

/// Both sides of a paraproduct-type bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl BoundRatio {
    pub(crate) fn new(lhs: f64, rhs: f64) -> Self {
        BoundRatio {
            lhs,
            rhs,
            ratio: ratio_of(lhs, rhs).0,
        }
    }
}

/// `||R(u, rho)||_{B^0_{inf,1}}` against `||rho||_{B^0_{inf,inf}} ||u||_{B^0_{inf,1}}`.
pub fn remainder_bound_ratio(u: &VelocityField, rho: &SpectralField, family: &LpFamily) -> BoundRatio {
    let r1 = bony_decompose(&u.u1, rho, family).remainder;
    let r2 = bony_decompose(&u.u2, rho, family).remainder;
    let b01 = NormSpec::besov(0.0, f64::INFINITY, 1.0);
    let lhs = norm_vector(&[&r1, &r2], &b01, family).value;
    let rho_b0 = crate::lp::norm(rho, &NormSpec::B0InfInf, family).value;
    let u_b01 = norm_vector(&[&u.u1, &u.u2], &b01, family).value;
    BoundRatio::new(lhs, rho_b0 * u_b01)
}

/// `R(u, grad rho) = sum_m R(u_m, d_m rho)` and
/// `sum_m (T_{d_m rho} u_m + T_{u_m} d_m rho)`, the two pieces of the
/// transport term that carry no derivative loss.
pub fn transport_pieces(u: &VelocityField, rho: &SpectralField, family: &LpFamily) -> (SpectralField, SpectralField) {
    let grad = gradient(rho);
    let mut rem = SpectralField::zeros(rho.grid());
    let mut para = SpectralField::zeros(rho.grid());
    for (um, dm) in u.components().into_iter().zip(&grad) {
        let split = bony_decompose(um, dm, family);
        rem += &split.remainder;
        para += &split.t_fg;
        para += &split.t_gf;
    }
    (rem, para)
}
