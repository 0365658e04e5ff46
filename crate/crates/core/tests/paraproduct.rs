mod common;

use boussinesq_core::lp::LpFamily;
use boussinesq_core::paraproduct::{bony_decompose, commutator_rj, commutator_sweep, remainder_bound_ratio};
use boussinesq_core::spectral::{SpectralField, VelocityField};
use common::{family, smooth, velocity};
use num_complex::Complex64;
use proptest::prelude::*;

fn radius(k1: i64, k2: i64) -> f64 {
    ((k1 * k1 + k2 * k2) as f64).sqrt()
}

/// Band projection assembled from the profile values, mode by mode.
fn band(fam: &LpFamily, f: &SpectralField, j: i32) -> SpectralField {
    f.map_modes(|k1, k2, c| c * fam.band_value(j, radius(k1, k2)))
}

fn low_pass(fam: &LpFamily, f: &SpectralField, j: i32) -> SpectralField {
    if j < -1 {
        return SpectralField::zeros(f.grid());
    }
    f.map_modes(|k1, k2, c| c * fam.partial_value(j, radius(k1, k2)))
}

/// `sum_i a_i d_i b`, evaluated in physical space and dealiased.
fn transport(a: [&SpectralField; 2], b: &SpectralField) -> SpectralField {
    let grad = |f: &SpectralField, axis: usize| {
        f.map_modes(|k1, k2, c| c * Complex64::new(0.0, if axis == 0 { k1 } else { k2 } as f64))
    };
    let mut out = a[0].product(&grad(b, 0));
    out += &a[1].product(&grad(b, 1));
    out
}

fn lin(a: f64, f: &SpectralField, b: f64, g: &SpectralField) -> SpectralField {
    let mut out = f.scaled(a);
    out.axpy(b, g);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bony_pieces_sum_to_the_product(seed in 0u64..10_000) {
        let fam = family(128);
        let f = smooth(128, 2.0, 42.0, seed);
        let g = smooth(128, 2.0, 42.0, seed + 50_000);
        let split = bony_decompose(&f, &g, &fam);
        prop_assert!(split.sum().max_coeff_diff(&f.product(&g)) <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn commutator_matches_independent_assembly(seed in 0u64..10_000) {
        let fam = family(64);
        let u = velocity(64, 21.0, seed);
        let rho = smooth(64, 2.0, 21.0, seed + 1);
        for j in fam.band_range() {
            let low = [&low_pass(&fam, &u.u1, j - 2), &low_pass(&fam, &u.u2, j - 2)];
            let mut expected = band(&fam, &transport([&u.u1, &u.u2], &rho), j);
            expected -= &transport(low, &band(&fam, &rho, j));
            prop_assert!(commutator_rj(&u, &rho, j, &fam).max_coeff_diff(&expected) <= 1e-12);
        }
    }

    #[test]
    fn commutator_is_bilinear(seed in 0u64..10_000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let fam = family(32);
        let u = velocity(32, 10.0, seed);
        let v = velocity(32, 10.0, seed + 1);
        let rho = smooth(32, 2.0, 10.0, seed + 2);
        let sigma = smooth(32, 2.0, 10.0, seed + 3);
        let combo = VelocityField { u1: lin(a, &u.u1, b, &v.u1), u2: lin(a, &u.u2, b, &v.u2) };
        for j in fam.band_range() {
            let lhs = commutator_rj(&combo, &rho, j, &fam);
            let mut rhs = commutator_rj(&u, &rho, j, &fam).scaled(a);
            rhs += &commutator_rj(&v, &rho, j, &fam).scaled(b);
            prop_assert!(lhs.max_coeff_diff(&rhs) <= 1e-12);

            let lhs = commutator_rj(&u, &lin(a, &rho, b, &sigma), j, &fam);
            let mut rhs = commutator_rj(&u, &rho, j, &fam).scaled(a);
            rhs += &commutator_rj(&u, &sigma, j, &fam).scaled(b);
            prop_assert!(lhs.max_coeff_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn constant_velocity_commutes_with_every_band(seed in 0u64..10_000, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0) {
        let fam = family(64);
        let u = VelocityField::uniform(fam.grid(), [c1, c2]);
        let rho = smooth(64, 2.0, 21.0, seed);
        for r in commutator_sweep(&u, &rho, &fam) {
            prop_assert_eq!(r.lhs, 0.0);
            prop_assert!(!r.violation);
        }
    }

    #[test]
    fn bound_ratios_are_finite_and_nonnegative(seed in 0u64..10_000) {
        let fam = family(64);
        let u = velocity(64, 21.0, seed);
        let rho = smooth(64, 2.0, 21.0, seed + 1);
        for r in commutator_sweep(&u, &rho, &fam) {
            prop_assert!(r.lhs >= 0.0 && r.rhs >= 0.0 && r.ratio.is_finite());
        }
        let rem = remainder_bound_ratio(&u, &rho, &fam);
        prop_assert!(rem.lhs >= 0.0 && rem.rhs > 0.0 && rem.ratio.is_finite());
    }
}
