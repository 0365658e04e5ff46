mod common;

use boussinesq_core::spectral::{
    advect, biot_savart, lp_norm, Derivative, LebesgueExponent, SpectralField, VelocityField,
};
use boussinesq_core::spectral::spectral_derivative;
use common::{grid, smooth};
use num_complex::Complex64;
use proptest::prelude::*;

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Brute-force `sum_{p+q=k} u_i(p) (i q_i) f(q)` over all mode pairs.
fn convolution_oracle(u: &VelocityField, f: &SpectralField) -> SpectralField {
    let g = f.grid();
    let modes: Vec<(i64, i64)> = (0..g.points()).map(|i| g.mode(i)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); g.points()];
    for &(p1, p2) in &modes {
        let (a, b) = (u.u1.coeff(p1, p2), u.u2.coeff(p1, p2));
        if a.norm() == 0.0 && b.norm() == 0.0 {
            continue;
        }
        for &(q1, q2) in &modes {
            let c = f.coeff(q1, q2);
            if c.norm() == 0.0 {
                continue;
            }
            let grad = Complex64::new(0.0, 1.0) * c;
            let term = a * grad * q1 as f64 + b * grad * q2 as f64;
            if let Some(idx) = g.index_of(p1 + q1, p2 + q2) {
                out[idx] += term;
            }
        }
    }
    SpectralField::from_coeffs(g, out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn physical_round_trip_is_exact_for_band_limited_fields(seed in 0u64..1000, beta in 1.0f64..4.0) {
        let f = smooth(64, beta, 20.0, seed);
        let x = f.to_physical();
        let back = SpectralField::from_physical(f.grid(), &x).unwrap().to_physical();
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * max_abs(&x));
    }

    #[test]
    fn biot_savart_inverts_curl_and_is_divergence_free(seed in 0u64..1000, n in prop::sample::select(vec![32usize, 64, 128])) {
        let w = smooth(n, 2.0, (n / 3) as f64, seed);
        let u = biot_savart(&w);
        prop_assert!(u.curl().max_coeff_diff(&w) <= 1e-13);
        prop_assert!(u.divergence().max_coeff() <= 1e-13);
    }

    #[test]
    fn lp_norm_is_homogeneous(seed in 0u64..1000, c in -50.0f64..50.0, p in prop::sample::select(vec![1.0, 1.5, 2.0, 4.0, f64::INFINITY])) {
        let f = smooth(32, 3.0, 10.0, seed);
        let p = LebesgueExponent::new(p).unwrap();
        let lhs = lp_norm(&f.scaled(c), p);
        let rhs = c.abs() * lp_norm(&f, p);
        prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300) * 10.0);
    }

    #[test]
    fn advect_matches_the_exact_convolution(seed in 0u64..1000) {
        // Bandwidths 4 + 4 stay inside the dealias radius 10 of a 32 grid.
        let u = biot_savart(&smooth(32, 1.0, 4.0, seed));
        let f = smooth(32, 1.0, 4.0, seed + 7);
        let fast = advect(&u, &f);
        prop_assert!(fast.max_coeff_diff(&convolution_oracle(&u, &f)) <= 1e-11);
    }

    #[test]
    fn nonlinear_products_stay_hermitian_and_dealiased(seed in 0u64..1000) {
        let g = grid(32);
        let u = biot_savart(&smooth(32, 1.0, 10.0, seed));
        let f = advect(&u, &smooth(32, 1.0, 10.0, seed + 1));
        prop_assert!(f.is_dealiased());
        let r = g.dealias_radius();
        for k1 in -r..=r {
            for k2 in -r..=r {
                let d = f.coeff(k1, k2) - f.coeff(-k1, -k2).conj();
                prop_assert!(d.norm() <= 1e-15);
            }
        }
    }
}

#[test]
fn derivative_of_a_wave_multiplies_by_its_wavenumber() {
    let f = SpectralField::wave(grid(16), 3, -2, 1.0, 0.3).unwrap();
    let d1 = spectral_derivative(&f, Derivative::X1);
    let d2 = spectral_derivative(&f, Derivative::X2);
    let expected1 = SpectralField::from_fn(grid(16), |x, y| -3.0 * (3.0 * x - 2.0 * y + 0.3).sin());
    let expected2 = SpectralField::from_fn(grid(16), |x, y| 2.0 * (3.0 * x - 2.0 * y + 0.3).sin());
    assert!(d1.max_coeff_diff(&expected1) < 1e-14);
    assert!(d2.max_coeff_diff(&expected2) < 1e-14);
}
