mod common;

use boussinesq_core::lp::{norm, GammaSpec, NormSpec, CATALOG};
use boussinesq_core::spectral::{gradient, lp_norm, lp_norm_vector, LebesgueExponent};
use common::{family, smooth};
use proptest::prelude::*;

const EXPONENTS: [f64; 4] = [1.5, 2.0, 4.0, f64::INFINITY];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bands_reconstruct_the_field(seed in 0u64..1000, n in prop::sample::select(vec![16usize, 64, 128])) {
        let fam = family(n);
        let f = smooth(n, 2.0, (n / 3) as f64, seed);
        prop_assert!(fam.decompose(&f).sum().max_coeff_diff(&f) <= 1e-12);
    }

    #[test]
    fn bands_are_supported_on_their_annuli(seed in 0u64..1000) {
        let fam = family(64);
        let g = fam.grid();
        let f = smooth(64, 1.0, 21.0, seed);
        for j in fam.band_range() {
            let band = fam.delta(&f, j);
            for idx in 0..g.points() {
                let (k1, k2) = g.mode(idx);
                let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
                let inside = if j < 0 { r <= 1.0 } else { r >= 2f64.powi(j - 1) && r <= 2f64.powi(j + 1) };
                if !inside {
                    prop_assert_eq!(band.coeff(k1, k2).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn distant_bands_are_orthogonal(seed in 0u64..1000) {
        let fam = family(64);
        let f = smooth(64, 1.0, 21.0, seed);
        for j in fam.band_range() {
            for k in fam.band_range() {
                if (j - k).abs() > 1 {
                    prop_assert_eq!(fam.delta(&fam.delta(&f, k), j).max_coeff(), 0.0);
                }
            }
        }
    }

    #[test]
    fn bernstein_constants_stay_below_two_and_a_half(seed in 0u64..1000) {
        let fam = family(64);
        let f = smooth(64, 1.0, 21.0, seed);
        for j in fam.band_range() {
            let band = fam.delta(&f, j);
            if band.max_coeff() == 0.0 {
                continue;
            }
            let [g1, g2] = gradient(&band);
            for p in EXPONENTS {
                let p = LebesgueExponent::new(p).unwrap();
                let plain = lp_norm(&band, p);
                let grad = lp_norm_vector(&[&g1, &g2], p);
                prop_assert!(grad <= 2.5 * 2f64.powi(j) * plain, "direct j={} p={:?}", j, p);
                if j >= 0 {
                    prop_assert!(plain <= 2.5 * 2f64.powi(-j) * grad, "reverse j={} p={:?}", j, p);
                }
            }
        }
    }

    #[test]
    fn gamma1_norm_never_exceeds_gamma_norm(seed in 0u64..1000, name in prop::sample::select(CATALOG.to_vec())) {
        let fam = family(64);
        let gamma = GammaSpec::catalog(name).unwrap();
        let f = smooth(64, 2.0, 21.0, seed);
        let g1 = norm(&f, &NormSpec::gamma1(&gamma), &fam).value;
        let g = norm(&f, &NormSpec::gamma(&gamma), &fam).value;
        prop_assert!(g1 <= g * (1.0 + 1e-14));
    }

    #[test]
    fn linear_gamma_norm_is_controlled_by_the_sup_norm(seed in 0u64..1000, beta in 0.5f64..4.0) {
        let fam = family(64);
        let f = smooth(64, beta, 21.0, seed);
        let lin = norm(&f, &NormSpec::gamma(&GammaSpec::linear()), &fam).value;
        prop_assert!(lin <= 2.0 * lp_norm(&f, LebesgueExponent::Infinity));
    }

    #[test]
    fn catalog_growth_functions_are_normalized_and_monotone(alpha in -5.0f64..200.0, step in 0.0f64..10.0, name in prop::sample::select(CATALOG.to_vec())) {
        let gamma = GammaSpec::catalog(name).unwrap();
        let v = gamma.eval(alpha);
        prop_assert!(v >= 1.0);
        prop_assert!(gamma.eval(alpha + step) >= v);
        if alpha <= -1.0 {
            prop_assert_eq!(v, 1.0);
        } else {
            prop_assert!(gamma.eval_gamma1(alpha) >= v);
        }
    }
}

#[test]
fn band_norms_report_the_last_band() {
    for (n, j_max) in [(16, 3), (64, 5), (128, 6), (256, 7)] {
        let fam = family(n);
        assert_eq!(fam.j_max(), j_max);
        let f = smooth(n, 2.0, 4.0, 1);
        assert_eq!(norm(&f, &NormSpec::besov(0.0, 2.0, 1.0), &fam).j_max, j_max);
    }
}
