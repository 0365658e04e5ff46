mod common;

use boussinesq_core::harness::{
    approximation_experiment, band_decay_rate, flow_composition_check, log_upsilon, osgood_integrate,
    read_records_csv, run_checks_streaming, uniqueness_experiment, write_records_csv, CheckContext, CheckId,
    Exponents, OsgoodProblem, PerturbationSpec, PerturbedField,
};
use boussinesq_core::lp::{GammaSpec, LpFamily};
use boussinesq_core::solver::{simulate, SolverConfig};
use boussinesq_core::spectral::SpectralField;
use common::{family, grid, smooth};
use proptest::prelude::*;

fn config(kappa: f64, dt: f64, t_end: f64, stride: usize) -> SolverConfig {
    SolverConfig { kappa, dt, t_end, stride, ..SolverConfig::default() }
}

fn context(fam: LpFamily, cfg: SolverConfig) -> CheckContext {
    CheckContext::new(fam, GammaSpec::log(), Exponents::default(), cfg, 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn osgood_solution_grows_with_time_and_initial_gap(
        exp in 4.0f64..40.0,
        c in 0.1f64..5.0,
        name in prop::sample::select(vec!["log", "ramp", "sqrtlog"]),
    ) {
        let delta = 2f64.powf(-exp);
        let modulus = GammaSpec::catalog(name).unwrap();
        let small = osgood_integrate(&OsgoodProblem::new(modulus.clone(), c, delta, 1.0), 0.05).unwrap();
        let large = osgood_integrate(&OsgoodProblem::new(modulus, c, 2.0 * delta, 1.0), 0.05).unwrap();
        prop_assert!(small.eta.windows(2).all(|w| w[1] >= w[0]));
        for (a, b) in small.eta.iter().zip(&large.eta) {
            prop_assert!(b >= a);
        }
    }

    #[test]
    fn upsilon_grows_with_time_and_inverse_diffusivity(
        kappa in 0.01f64..2.0,
        t in 0.0f64..1.0,
        dt in 0.0f64..0.5,
        n1 in 1e-6f64..1.0,
        mass in 0.0f64..1e-3,
        n2 in 0.0f64..10.0,
    ) {
        let base = log_upsilon(kappa, t, n1, mass, n2);
        prop_assert!(log_upsilon(kappa, t + dt, n1, mass, n2) >= base);
        prop_assert!(log_upsilon(kappa * 0.5, t, n1, mass, n2) >= base);
    }
}

#[test]
fn theta_is_nondecreasing_along_a_run() {
    let fam = family(32);
    let ctx = context(fam, config(0.1, 2e-3, 0.2, 2));
    let omega = smooth(32, 3.0, 6.0, 1).scaled(0.5);
    let rho = smooth(32, 2.0, 10.0, 2).scaled(0.01);
    let (records, _) = run_checks_streaming(&omega, &rho, &[CheckId::ThetaUpsilon], &ctx).unwrap();
    let lhs: Vec<f64> = records[0].points.iter().map(|p| p.lhs).collect();
    assert!(lhs.windows(2).all(|w| w[1] >= w[0]));
    assert!(records[0].is_well_formed());
}

#[test]
fn zero_perturbation_gives_identical_twins() {
    let fam = family(32);
    let omega = smooth(32, 3.0, 6.0, 1).scaled(0.5);
    let rho = smooth(32, 2.0, 10.0, 2).scaled(0.01);
    let spec = PerturbationSpec { field: PerturbedField::Omega, band: 2, size: 0.0 };
    let res = uniqueness_experiment(&omega, &rho, &spec, &config(0.1, 2e-3, 0.1, 5), &fam, &GammaSpec::log()).unwrap();
    assert!(res.f_series.iter().all(|f| *f == 0.0));
    assert_eq!(res.delta_prime, 0.0);
}

#[test]
fn smaller_perturbations_give_smaller_gaps() {
    let fam = family(32);
    let omega = smooth(32, 3.0, 6.0, 1).scaled(0.5);
    let rho = smooth(32, 2.0, 10.0, 2).scaled(0.01);
    let run = |size: f64| {
        let spec = PerturbationSpec { field: PerturbedField::Rho, band: 1, size };
        uniqueness_experiment(&omega, &rho, &spec, &config(0.1, 2e-3, 0.1, 5), &fam, &GammaSpec::log()).unwrap()
    };
    let (big, small) = (run(1e-4), run(5e-5));
    assert!((big.delta_prime - big.band_sum[0]).abs() <= 1e-15);
    for (a, b) in small.f_series.iter().zip(&big.f_series).skip(1) {
        assert!(a < b);
    }
}

#[test]
fn composition_ratio_is_translation_invariant() {
    let g = grid(64);
    let fam = family(64);
    let mut cfg = config(0.1, 1e-2, 0.5, 1);
    cfg.mean_flow = [0.7, -0.3];
    let traj = simulate(&SpectralField::zeros(g), &SpectralField::zeros(g), &cfg).unwrap();
    let ctx = context(fam, cfg);
    let f = smooth(64, 2.0, 12.0, 4);
    let pairs: Vec<(f64, f64)> = [0.0, 0.1, 0.2, 0.3, 0.5].iter().map(|t| (0.0, *t)).collect();
    let record = flow_composition_check(&traj, &f, &ctx, &pairs).unwrap();
    let first = record.points[0].ratio;
    assert!(first <= 1.0 + 1e-12);
    for p in &record.points {
        assert!((p.ratio - first).abs() <= 1e-3 * first, "ratio {} vs {first}", p.ratio);
    }
}

#[test]
fn heat_band_decay_rate_lies_in_the_dyadic_bracket() {
    let fam = family(64);
    let kappa = 0.1;
    let mut cfg = config(kappa, 1e-3, 0.5, 10);
    cfg.buoyancy = false;
    let rho = smooth(64, 1.0, 21.0, 8);
    let traj = simulate(&SpectralField::zeros(fam.grid()), &rho, &cfg).unwrap();
    for j in 0..=3 {
        let rate = band_decay_rate(&traj, &fam, j).unwrap();
        let (lo, hi) = (kappa * 4f64.powi(j - 1), kappa * 4f64.powi(j + 1));
        assert!(rate >= lo && rate <= hi, "band {j}: rate {rate} outside [{lo}, {hi}]");
    }
}

#[test]
fn band_limited_density_has_no_truncation_gap() {
    let fam = family(64);
    let omega = smooth(64, 3.0, 6.0, 1).scaled(0.3);
    // Everything below radius 1 sits in the low block and band 0.
    let rho = SpectralField::wave(fam.grid(), 1, 0, 0.01, 0.0).unwrap();
    let table = approximation_experiment(&omega, &rho, &[2, 3, 4], &config(0.1, 2e-3, 0.05, 5), &fam, &GammaSpec::log())
        .unwrap();
    assert!(table.rows.iter().all(|r| r.iota == 0.0));
    assert!(table.slope.is_none());
    assert!(approximation_experiment(&omega, &rho, &[2, 3], &config(0.1, 2e-3, 0.05, 5), &fam, &GammaSpec::log())
        .is_err());
}

#[test]
fn streamed_records_survive_a_csv_round_trip() {
    let fam = family(32);
    let ctx = context(fam, config(0.1, 2e-3, 0.1, 2));
    let omega = smooth(32, 3.0, 6.0, 1).scaled(0.5);
    let rho = smooth(32, 2.0, 10.0, 2).scaled(0.01);
    let ids = [CheckId::EnergyIdentity, CheckId::BernsteinChain, CheckId::Commutator];
    let (records, _) = run_checks_streaming(&omega, &rho, &ids, &ctx).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    write_records_csv(&path, &records).unwrap();
    let rows = read_records_csv(&path).unwrap();
    assert_eq!(rows.len(), records.iter().map(|r| r.points.len()).sum::<usize>());
    for (row, point) in rows.iter().zip(records.iter().flat_map(|r| &r.points)) {
        assert_eq!(row.t, point.t);
        assert_eq!(row.lhs, point.lhs);
        assert_eq!(row.rhs, point.rhs);
        assert!(row.lhs >= 0.0 && row.rhs >= 0.0);
        assert_eq!(row.seed, 0);
    }
}
