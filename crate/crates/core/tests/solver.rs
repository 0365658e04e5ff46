mod common;

use boussinesq_core::lp::LpFamily;
use boussinesq_core::solver::{
    forward_flow_map, inverse_flow_map, inverse_flow_map_with_steps, simulate, transport_points,
    truncate_initial_data, SolverConfig,
};
use boussinesq_core::spectral::{lp_norm, LebesgueExponent, SpectralField};
use common::{family, grid, smooth};
use proptest::prelude::*;

fn config(kappa: f64, dt: f64, t_end: f64, stride: usize) -> SolverConfig {
    SolverConfig { kappa, dt, t_end, stride, ..SolverConfig::default() }
}

fn vorticity(n: usize, seed: u64) -> SpectralField {
    smooth(n, 3.0, 6.0, seed).scaled(0.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn density_mean_is_conserved(seed in 0u64..1000, mean in -2.0f64..2.0) {
        let mut rho = smooth(32, 2.0, 10.0, seed + 1);
        rho.axpy(1.0, &SpectralField::constant(grid(32), mean));
        let traj = simulate(&vorticity(32, seed), &rho, &config(0.1, 2e-3, 0.2, 10)).unwrap();
        for s in &traj.states {
            prop_assert!((s.rho.mean() - mean).abs() <= 1e-13);
            prop_assert!(s.omega.mean().abs() <= 1e-15);
        }
    }

    #[test]
    fn sample_times_increase_from_zero(seed in 0u64..1000, stride in 1usize..10) {
        let traj = simulate(&vorticity(32, seed), &smooth(32, 2.0, 10.0, seed), &config(0.1, 5e-3, 0.1, stride)).unwrap();
        let times = traj.times();
        prop_assert_eq!(times[0], 0.0);
        prop_assert!(times.windows(2).all(|w| w[1] > w[0]));
        prop_assert!((times.last().unwrap() - 0.1).abs() < 1e-12);
    }
}

#[test]
fn heun_scheme_converges_at_second_order() {
    let omega = vorticity(32, 3);
    let rho = smooth(32, 2.0, 10.0, 4).scaled(0.5);
    let run = |dt: f64| {
        let traj = simulate(&omega, &rho, &config(0.05, dt, 0.2, 1_000_000)).unwrap();
        traj.last().clone()
    };
    let reference = run(0.2 / 640.0);
    let errs: Vec<f64> = [0.2 / 20.0, 0.2 / 40.0, 0.2 / 80.0]
        .iter()
        .map(|&dt| {
            let s = run(dt);
            s.omega.max_coeff_diff(&reference.omega).max(s.rho.max_coeff_diff(&reference.rho))
        })
        .collect();
    for w in errs.windows(2) {
        let factor = w[0] / w[1];
        assert!((3.4..=4.6).contains(&factor), "error ratio {factor} from {errs:?}");
    }
}

#[test]
fn flow_map_steps_converge_to_a_finer_oracle() {
    let omega = SpectralField::from_fn(grid(64), |x, y| 2.0 * x.sin() * y.sin()).scaled(0.5);
    let rho = SpectralField::zeros(grid(64));
    let traj = simulate(&omega, &rho, &config(0.1, 1e-3, 0.5, 1)).unwrap();
    let coarse = inverse_flow_map_with_steps(&traj, 0.0, 0.5, 100).unwrap();
    let fine = inverse_flow_map_with_steps(&traj, 0.0, 0.5, 1000).unwrap();
    let err = coarse
        .points()
        .iter()
        .zip(fine.points())
        .map(|(a, b)| (a[0] - b[0]).abs().max((a[1] - b[1]).abs()))
        .fold(0.0, f64::max);
    assert!(err <= 1e-6, "flow map step error {err}");
}

#[test]
fn flow_maps_preserve_volume_and_invert_each_other() {
    let traj = simulate(&vorticity(128, 9), &SpectralField::zeros(grid(128)), &config(0.1, 1e-3, 0.3, 2)).unwrap();
    let back = inverse_flow_map(&traj, 0.0, 0.3).unwrap();
    for det in back.jacobian_determinants() {
        assert!((det - 1.0).abs() <= 0.02, "jacobian {det}");
    }
    let forward = forward_flow_map(&traj, 0.0, 0.3).unwrap();
    let round = transport_points(&traj, forward.points(), 0.3, 0.0, 600).unwrap();
    let g = traj.grid();
    let err = (0..g.points())
        .map(|i| {
            let (x1, x2) = g.coords(i);
            (round[i][0] - x1).abs().max((round[i][1] - x2).abs())
        })
        .fold(0.0, f64::max);
    assert!(err <= 1e-4, "round trip error {err}");
}

#[test]
fn pure_euler_conserves_vorticity_norms() {
    let omega = vorticity(64, 5);
    let mut cfg = config(0.0, 1e-3, 1.0, 50);
    cfg.buoyancy = false;
    let traj = simulate(&omega, &SpectralField::zeros(grid(64)), &cfg).unwrap();
    for p in [1.5, 4.0] {
        let p = LebesgueExponent::new(p).unwrap();
        let start = lp_norm(&omega, p);
        for s in &traj.states {
            let rel = (lp_norm(&s.omega, p) - start).abs() / start;
            assert!(rel <= 1e-5, "relative drift {rel}");
        }
    }
}

#[test]
fn truncated_data_is_the_partial_sum() {
    let fam: LpFamily = family(64);
    let f = smooth(64, 1.5, 21.0, 2);
    for m in -1..=fam.j_max() {
        let truncated = truncate_initial_data(&f, m, &fam).unwrap();
        let g = fam.grid();
        for idx in 0..g.points() {
            let (k1, k2) = g.mode(idx);
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            let expected = f.coeff(k1, k2) * fam.partial_value(m, r);
            assert!((truncated.coeff(k1, k2) - expected).norm() <= 1e-15);
        }
        for p in [1.5, 2.0, 4.0, f64::INFINITY] {
            let p = LebesgueExponent::new(p).unwrap();
            assert!(lp_norm(&truncated, p) <= 1.5 * lp_norm(&f, p));
        }
    }
    assert_eq!(truncate_initial_data(&f, fam.j_max(), &fam).unwrap().max_coeff_diff(&f), 0.0);
    assert!(truncate_initial_data(&f, -2, &fam).is_err());
    assert!(truncate_initial_data(&f, fam.j_max() + 1, &fam).is_err());
}
