use fnls::evolution::*;
use fnls::spectral::{apply_semigroup, DispersionParams, SpectralField, TorusGrid};
use fnls::Error;
use num_complex::Complex64;

fn config(eps: f64, kind: NonlinearityKind, mu: f64, n: usize, dt: f64, t: f64) -> SimulationConfig {
    SimulationConfig::new(
        DispersionParams::real(eps),
        NonlinearitySpec::new(kind, mu).unwrap(),
        TorusGrid::new(n).unwrap(),
        dt,
        t,
        Integrator::IntegratingFactor,
    )
    .unwrap()
}

#[test]
fn mass_and_energy_conservation() {
    let g = TorusGrid::new(256).unwrap();
    let u0 = smooth_random_datum(g, 17, 1.0);
    for kind in [NonlinearityKind::N1, NonlinearityKind::N2, NonlinearityKind::N3] {
        for eps in [0.5, 1.0, 2.0] {
            let cfg = config(eps, kind, -1.0, 256, 1e-3, 1.0).with_save_every(50);
            let traj = simulate(&u0, &cfg).unwrap();
            assert!(traj.divergence.is_none());
            let dm = traj.relative_mass_drift();
            let de = traj.relative_energy_drift().unwrap();
            assert!(dm <= 1e-8, "{kind:?} ε={eps}: mass drift {dm:e}");
            assert!(de <= 1e-6, "{kind:?} ε={eps}: energy drift {de:e}");
        }
    }
}

#[test]
fn linear_flow_matches_semigroup() {
    let g = TorusGrid::new(64).unwrap();
    let u0 = smooth_random_datum(g, 3, 1.0);
    let p = DispersionParams::from_eps2(Complex64::new(0.4, -0.01));
    let cfg = SimulationConfig::new(p, NonlinearitySpec::disabled(NonlinearityKind::N2), g, 0.01, 0.5, Integrator::IntegratingFactor)
        .unwrap();
    let traj = simulate(&u0, &cfg).unwrap();
    let exact = apply_semigroup(&u0, 0.5, &p).unwrap();
    assert!(traj.final_state().distance(&exact, 0.0) < 1e-12);
}

#[test]
fn pure_frequency_against_closed_form() {
    let g = TorusGrid::new(64).unwrap();
    let (k, s) = (0.5, 1.0);
    for eps in [0.5, 1.0] {
        let p = DispersionParams::real(eps);
        for n in 0..=8i64 {
            let cfg = config(eps, NonlinearityKind::N1, -1.0, 64, 1e-3, 1.0).with_save_every(100);
            let u0 = exact_pure_frequency(g, n, k, s, &p, 0.0).unwrap();
            let traj = simulate(&u0, &cfg).unwrap();
            let err = traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(&t, u)| u.distance(&exact_pure_frequency(g, n, k, s, &p, t).unwrap(), s))
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "ε={eps} n={n}: {err:e}");
        }
    }
}

#[test]
fn blowup_pure_frequency_against_closed_form() {
    let g = TorusGrid::new(32).unwrap();
    let p = DispersionParams::from_eps2(Complex64::new(0.5, 0.01));
    let cfg = SimulationConfig::new(
        p,
        NonlinearitySpec::new(NonlinearityKind::N1, -1.0).unwrap(),
        g,
        1e-3,
        0.5,
        Integrator::IntegratingFactor,
    )
    .unwrap();
    let n = 3;
    let u0 = exact_pure_frequency(g, n, 0.6, 0.0, &p, 0.0).unwrap();
    let traj = simulate(&u0, &cfg).unwrap();
    let exact = exact_pure_frequency(g, n, 0.6, 0.0, &p, 0.5).unwrap();
    // round-off in the other modes grows like e^{βtk⁴}; only the excited
    // mode is meaningful
    let rel = (traj.final_state().coeff(n) - exact.coeff(n)).norm() / exact.coeff(n).norm();
    assert!(rel < 1e-12, "{rel:e}");
}

#[test]
fn richardson_fourth_order() {
    let g = TorusGrid::new(64).unwrap();
    let u0 = smooth_random_datum(g, 5, 1.0);
    // small ε keeps dt·w(k) moderate on the populated band, so the
    // asymptotic regime starts at dt ≈ 10⁻²
    let run = |dt: f64| simulate(&u0, &config(0.25, NonlinearityKind::N2, 1.0, 64, dt, 0.5)).unwrap().final_state().clone();
    let reference = run(1e-5);
    let errs: Vec<f64> = [0.01, 0.005, 0.0025].iter().map(|&dt| run(dt).distance(&reference, 0.0)).collect();
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((13.0..19.0).contains(&ratio), "error ratio {ratio} ({errs:?})");
    }
}

#[test]
fn gauge_invariance() {
    let g = TorusGrid::new(128).unwrap();
    let u0 = smooth_random_datum(g, 8, 1.0);
    let phase = Complex64::from_polar(1.0, 0.83);
    for kind in [NonlinearityKind::N1, NonlinearityKind::N3] {
        let cfg = config(0.7, kind, 1.0, 128, 1e-3, 0.2);
        let a = simulate(&u0, &cfg).unwrap();
        let b = simulate(&u0.scale(phase), &cfg).unwrap();
        let d = a.final_state().scale(phase).distance(b.final_state(), 0.0);
        assert!(d < 1e-13, "{kind:?}: {d:e}");
    }
}

#[test]
fn time_reversal() {
    let g = TorusGrid::new(128).unwrap();
    let u0 = smooth_random_datum(g, 11, 1.0);
    let cfg = config(1.0, NonlinearityKind::N1, -1.0, 128, 1e-3, 1.0);
    let forward = simulate(&u0, &cfg).unwrap();
    let back = Stepper::new(&cfg, -1e-3).unwrap();
    let mut u = forward.final_state().clone();
    for _ in 0..1000 {
        u = back.step(&u).unwrap();
    }
    let mut projected = u0.clone();
    projected.truncate(DealiasRatio::for_kind(NonlinearityKind::N1).cutoff(g));
    assert!(u.distance(&projected, 0.0) < 1e-7);
}

#[test]
fn backward_steps_rejected_off_the_dispersive_regime() {
    let g = TorusGrid::new(16).unwrap();
    let p = DispersionParams::from_eps2(Complex64::new(1.0, -0.1));
    let cfg = SimulationConfig::new(p, NonlinearitySpec::new(NonlinearityKind::N2, 1.0).unwrap(), g, 0.01, 1.0, Integrator::IntegratingFactor)
        .unwrap();
    let u = smooth_random_datum(g, 1, 0.1);
    assert!(matches!(step_integrating_factor(&u, -0.01, &cfg), Err(Error::Regime(_))));
    assert!(step_integrating_factor(&u, 0.01, &cfg).is_ok());
}

#[test]
fn blowup_regime_reports_divergence() {
    let g = TorusGrid::new(64).unwrap();
    let p = DispersionParams::from_eps2(Complex64::new(1.0, 0.5));
    let cfg = SimulationConfig::new(p, NonlinearitySpec::new(NonlinearityKind::N2, 1.0).unwrap(), g, 1e-3, 1.0, Integrator::IntegratingFactor)
        .unwrap();
    let traj = simulate(&smooth_random_datum(g, 2, 1.0), &cfg).unwrap();
    let div = traj.divergence.expect("growth e^{βtk⁴} must trip the monitor");
    assert!(div.time < 1.0 && (div.sup > DIVERGENCE_THRESHOLD || !div.sup.is_finite()));
    assert!(traj.relative_energy_drift().is_none());
}

#[test]
fn picard_zero_datum() {
    let g = TorusGrid::new(32).unwrap();
    let cfg = config(1.0, NonlinearityKind::N1, -1.0, 32, 0.01, 0.1);
    let traj = picard_iterate(&SpectralField::zeros(g), &cfg, 1e-12, 10).unwrap();
    let c = traj.contraction.unwrap();
    assert_eq!(c.iterations, 1);
    assert!(traj.states.iter().all(|u| u.sup_coeff() == 0.0));
}

#[test]
fn picard_agrees_with_integrating_factor() {
    let g = TorusGrid::new(64).unwrap();
    let u0 = smooth_random_datum(g, 21, 1e-3);
    for kind in [NonlinearityKind::N1, NonlinearityKind::N2] {
        let cfg = config(1.0, kind, 1.0, 64, 1e-3, 0.1);
        let a = simulate(&u0, &cfg).unwrap();
        let b = picard_iterate(&u0, &cfg, 1e-14, 50).unwrap();
        assert!(b.contraction.unwrap().ratio < 1.0);
        let d = a.sup_distance(&b, 1.0).unwrap();
        assert!(d < 1e-7, "{kind:?}: {d:e}");
    }
}

#[test]
fn picard_cross_integrator_on_unit_data() {
    let g = TorusGrid::new(64).unwrap();
    let u0 = smooth_random_datum(g, 22, 1.0);
    let cfg = config(0.5, NonlinearityKind::N2, -1.0, 64, 1e-3, 1.0);
    let b = picard_with_auto_horizon(&u0, &cfg, 1e-12, 100).unwrap();
    let c = b.contraction.unwrap();
    assert!(c.ratio < 0.9);
    let cfg_if = cfg.clone().with_horizon(c.horizon).unwrap();
    let a = simulate(&u0, &cfg_if).unwrap();
    let d = a.sup_distance(&b, 1.0).unwrap();
    assert!(d < 1e-6, "{d:e} at T={}", c.horizon);
}

#[test]
fn picard_pure_frequency_phase() {
    let g = TorusGrid::new(32).unwrap();
    let p = DispersionParams::real(1.0);
    let cfg = config(1.0, NonlinearityKind::N1, -1.0, 32, 1e-3, 0.1);
    let u0 = exact_pure_frequency(g, 2, 0.5, 0.0, &p, 0.0).unwrap();
    let traj = picard_iterate(&u0, &cfg, 1e-13, 50).unwrap();
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let e = exact_pure_frequency(g, 2, 0.5, 0.0, &p, *t).unwrap();
        assert!(u.distance(&e, 0.0) < 1e-9);
    }
}

#[test]
fn picard_rejects_off_dispersive_regime() {
    let g = TorusGrid::new(32).unwrap();
    let p = DispersionParams::from_eps2(Complex64::new(1.0, -0.2));
    let cfg = SimulationConfig::new(p, NonlinearitySpec::new(NonlinearityKind::N2, 1.0).unwrap(), g, 0.01, 0.1, Integrator::PicardDuhamel)
        .unwrap();
    assert!(matches!(picard_iterate(&SpectralField::zeros(g), &cfg, 1e-10, 5), Err(Error::Regime(_))));
}

#[test]
fn picard_reports_non_contraction() {
    let g = TorusGrid::new(64).unwrap();
    let u0 = smooth_random_datum(g, 2, 6.0);
    let cfg = config(0.5, NonlinearityKind::N3, 1.0, 64, 1e-2, 1.0);
    match picard_iterate(&u0, &cfg, 1e-12, 30) {
        Err(Error::NonContractive { ratio, .. }) => assert!(ratio > 0.9 || !ratio.is_finite()),
        other => panic!("expected a non-contraction report, got {:?}", other.map(|t| t.contraction)),
    }
}

#[test]
fn config_invariants() {
    let g = TorusGrid::new(32).unwrap();
    let spec = NonlinearitySpec::new(NonlinearityKind::N2, 1.0).unwrap();
    let p = DispersionParams::real(1.0);
    assert!(SimulationConfig::new(p, spec, g, 0.2, 0.1, Integrator::IntegratingFactor).is_err());
    assert!(SimulationConfig::new(p, spec, g, 0.0, 0.1, Integrator::IntegratingFactor).is_err());
    let mut cfg = SimulationConfig::new(p, spec, g, 0.01, 0.1, Integrator::IntegratingFactor).unwrap();
    cfg.dealias = DealiasRatio { num: 1, den: 2 };
    assert!(cfg.validate().is_err());
    let res = DispersionParams::from_epsilon(Complex64::new(0.0, 0.5));
    let n1 = NonlinearitySpec::new(NonlinearityKind::N1, 1.0).unwrap();
    assert!(matches!(
        SimulationConfig::new(res, n1, g, 0.01, 0.1, Integrator::IntegratingFactor),
        Err(Error::SingularOperator(_))
    ));
}

#[test]
fn trajectory_csv_columns() {
    let g = TorusGrid::new(32).unwrap();
    let cfg = config(1.0, NonlinearityKind::N2, 1.0, 32, 0.01, 0.05).with_hs_exponents(vec![0.0, 1.5]);
    let traj = simulate(&smooth_random_datum(g, 1, 0.5), &cfg).unwrap();
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "time,mass,energy,hs_0,hs_1.5");
    assert_eq!(lines.count(), traj.times.len());
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
}
