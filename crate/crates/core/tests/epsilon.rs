use fnls::epsilon::*;
use fnls::evolution::smooth_random_datum;
use fnls::rng::Stream;
use fnls::spectral::{apply_semigroup, DispersionParams, SpectralField, TorusGrid};
use fnls::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn illposedness_witness_at_large_n() {
    let p = DispersionParams::real(1.0);
    let n0 = illposedness_threshold(1.0, -0.5, 1.0, 1e-3).unwrap();
    assert!((1500..1700).contains(&n0), "n0 = {n0}");
    let w = illposedness_witness(1000, 1.0, -0.5, 1.0, &p).unwrap();
    assert!((w.phase_gap - PI).abs() < 1e-12);
    assert!(w.distance >= w.lower_bound - 1e-12);
    assert!((w.initial_distance - (w.k_n - w.k)).abs() < 1e-12);
    assert!(w.distance >= 1.0);
    for n in [n0, n0 + 1, 2 * n0, 10 * n0] {
        let w = illposedness_witness(n, 1.0, -0.5, 1.0, &p).unwrap();
        assert!(w.initial_distance <= 1e-3);
        assert!(w.distance >= 1.0 - 1e-3 && w.lower_bound >= 1.0 - 1e-3);
    }
    assert!(matches!(illposedness_witness(10, 1.0, 0.0, 1.0, &p), Err(Error::Domain(_))));
}

#[test]
fn closed_forms_solve_the_equation() {
    let mut rng = Stream::new(31, 0);
    for _ in 0..100 {
        let n = rng.int_in(-6, 6);
        let k = rng.uniform_in(0.05, 1.5);
        let s = rng.uniform_in(-1.0, 2.0);
        let eps2 = match rng.int_in(0, 2) {
            0 => Complex64::new(rng.uniform_in(0.0, 1.0), 0.0),
            1 => Complex64::new(rng.uniform_in(-0.5, 1.0), -rng.uniform_in(0.0, 0.05)),
            _ => Complex64::new(rng.uniform_in(-0.5, 1.0), rng.uniform_in(0.0, 0.02)),
        };
        let p = DispersionParams::from_eps2(eps2);
        if p.resonant_index().is_some() {
            continue;
        }
        let t = rng.uniform_in(0.05, 0.5);
        let r = pure_frequency_residual(n, k, s, &p, t).unwrap();
        assert!(r < 1e-9, "n={n} k={k} s={s} ε²={eps2} t={t}: {r}");
    }
}

#[test]
fn inflation_table() {
    let t = norm_inflation_table(0.0, 0.1, 0.5, 1.0, |n| 1.0 / n as f64, 1..=10).unwrap();
    let r5 = t.rows[4];
    assert!((r5.log_final_norm - ((0.2f64).ln() + 31.25)).abs() < 1e-12);
    assert!(t.rows.windows(2).all(|w| w[1].initial_norm < w[0].initial_norm));
    for delta in [0.1, 0.01] {
        let t = norm_inflation_table(0.0, 0.1, delta / 2.0, 1.0, |n| 1.0 / n as f64, 1..=400).unwrap();
        let w = t.witness(delta).expect("inflating row");
        assert!(w.initial_norm < delta && w.final_norm() > 1.0 / delta);
    }
    assert!(norm_inflation_table(0.0, 0.0, 0.5, 1.0, |_| 1.0, 1..3).is_err());
    let err = inflation_solver_check(0.0, 0.1, 1, 1e-3, 1.0, 0.5, 1e-3).unwrap();
    assert!(err < 1e-4, "{err}");
}

#[test]
fn symbol_gap_formula() {
    let mut rng = Stream::new(41, 0);
    let e = DispersionParams::real(0.8);
    assert_eq!(symbol_gap(3, 0.7, &e, &e), 0.0);
    for _ in 0..10_000 {
        let pick = |rng: &mut Stream| {
            DispersionParams::from_eps2(Complex64::new(rng.uniform_in(-1.0, 1.0), -rng.uniform_in(0.0, 0.01)))
        };
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let n = rng.int_in(-4, 4);
        let t = rng.uniform_in(0.0, 1.0);
        let f = symbol_gap(n, t, &a, &b);
        assert!((f - symbol_gap_direct(n, t, &a, &b)).abs() < 1e-12, "{f}");
        assert!(f <= symbol_gap_bound(n, t, 1.0, 4, &a, &b) + 1e-12);
    }
    let (a, b) = (DispersionParams::real(0.3), DispersionParams::real(0.5));
    let expect = 2.0 - 2.0 * ((0.25 - 0.09) * 0.4 * 16.0f64).cos();
    assert!((symbol_gap(2, 0.4, &a, &b) - expect).abs() < 1e-14);
}

#[test]
fn dissipative_semigroup_contracts() {
    let g = TorusGrid::new(32).unwrap();
    let mut rng = Stream::new(5, 0);
    for i in 0..20 {
        let f = SpectralField::from_fn(g, |_| rng.complex_normal());
        let th = rng.uniform_in(0.1, 1.4);
        let eps = Complex64::from_polar(rng.uniform_in(0.2, 2.0), if i % 2 == 0 { -th } else { PI - th });
        let p = DispersionParams::from_epsilon(eps);
        let t = rng.uniform_in(0.0, 2.0);
        for s in [-1.0, 0.0, 1.5] {
            assert!(apply_semigroup(&f, t, &p).unwrap().sobolev_norm(s) <= f.sobolev_norm(s) * (1.0 + 1e-14));
        }
    }
}

fn cosine_datum() -> SpectralField {
    // 0.05 cos x + 0.05
    let g = TorusGrid::new(32).unwrap();
    SpectralField::from_fn(g, |k| match k {
        0 => Complex64::new(0.1 * PI, 0.0),
        1 | -1 => Complex64::new(0.05 * PI, 0.0),
        _ => Complex64::new(0.0, 0.0),
    })
}

#[test]
fn continuity_along_a_real_sequence() {
    let exp = EpsilonExperiment {
        epsilon0: DispersionParams::real(1.0),
        sequence: (1..=12).map(|j| DispersionParams::real(1.0 + 2f64.powi(-j))).collect(),
        s: 1.0,
        n: 1,
        horizon: Horizon::Finite(1.0),
        tolerance: 1e-4,
    };
    let table = continuity_experiment(&exp, &cosine_datum(), 1e-3).unwrap();
    assert!(table.is_monotone());
    assert!(table.converges(), "{:?}", table.rows.last());
    for r in &table.rows {
        assert!(r.duhamel_defect <= 1e-6 * (1.0 + r.duhamel.iter().sum::<f64>()), "{r:?}");
    }
    let same = EpsilonExperiment { sequence: vec![DispersionParams::real(1.0)], ..exp.clone() };
    assert_eq!(continuity_experiment(&same, &cosine_datum(), 1e-3).unwrap().rows[0].distance, 0.0);
    let bad = EpsilonExperiment {
        sequence: vec![DispersionParams::from_epsilon(Complex64::new(0.0, 0.5))],
        ..exp
    };
    assert!(matches!(continuity_experiment(&bad, &cosine_datum(), 1e-3), Err(Error::SingularOperator(_))));
}

#[test]
fn large_epsilon_linear_limit() {
    let u0 = smooth_random_datum(TorusGrid::new(32).unwrap(), 3, 0.5);
    let d = large_epsilon_limit(1000.0, &u0, 1.0, 1e-3, 1.0).unwrap();
    assert!(d < 1e-3, "{d}");
}

#[test]
fn uniform_failure() {
    let rows = uniform_failure_witness(1.0, &[(100.0, 100.0), (100.0, 101.0), (400.0, 401.0), (0.1, 0.2)]);
    assert_eq!(rows[0].sup, 0.0);
    assert_eq!(rows[1].sup, 2.0);
    assert!((rows[1].first_maximizer.unwrap() - PI / 201.0).abs() < 1e-15);
    assert_eq!(rows[2].sup, 2.0);
    assert!(rows[3].sup < 2.0 && rows[3].first_maximizer.is_none());
    let err = uniform_failure_solver_check(100.0, 101.0, 1.0, 1.0, 1e-3).unwrap();
    assert!(err < 1e-8, "{err}");
}

#[test]
fn infinite_horizon_cases() {
    let eps0 = DispersionParams::real(1.0);
    let mut seq = Vec::new();
    for j in 1..=6 {
        let h = 2f64.powi(-j);
        seq.push(DispersionParams::real(1.0 + h));
        seq.push(DispersionParams::from_eps2(Complex64::new(1.0 + 0.5 * h, -h)));
        seq.push(DispersionParams::from_eps2(Complex64::new(1.0 + h, -0.25 * h)));
    }
    let r = infinite_horizon_discontinuity(&eps0, &seq, 0.3).unwrap();
    assert!((r.c1 - (1.0 - (-0.5f64).exp()) / 0.5).abs() < 1e-6, "{}", r.c1);
    assert!(r.holds());
    let cases: Vec<_> = r.rows.iter().map(|x| x.case).collect();
    assert!(cases.contains(&HorizonCase::PurePhase));
    assert!(cases.contains(&HorizonCase::DampingDominated));
    assert!(cases.contains(&HorizonCase::PhaseDominated));
    for row in &r.rows {
        match row.case {
            HorizonCase::PurePhase => assert!((row.sup - 2.0).abs() < 1e-9),
            HorizonCase::DampingDominated => assert!(row.sup >= 1.0 - (-0.3f64).exp()),
            HorizonCase::PhaseDominated => assert!(row.sup_short.unwrap() >= 1.0),
            HorizonCase::Identical => unreachable!(),
        }
    }
    let up = [DispersionParams::from_eps2(Complex64::new(1.0, 0.1))];
    assert!(infinite_horizon_discontinuity(&eps0, &up, 0.3).is_err());
}

#[test]
fn holomorphy_second_order() {
    let g = TorusGrid::new(16).unwrap();
    let u0 = SpectralField::from_fn(g, |k| if k.abs() <= 3 { Complex64::new(1.0, 0.5 * k as f64) } else { 0.0.into() });
    let mut rng = Stream::new(77, 0);
    for i in 0..20 {
        let th = rng.uniform_in(0.2, 1.3);
        let eps = Complex64::from_polar(rng.uniform_in(0.4, 1.2), if i % 2 == 0 { -th } else { PI - th });
        let o = holomorphy_order(eps, 1e-3, 0.1, 1.0, &u0, 0.0, 10).unwrap();
        assert!((3.5..=4.5).contains(&o.ratio), "ε={eps}: {o:?}");
    }
    // a stencil crossing the real axis is rejected
    assert!(holomorphy_residual(Complex64::new(1.0, -1e-4), 1e-3, 0.1, 1.0, &u0, 0.0, 4).is_err());
}

#[test]
fn holomorphy_single_mode_closed_form() {
    // F(ε) = e^{-i(ε²n⁴+n²)t}c: the stencil residual is h²F'''/3 + O(h⁴)
    let g = TorusGrid::new(16).unwrap();
    let n = 2i64;
    let u0 = SpectralField::single_mode(g, n, Complex64::new(1.0, 0.0)).unwrap();
    let eps = Complex64::new(0.7, -0.6);
    let (t, h) = (0.3, 1e-3);
    let r = holomorphy_residual(eps, h, t, t, &u0, 0.0, 1).unwrap();
    let a = Complex64::new(0.0, -((n as f64).powi(4)) * t);
    let f = (a * eps * eps - Complex64::new(0.0, (n * n) as f64 * t)).exp();
    // d³/dε³ e^{aε²} = (8a³ε³ + 12a²ε)e^{aε²}
    let f3 = (8.0 * a.powi(3) * eps.powi(3) + 12.0 * a * a * eps) * f;
    let predicted = h * h * f3.norm() / 3.0 / (2.0 * PI).sqrt();
    assert!((r - predicted).abs() < 1e-2 * predicted, "{r} vs {predicted}");
}

#[test]
fn gronwall_rate_is_uniform_on_a_ball() {
    let u0 = smooth_random_datum(TorusGrid::new(32).unwrap(), 9, 0.8);
    let centre = Complex64::from_polar(1.0, -0.4);
    let mut rates = Vec::new();
    for j in 0..8 {
        let e = centre + Complex64::from_polar(0.1, j as f64 * PI / 4.0);
        let traj = solve_n1(DispersionParams::from_epsilon(e), &u0, 1.0, 1e-3).unwrap();
        rates.push(gronwall_rate(&traj, 1.0));
    }
    let max = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(max < 1.0, "{rates:?}");
}
