use super::*;
use crate::error::Error;
use crate::field::FieldState;
use crate::grid::{div, laplacian};
use std::f64::consts::TAU;

fn worked_point() -> (MaterialPoint, [f64; 3], [f64; 3]) {
    (
        MaterialPoint::new(2.0, 0.5).unwrap(),
        [3.0, 0.0, 0.0],
        [0.2, 0.0, 0.0],
    )
}

#[test]
fn temporal_work_values_and_parity() {
    let p = ProbeCharge::at_rest(1.0);
    assert_eq!(temporal_work(&p, &[0.0; 5], 0.1, 1.0).unwrap(), 0.0);
    // T ≡ 1 over a duration of 2
    let w = temporal_work(&p, &[1.0; 21], 0.1, 1.0).unwrap();
    assert!((w + 2.0).abs() < 1e-14);
    let t: Vec<f64> = (0..11).map(|i| (0.3 * i as f64).sin() + 0.2).collect();
    let neg_t: Vec<f64> = t.iter().map(|v| -v).collect();
    let w = temporal_work(&p, &t, 0.05, 2.0).unwrap();
    assert_eq!(
        w,
        -temporal_work(&ProbeCharge::at_rest(-1.0), &t, 0.05, 2.0).unwrap()
    );
    assert_eq!(w, -temporal_work(&p, &neg_t, 0.05, 2.0).unwrap());
    assert!(w < 0.0);
    assert!(temporal_work(&p, &[], 0.1, 1.0).is_err());
    let fast = ProbeCharge {
        v: [1.0, 0.0, 0.0],
        ..p
    };
    assert!(temporal_work(&fast, &[1.0], 0.1, 1.0).is_err());
}

#[test]
fn heat_balance_worked_example() {
    let (m, j, gk) = worked_point();
    let c = 1.0;
    // curl B = grad T + 4πJ with grad T = (dT/dK) grad K
    let grad_t = gk.map(|v| m.dtdk * v);
    let curl_b = [0, 1, 2].map(|a| grad_t[a] + 4.0 * PI * j[a]);
    let h = heat_balance(j, m, gk, curl_b, [0.0; 3], c).unwrap();
    assert!((h.joule - 4.5).abs() < 1e-15);
    assert!((h.thomson - 0.3 / (8.0 * PI)).abs() < 1e-15);
    assert!((h.thomson - 0.0119366).abs() < 1e-7);
    assert!((h.curl_term + (0.3 + 36.0 * PI) / (8.0 * PI)).abs() < 1e-14);
    assert!((h.curl_term + 4.5119366).abs() < 1e-7);
    assert_eq!(h.displacement_term, 0.0);
    assert!(h.relative_residual() <= 1e-12);

    let r = heat_balance(j.map(|v| -v), m, gk, curl_b, [0.0; 3], c).unwrap();
    assert_eq!(r.joule, h.joule);
    assert_eq!(r.thomson, -h.thomson);

    let z = heat_balance([0.0; 3], m, gk, curl_b, [1.0; 3], c).unwrap();
    assert_eq!(z.scale(), 0.0);
    assert!(heat_balance(
        j,
        MaterialPoint {
            sigma: 0.0,
            dtdk: 0.5
        },
        gk,
        curl_b,
        [0.0; 3],
        c
    )
    .is_err());
}

#[test]
fn heat_balance_closes_with_displacement_current() {
    let m = MaterialPoint::new(0.7, -1.3).unwrap();
    let (j, gk, de_dt, c) = ([0.4, -1.1, 0.3], [0.05, 0.2, -0.7], [1.5, 0.2, -0.9], 2.5);
    // curl B = (1/c)∂E/∂t + grad T + (4π/c)J
    let curl_b = [0, 1, 2].map(|a| de_dt[a] / c + m.dtdk * gk[a] + 4.0 * PI / c * j[a]);
    let h = heat_balance(j, m, gk, curl_b, de_dt, c).unwrap();
    assert!(h.relative_residual() <= 1e-12, "{h:?}");
}

#[test]
fn thomson_heat_worked_example() {
    let (m, j, gk) = worked_point();
    let r = thomson_heat(j, gk, m, 1.0).unwrap();
    assert!((r.h_t + 1.0 / (16.0 * PI)).abs() < 1e-16);
    assert!((r.h_t + 0.0198944).abs() < 1e-7);
    assert!((r.dq_dt - (4.5 + 0.6 / (16.0 * PI))).abs() < 1e-14);
    assert!((r.dq_dt - 4.5119366).abs() < 1e-7);
    assert_eq!(thomson_heat([0.0; 3], gk, m, 1.0).unwrap().dq_dt, 0.0);
    assert_eq!(
        thomson_heat([9.0, 1.0, 0.0], gk, m, 1.0).unwrap().h_t,
        r.h_t
    );
    let h = heat_balance(j, m, gk, [0.0; 3], [0.0; 3], 1.0).unwrap();
    assert!((r.dq_dt - (h.joule + h.thomson)).abs() <= 1e-15 * r.dq_dt);
}

fn scenario(sigma: f64, dtdk: f64) -> ThomsonScenario {
    let (_, j, gk) = worked_point();
    ThomsonScenario {
        current: j,
        grad_k: gk,
        curl_b: [0.0, 1.7, -0.4],
        material: MaterialPoint::new(sigma, dtdk).unwrap(),
        c: 1.0,
    }
}

#[test]
fn thomson_reversal_recovers_specific_heat() {
    let out = thomson_reversal_experiment(&scenario(2.0, 0.5)).unwrap();
    let exact = -1.0 / (16.0 * PI);
    assert!((out.h_t_estimate / exact - 1.0).abs() <= 1e-12);
    assert_eq!(out.h_t_formula, exact);

    assert_eq!(
        thomson_reversal_experiment(&scenario(2.0, 0.0))
            .unwrap()
            .h_t_estimate,
        0.0
    );
    let doubled = thomson_reversal_experiment(&scenario(4.0, 0.5)).unwrap();
    assert!((doubled.h_t_estimate / out.h_t_estimate - 0.5).abs() < 1e-12);

    let mut blind = scenario(2.0, 0.5);
    blind.grad_k = [0.0, 1.0, 0.0];
    assert!(thomson_reversal_experiment(&blind).is_err());

    // a curl component along J is projected away
    let mut along = scenario(2.0, 0.5);
    along.curl_b = [5.0, 1.7, -0.4];
    let o = thomson_reversal_experiment(&along).unwrap();
    assert!((o.h_t_estimate / exact - 1.0).abs() <= 1e-12);
}

fn profile(jump: f64) -> SeebeckProfile {
    SeebeckProfile {
        base: 1.0,
        jump,
        width: 1.0,
        cells: 400,
        length: 40.0,
    }
}

#[test]
fn seebeck_kick() {
    let r = seebeck_jump(&profile(2.0), 0.1, 1.0).unwrap();
    assert!((r.kick - 0.2).abs() < 1e-12, "{}", r.kick);
    assert_eq!(seebeck_jump(&profile(0.0), 0.1, 1.0).unwrap().kick, 0.0);
    let back = seebeck_jump(&profile(2.0), -0.1, 1.0).unwrap();
    assert_eq!(back.kick, -r.kick);
    // E_T follows (v/c)(T − T(−∞))
    for (e, t) in r.e_t.iter().zip(&r.temporal) {
        assert!((e - 0.1 * (t - r.temporal[0])).abs() < 1e-12);
    }
    assert!(seebeck_jump(&profile(2.0), 1.0, 1.0).is_err());
    let mut narrow = profile(2.0);
    narrow.width = 0.3;
    assert!(seebeck_jump(&narrow, 0.1, 1.0).is_err());
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn heated_ball_matches_quadrature() {
    let ball = heated_ball_field(1.0, 0.6, 2.0, 1.0).unwrap();
    assert!((ball.field_at(0.5) - 0.2).abs() < 1e-15);
    assert_eq!(ball.field_at(0.0), 0.0);
    assert_eq!(
        heated_ball_field(1.0, 0.6, 0.0, 1.0).unwrap().field_at(0.7),
        0.0
    );
    assert!(heated_ball_field(0.0, 0.6, 2.0, 1.0).is_err());
    // Gauss: E(r) r² = ∫₀ʳ s² ρ(s) ds with the source cut off at R
    let rho = |s: f64| if s <= 1.0 { ball.source_density() } else { 0.0 };
    for r in [0.25_f64, 0.5, 0.9, 1.0, 2.0, 3.5] {
        let n = 2000;
        let inner = simpson(|s| s * s * rho(s), 0.0, r.min(1.0), n);
        let e = inner / (r * r);
        assert!((ball.field_at(r) - e).abs() < 1e-12, "r = {r}");
    }
}

fn line_state(g: Grid, c: f64) -> FieldState {
    FieldState::zeros(g, c)
}

#[test]
fn static_temporal_field_gives_no_split() {
    let g = Grid::cube(8, TAU).unwrap();
    let mut s = line_state(g, 1.0);
    s.electric = VectorField::from_fn(g, |p| [p[1].sin(), 0.0, 0.0]);
    s.magnetic = VectorField::from_fn(g, |p| [0.0, p[0].cos(), 0.0]);
    let h = TemporalHistory::frozen(g);
    let split = split_et(&s, &h).unwrap();
    assert_eq!(split.e_t.linf(), 0.0);
    let dh = build_dh(&s, &split, &h).unwrap();
    assert_eq!(dh.b_t.linf(), 0.0);
    assert_eq!(dh.d.sub(&s.electric).linf(), 0.0);
    assert_eq!(dh.h.sub(&s.magnetic).linf(), 0.0);
}

fn sine_split_error(n: usize) -> f64 {
    let (l, a, c) = (2.0, 0.8, 1.5);
    let g = Grid::line(n, l).unwrap();
    let s = line_state(g, c);
    let h = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| c * a * (TAU * p[0] / l).sin()),
        second_rate: None,
    };
    let split = split_et(&s, &h).unwrap();
    assert!(split.div_residual_l2 <= 1e-10);
    assert!(split.curl_linf <= 1e-10);
    let exact = ScalarField::from_fn(g, |p| -a * l / TAU * (TAU * p[0] / l).cos());
    split.e_t.component_field(0).sub(&exact).linf()
}

#[test]
fn sine_rate_gives_cosine_field() {
    let (e1, e2) = (sine_split_error(32), sine_split_error(64));
    assert!(e1 < 1e-2, "{e1}");
    assert!((e1 / e2 - 4.0).abs() < 0.1, "ratio {}", e1 / e2);
}

#[test]
fn split_rejects_mean_and_is_linear() {
    let g = Grid::plane(16, 16, TAU, TAU).unwrap();
    let s = line_state(g, 1.0);
    let h = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| 1.0 + p[0].sin()),
        second_rate: None,
    };
    assert!(matches!(
        split_et(&s, &h),
        Err(Error::NonZeroMeanSource { .. })
    ));

    let h = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| p[0].sin() * p[1].cos() + 0.3 * (2.0 * p[1]).sin()),
        second_rate: None,
    };
    let one = split_et(&s, &h).unwrap();
    let two = split_et(&s, &h.scale(2.0)).unwrap();
    assert!(two.e_t.sub(&one.e_t.scale(2.0)).linf() <= 1e-14);
    assert!(build_dh(&s, &one, &h).is_err());
}

/// `T` history with `E_T` from `(1/c)∂T/∂t = b cos y` and free charge
/// `ρ = a sin x` driving `E_free = −4πa cos x x̂`, plus a solenoidal part.
fn two_source_recovery(n: usize) -> f64 {
    let (a, b, c) = (0.4, 0.7, 2.0);
    let g = Grid::plane(n, n, TAU, TAU).unwrap();
    let mut s = line_state(g, c);
    s.electric = VectorField::from_fn(g, |p| {
        [
            -4.0 * PI * a * p[0].cos() + 0.5 * p[1].sin(),
            b * p[1].sin(),
            0.0,
        ]
    });
    let h = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| c * b * p[1].cos()),
        second_rate: None,
    };
    let split = split_et(&s, &h).unwrap();
    let rho = ScalarField::from_fn(g, |p| a * p[0].sin());
    div(&split.working_field(&s)).sub(&rho.scale(4.0 * PI)).l2()
}

#[test]
fn working_field_recovers_free_charge() {
    let (r1, r2) = (two_source_recovery(32), two_source_recovery(64));
    assert!(r1 < 0.2, "{r1}");
    assert!((r1 / r2 - 4.0).abs() < 0.2, "ratio {}", r1 / r2);
}

#[test]
fn static_sine_temporal_field_has_no_magnetic_partner() {
    let g = Grid::line(32, TAU).unwrap();
    let mut s = line_state(g, 1.0);
    s.temporal = ScalarField::from_fn(g, |p| p[0].sin());
    let h = TemporalHistory::frozen(g);
    let split = split_et(&s, &h).unwrap();
    match build_dh(&s, &split, &h) {
        Err(Error::IncompatibleCurlSource { div_norm, mismatch }) => {
            let expected = laplacian(&s.temporal).l2();
            assert!((div_norm / expected - 1.0).abs() < 1e-12);
            assert!(mismatch > 0.1);
        }
        other => panic!("expected incompatibility, got {other:?}"),
    }
}

#[test]
fn compatible_history_gives_vanishing_magnetic_partner() {
    let g = Grid::plane(16, 16, TAU, TAU).unwrap();
    let c = 1.3;
    let mut s = line_state(g, c);
    s.temporal = ScalarField::from_fn(g, |p| p[0].sin() * p[1].cos() + 0.2 * (2.0 * p[1]).cos());
    s.magnetic = VectorField::from_fn(g, |p| [0.0, 0.0, p[0].sin()]);
    // ∂²T/∂t² = −c²∇²T with the grid Laplacian
    let h = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| (2.0 * p[0]).sin()),
        second_rate: Some(laplacian(&s.temporal).scale(-c * c)),
    };
    let split = split_et(&s, &h).unwrap();
    let dh = build_dh(&s, &split, &h).unwrap();
    assert!(dh.b_t.linf() <= 1e-12);
    assert!(dh.div_source_l2 <= 1e-12);
    assert!(dh.h.sub(&s.magnetic).linf() <= 1e-12);
    let doubled = TemporalHistory {
        rate: h.rate.scale(2.0),
        second_rate: h.second_rate.as_ref().map(|f| f.scale(2.0)),
    };
    let mut s2 = s.clone();
    s2.temporal = s.temporal.scale(2.0);
    let split2 = split_et(&s2, &doubled).unwrap();
    assert!(split2.e_t.sub(&split.e_t.scale(2.0)).linf() <= 1e-13);
    assert!(build_dh(&s2, &split2, &doubled).unwrap().b_t.linf() <= 1e-12);
}

#[test]
fn integrated_heat_balance_closes_on_grid_fields() {
    let g = Grid::plane(16, 16, TAU, TAU).unwrap();
    let c = 1.0;
    let material = Material::new(
        Coefficient::Uniform(2.0),
        Coefficient::Uniform(0.5),
        ScalarField::from_fn(g, |p| 300.0 + p[0].sin()),
    )
    .unwrap();
    let b = VectorField::from_fn(g, |p| [0.0, 0.0, p[0].cos() + p[1].sin()]);
    let grad_t = grad(&material.temperature).scale(0.5);
    // J from the Ampère-like law with ∂E/∂t = 0
    let j = curl(&b).sub(&grad_t).scale(c / (4.0 * PI));
    let terms = heat_balance_integrated(&j, &material, &b, &VectorField::zeros(g), c).unwrap();
    assert!(terms.relative_residual() <= 1e-12, "{terms:?}");
    assert!(Material::new(
        Coefficient::Uniform(-1.0),
        Coefficient::Uniform(0.5),
        ScalarField::zeros(g)
    )
    .is_err());
}
