use super::*;
use crate::grid::VectorField;
use crate::manufactured::{potential, TrigPotential};
use std::f64::consts::TAU;

fn cfg(dt: f64, steps: usize) -> EvolutionConfig {
    EvolutionConfig {
        dt,
        steps,
        scheme: Scheme::Rk4,
        cfl_safety: 1.0,
        spectral_filter: None,
    }
}

#[test]
fn zero_stays_zero() {
    let g = Grid::cube(8, 1.0).unwrap();
    let out = run(
        zero_state(g, 1.0),
        &Sources::IdentifiedWithT,
        &cfg(0.01, 5),
        None,
    )
    .unwrap();
    assert_eq!(out.rows.len(), 5);
    assert!(out.rows.iter().all(|r| r.energy_u == 0.0 && r.max_t == 0.0));
    assert_eq!(out.final_state.electric.linf(), 0.0);
}

#[test]
fn cfl_violation_reports_limits() {
    let g = Grid::cube(16, 1.0).unwrap();
    let limit = cfl_limit(&g, 2.0);
    assert!((limit - (1.0 / 16.0) / (2.0 * 3.0_f64.sqrt())).abs() < 1e-15);
    let mut c = cfg(limit, 1);
    c.cfl_safety = 0.5;
    match c.validate(&g, 2.0) {
        Err(Error::CflViolation {
            dt,
            limit: l,
            safety,
            dt_max,
        }) => {
            assert_eq!(dt, limit);
            assert_eq!(safety, 0.5);
            assert_eq!(dt_max, limit);
            assert!((l - 0.5 * limit).abs() < 1e-18);
        }
        other => panic!("expected CFL violation, got {other:?}"),
    }
    assert!(cfg(limit, 1).validate(&g, 2.0).is_ok());
    assert!(cfg(-1.0, 1).validate(&g, 1.0).is_err());
    assert!(cfg(0.001, 0).validate(&g, 1.0).is_err());
}

fn transverse_error(n: usize) -> (f64, f64) {
    let g = Grid::line(n, TAU).unwrap();
    let steps = 512;
    let dt = TAU / steps as f64;
    let out = run(
        transverse_wave(g, 1.0, 1, 1.0).unwrap(),
        &Sources::IdentifiedWithT,
        &cfg(dt, steps),
        None,
    )
    .unwrap();
    let f = out.final_state;
    let exact = ScalarField::from_fn(g, |p| (p[0] - TAU).sin());
    let err = f.electric.component_field(1).sub(&exact).l2() / exact.l2();
    let max_t = out.rows.iter().map(|r| r.max_t).fold(0.0, f64::max);
    (err, max_t)
}

#[test]
fn transverse_wave_propagates_at_second_order() {
    let (e1, t1) = transverse_error(64);
    let (e2, t2) = transverse_error(128);
    assert!(e2 < 0.02, "{e2}");
    assert!((e1 / e2 - 4.0).abs() < 0.5, "ratio {}", e1 / e2);
    assert!(t1 <= 1e-10 && t2 <= 1e-10);
}

#[test]
fn scalar_mode_grows_like_cosh() {
    let n = 128;
    let g = Grid::line(n, TAU).unwrap();
    let steps = 256;
    let dt = std::f64::consts::PI / steps as f64;
    let eps = 1e-3;
    let mut amps = vec![eps];
    run_observed(
        scalar_mode(g, eps, 1, 1.0).unwrap(),
        &Sources::IdentifiedWithT,
        &cfg(dt, steps),
        |_, s| amps.push(mode_amplitude(&s.temporal, [1, 0, 0]).0),
    )
    .unwrap();
    let dx = g.dx;
    let rate = dx.sin() / dx;
    let t_end = steps as f64 * dt;
    let expected = eps * (rate * t_end).cosh();
    let last = *amps.last().unwrap();
    assert!((last / expected - 1.0).abs() < 0.01, "{last} vs {expected}");
    // late-time log slope
    let k = steps / 4;
    let slope = (amps[steps].ln() - amps[steps - k].ln()) / (k as f64 * dt);
    let tanh_corr = (rate * t_end).tanh();
    assert!((slope / (rate * tanh_corr) - 1.0).abs() < 0.02, "{slope}");
    // continuum rate c|k| = 1
    assert!((slope - 1.0).abs() < 0.02, "{slope}");
}

#[test]
fn pseudo_energy_conserved_by_transverse_wave() {
    let drift = |steps: usize| {
        let g = Grid::line(64, TAU).unwrap();
        let dt = TAU / steps as f64;
        let out = run(
            transverse_wave(g, 1.0, 1, 1.0).unwrap(),
            &Sources::IdentifiedWithT,
            &cfg(dt, steps),
            None,
        )
        .unwrap();
        let q0 = out.initial.pseudo_energy_q;
        out.rows
            .iter()
            .map(|r| (r.pseudo_energy_q - q0).abs() / q0.abs())
            .fold(0.0, f64::max)
    };
    let (d1, d2) = (drift(128), drift(256));
    assert!(d1 <= 1e-6, "{d1}");
    let ratio = d1 / d2;
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn energy_rate_is_carried_by_t() {
    let g = Grid::cube(12, TAU).unwrap();
    let tp = TrigPotential::random_for(&g, 3, 8, 2);
    let mut s = from_potential(&potential(&tp, g, 0.0, 1, 1.0)).unwrap();
    s.temporal = s
        .temporal
        .add(&ScalarField::from_fn(g, |p| 0.3 * p[1].cos()));
    let r = evolution_rhs(&s, &Sources::IdentifiedWithT).unwrap();
    let dq = (s.electric.inner(&r.electric) + s.magnetic.inner(&r.magnetic)
        - s.temporal.inner(&r.temporal))
        / (4.0 * PI);
    let du = (s.electric.inner(&r.electric)
        + s.magnetic.inner(&r.magnetic)
        + s.temporal.inner(&r.temporal))
        / (4.0 * PI);
    let t_part = s.temporal.inner(&r.temporal) / (2.0 * PI);
    let scale = s.electric.inner(&r.electric).abs().max(1.0);
    assert!(dq.abs() <= 1e-12 * scale, "{dq}");
    assert!((du - t_part).abs() <= 1e-12 * scale);
}

#[test]
fn magnetic_divergence_stays_zero() {
    let g = Grid::cube(12, TAU).unwrap();
    let tp = TrigPotential::random_for(&g, 9, 8, 2);
    let init = from_potential(&potential(&tp, g, 0.0, 1, 1.0)).unwrap();
    let dt = 0.5 * cfl_limit(&g, 1.0);
    let out = run(init, &Sources::IdentifiedWithT, &cfg(dt, 20), None).unwrap();
    assert!(out.rows.iter().all(|r| r.div_b_l2 <= 1e-10));
}

fn consistency(dt: f64, sources: &Sources) -> f64 {
    let g = Grid::plane(16, 16, TAU, TAU).unwrap();
    let mut init = gaussian_t_pulse(g, 1.0, 0.8, 1.0).unwrap();
    init.electric = VectorField::from_fn(g, |p| [0.2 * p[1].sin(), 0.1 * p[0].cos(), 0.0]);
    let c = cfg(dt, 3);
    let s1 = step(&init, sources, &c).unwrap();
    let s2 = step(&s1, sources, &c).unwrap();
    source_consistency_residual(&init.temporal, &s1, &s2.temporal, dt, sources)
        .unwrap()
        .l2()
}

#[test]
fn temporal_sector_closes_with_identified_sources() {
    let (r1, r2) = (
        consistency(0.02, &Sources::IdentifiedWithT),
        consistency(0.01, &Sources::IdentifiedWithT),
    );
    assert!(r1 < 1e-2, "{r1}");
    assert!((r1 / r2 - 4.0).abs() < 0.5, "ratio {}", r1 / r2);
}

#[test]
fn temporal_sector_closes_with_explicit_sources() {
    let g = Grid::plane(16, 16, TAU, TAU).unwrap();
    let ex = ExplicitSources::constant(
        ScalarField::from_fn(g, |p| 0.1 * p[0].sin()),
        VectorField::from_fn(g, |p| [0.05 * p[1].cos(), 0.03 * p[0].sin(), 0.0]),
    )
    .unwrap()
    .with_rates(
        ScalarField::from_fn(g, |p| 0.02 * p[1].sin()),
        VectorField::zeros(g),
    )
    .unwrap();
    let s = Sources::Explicit(ex);
    let (r1, r2) = (consistency(0.02, &s), consistency(0.01, &s));
    assert!(r1 < 1e-2, "{r1}");
    assert!((r1 / r2 - 4.0).abs() < 0.5, "ratio {}", r1 / r2);
    // dropping the sources from the check leaves an O(1) mismatch
    let g2 = Grid::plane(16, 16, TAU, TAU).unwrap();
    let init = gaussian_t_pulse(g2, 1.0, 0.8, 1.0).unwrap();
    let c = cfg(0.01, 2);
    let s1 = step(&init, &s, &c).unwrap();
    let s2 = step(&s1, &s, &c).unwrap();
    let wrong = source_consistency_residual(
        &init.temporal,
        &s1,
        &s2.temporal,
        0.01,
        &Sources::IdentifiedWithT,
    )
    .unwrap()
    .l2();
    assert!(wrong > 0.1, "{wrong}");
}

#[test]
fn gauss_residual_counts_temporal_source() {
    let g = Grid::line(32, TAU).unwrap();
    let s = scalar_mode(g, 1.0, 1, 1.0).unwrap();
    assert_eq!(
        diagnostics(0, &s, &Sources::IdentifiedWithT).gauss_residual_l2,
        0.0
    );
    let r = evolution_rhs(&s, &Sources::IdentifiedWithT).unwrap();
    // E picks up −c grad T, so div E becomes non-zero after one step
    let s1 = step(&s, &Sources::IdentifiedWithT, &cfg(0.05, 1)).unwrap();
    assert!(diagnostics(1, &s1, &Sources::IdentifiedWithT).gauss_residual_l2 > 0.0);
    assert!(r.electric.linf() > 0.0);
}

#[test]
fn non_finite_state_aborts_with_step() {
    let g = Grid::line(8, 1.0).unwrap();
    let mut s = zero_state(g, 1.0);
    s.temporal.values_mut()[3] = f64::NAN;
    let err = run(s, &Sources::IdentifiedWithT, &cfg(0.01, 4), None).unwrap_err();
    assert!(matches!(err, Error::NonFinite { step: 1 }));
}

#[test]
fn filter_suppresses_high_modes_only() {
    let g = Grid::line(64, TAU).unwrap();
    let mut s = scalar_mode(g, 1e-3, 1, 1.0).unwrap();
    s.temporal = s
        .temporal
        .add(&ScalarField::from_fn(g, |p| 1e-3 * (20.0 * p[0]).sin()));
    let mut c = cfg(0.02, 10);
    c.spectral_filter = Some(0.5);
    let out = run(s, &Sources::IdentifiedWithT, &c, None).unwrap();
    assert_eq!(out.filter, Some(0.5));
    let f = &out.final_state.temporal;
    assert!(mode_amplitude(f, [20, 0, 0]).0.abs() < 1e-15);
    assert!(mode_amplitude(f, [1, 0, 0]).0 > 1e-3);
}

#[test]
fn runs_are_independent_of_thread_count() {
    let g = Grid::cube(12, TAU).unwrap();
    let tp = TrigPotential::random_for(&g, 11, 6, 2);
    let init = from_potential(&potential(&tp, g, 0.0, 1, 1.0)).unwrap();
    let go = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            run(
                init.clone(),
                &Sources::IdentifiedWithT,
                &cfg(0.05, 5),
                Some(5),
            )
            .unwrap()
        })
    };
    let (a, b) = (go(1), go(4));
    assert_eq!(a.rows, b.rows);
    assert_eq!(
        a.final_state.temporal.values(),
        b.final_state.temporal.values()
    );
    assert_eq!(a.snapshots.len(), 1);
}

#[test]
fn mode_amplitude_reads_coefficients() {
    let g = Grid::line(32, TAU).unwrap();
    let f = ScalarField::from_fn(g, |p| 0.7 * (2.0 * p[0]).sin() - 0.2 * (2.0 * p[0]).cos());
    let (s, c) = mode_amplitude(&f, [2, 0, 0]);
    assert!((s - 0.7).abs() < 1e-14 && (c + 0.2).abs() < 1e-14);
}
