//! Property suites behind `qmx verify`.

use crate::dynamics::{
    cfl_limit, from_potential, mode_amplitude, run, run_observed, scalar_mode, transverse_wave,
    EvolutionConfig, Scheme, Sources,
};
use crate::error::Result;
use crate::field::{
    fields_from_potential, identity_residual, law_residual, path_discrepancy,
    potential_identity_residual, FieldState,
};
use crate::grid::{convergence_order, AnalyticCase, Grid, OperatorTag, ScalarField};
use crate::manufactured::{potential, TrigPotential};
use crate::quaternion::{antisym_product, hamilton_left, hamilton_right, sym_product, Quaternion};
use crate::thermo::{self, MaterialPoint, TemporalHistory, ThomsonScenario};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Identities,
    Convergence,
    Conservation,
    Thermo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
}

impl Bound {
    fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::AtMost(b) => v <= b,
            Bound::AtLeast(b) => v >= b,
            Bound::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(b) => write!(f, "<= {b:e}"),
            Bound::AtLeast(b) => write!(f, ">= {b:e}"),
            Bound::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub quantity: String,
    pub value: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    pub fn new(quantity: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self {
            quantity: quantity.into(),
            value,
            pass: bound.holds(value),
            bound,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<52} {:>14.6e}  {}",
            if self.pass { "ok" } else { "FAIL" },
            self.quantity,
            self.value,
            self.bound
        )
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Algebra => algebra(100_000, 0),
        Suite::Identities => identities(20),
        Suite::Convergence => convergence(),
        Suite::Conservation => conservation(),
        Suite::Thermo => thermo_suite(),
    }
}

fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

/// Largest component difference, scaled by the product of the operand norms.
fn scaled_diff(a: Quaternion, b: Quaternion, scale: f64) -> f64 {
    if scale == 0.0 {
        (a - b).max_abs()
    } else {
        (a - b).max_abs() / scale
    }
}

pub fn algebra(triples: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut assoc, mut norm, mut dual, mut split) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..triples {
        let (a, b, c) = (
            random_quaternion(&mut rng),
            random_quaternion(&mut rng),
            random_quaternion(&mut rng),
        );
        let nab = a.norm() * b.norm();
        let nabc = nab * c.norm();
        assoc = assoc.max(scaled_diff(
            hamilton_right(hamilton_right(a, b), c),
            hamilton_right(a, hamilton_right(b, c)),
            nabc,
        ));
        if nab > 0.0 {
            norm = norm.max((hamilton_right(a, b).norm() - nab).abs() / nab);
        }
        dual = dual.max(scaled_diff(hamilton_left(a, b), hamilton_right(b, a), nab));
        split = split.max(scaled_diff(
            sym_product(a, b) + antisym_product(a, b),
            hamilton_right(a, b),
            nab,
        ));
    }
    let tol = Bound::AtMost(1e-12);
    Ok(vec![
        Check::new(format!("associativity over {triples} triples"), assoc, tol),
        Check::new("norm multiplicativity", norm, tol),
        Check::new("left(a,b) = right(b,a)", dual, tol),
        Check::new("sym + antisym = right action", split, tol),
    ])
}

pub fn identities(count: u64) -> Result<Vec<Check>> {
    let g = Grid::cube(16, TAU)?;
    let (mut id, mut pid, mut paths) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut min_law = f64::INFINITY;
    let mut law_count = 0;
    for seed in 0..count {
        let tp = TrigPotential::random_for(&g, seed, 8, 2);
        let p = potential(&tp, g, 0.3, 3, 1.0);
        let f = fields_from_potential(&p)?;
        id = id.max(identity_residual(&f)?.linf());
        pid = pid.max(potential_identity_residual(&p)?.linf());
        paths = paths.max(path_discrepancy(&p)?);
        let law = law_residual(&f)?.l2();
        min_law = min_law.min(law);
        if law > 1e-2 {
            law_count += 1;
        }
    }
    Ok(vec![
        Check::new(
            "homogeneous identity residual, max L-inf",
            id,
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "potential identity residual, max L-inf",
            pid,
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "combinator vs component path, max relative",
            paths,
            Bound::AtMost(1e-13),
        ),
        Check::new(
            format!("law residual L2 > 1e-2 (of {count} potentials)"),
            law_count as f64,
            Bound::AtLeast(count.saturating_sub(1) as f64),
        ),
        Check::new("smallest law residual L2", min_law, Bound::AtLeast(0.0)),
    ])
}

pub fn convergence() -> Result<Vec<Check>> {
    let res = [16, 32, 64];
    let cases = [
        (OperatorTag::Grad, AnalyticCase::TrigScalar, "grad"),
        (OperatorTag::Div, AnalyticCase::TrigVector, "div"),
        (OperatorTag::Curl, AnalyticCase::TrigVector, "curl"),
        (
            OperatorTag::Laplacian,
            AnalyticCase::TrigScalar,
            "laplacian",
        ),
    ];
    let mut out = Vec::new();
    for (op, case, name) in cases {
        let r = convergence_order(op, case, &res)?;
        out.push(Check::new(
            format!("{name} order (16/32/64)"),
            r.order.value(),
            Bound::Within(1.9, 2.1),
        ));
    }
    Ok(out)
}

fn evo(dt: f64, steps: usize, filter: Option<f64>) -> EvolutionConfig {
    EvolutionConfig {
        dt,
        steps,
        scheme: Scheme::Rk4,
        cfl_safety: 1.0,
        spectral_filter: filter,
    }
}

/// Largest `|Q − Q₀|` over a run, relative to the initial energy.
pub fn pseudo_energy_drift(initial: FieldState, cfg: &EvolutionConfig) -> Result<f64> {
    let out = run(initial, &Sources::IdentifiedWithT, cfg, None)?;
    let q0 = out.initial.pseudo_energy_q;
    let u0 = out.initial.energy_u;
    Ok(out
        .rows
        .iter()
        .map(|r| (r.pseudo_energy_q - q0).abs())
        .fold(0.0, f64::max)
        / u0)
}

pub fn conservation() -> Result<Vec<Check>> {
    let line = Grid::line(64, TAU)?;
    let wave = transverse_wave(line, 1.0, 1, 1.0)?;
    let d1 = pseudo_energy_drift(wave.clone(), &evo(TAU / 128.0, 128, None))?;
    let d2 = pseudo_energy_drift(wave, &evo(TAU / 256.0, 256, None))?;

    let cube = Grid::cube(12, TAU)?;
    let tp = TrigPotential::random_for(&cube, 7, 8, 2);
    let init = from_potential(&potential(&tp, cube, 0.0, 1, 1.0))?;
    let out = run(
        init,
        &Sources::IdentifiedWithT,
        &evo(0.5 * cfl_limit(&cube, 1.0), 20, None),
        None,
    )?;
    let div_b = out.rows.iter().map(|r| r.div_b_l2).fold(0.0, f64::max);

    let line = Grid::line(128, TAU)?;
    let eps = 1e-3;
    let steps = 256;
    let dt = PI / steps as f64;
    let mut amps = vec![eps];
    run_observed(
        scalar_mode(line, eps, 1, 1.0)?,
        &Sources::IdentifiedWithT,
        &evo(dt, steps, Some(0.0625)),
        |_, s| amps.push(mode_amplitude(&s.temporal, [1, 0, 0]).0),
    )?;
    let cosh_dev = (0..=steps)
        .map(|n| (amps[n] / (eps * (n as f64 * dt).cosh()) - 1.0).abs())
        .fold(0.0, f64::max);
    let k = steps / 4;
    let slope = (amps[steps].ln() - amps[steps - k].ln()) / (k as f64 * dt);

    Ok(vec![
        Check::new(
            "transverse wave pseudo-energy drift",
            d1,
            Bound::AtMost(1e-6),
        ),
        Check::new(
            "drift ratio on halving dt",
            d1 / d2,
            Bound::Within(8.0, 32.0),
        ),
        Check::new(
            "div B over a random-potential run",
            div_b,
            Bound::AtMost(1e-10),
        ),
        Check::new(
            "scalar mode vs eps cosh(ckt), max relative",
            cosh_dev,
            Bound::AtMost(0.01),
        ),
        Check::new(
            "scalar mode late growth rate / c|k| - 1",
            (slope - 1.0).abs(),
            Bound::AtMost(0.02),
        ),
    ])
}

pub fn thermo_suite() -> Result<Vec<Check>> {
    let m = MaterialPoint::new(2.0, 0.5)?;
    let (j, gk, c) = ([3.0, 0.0, 0.0], [0.2, 0.0, 0.0], 1.0);
    let curl_b = [0, 1, 2].map(|a| m.dtdk * gk[a] + 4.0 * PI * j[a]);
    let h = thermo::heat_balance(j, m, gk, curl_b, [0.0; 3], c)?;
    let t = thermo::thomson_heat(j, gk, m, c)?;
    let rev = thermo::thomson_reversal_experiment(&ThomsonScenario {
        current: j,
        grad_k: gk,
        curl_b: [0.0, 1.0, 0.0],
        material: m,
        c,
    })?;

    let g = Grid::plane(32, 32, TAU, TAU)?;
    let state = FieldState::zeros(g, 1.0);
    let hist = TemporalHistory {
        rate: ScalarField::from_fn(g, |p| p[0].sin() * p[1].cos()),
        second_rate: None,
    };
    let split = thermo::split_et(&state, &hist)?;

    Ok(vec![
        Check::new(
            "heat balance relative residual",
            h.relative_residual(),
            Bound::AtMost(1e-12),
        ),
        Check::new("joule - 4.5", (h.joule - 4.5).abs(), Bound::AtMost(1e-14)),
        Check::new(
            "thomson - 0.3/(8 pi)",
            (h.thomson - 0.3 / (8.0 * PI)).abs(),
            Bound::AtMost(1e-15),
        ),
        Check::new(
            "dQ/dt - (4.5 + 0.6/(16 pi))",
            (t.dq_dt - (4.5 + 0.6 / (16.0 * PI))).abs(),
            Bound::AtMost(1e-14),
        ),
        Check::new(
            "h_T + 1/(16 pi)",
            (t.h_t + 1.0 / (16.0 * PI)).abs(),
            Bound::AtMost(1e-16),
        ),
        Check::new(
            "reversal h_T relative error",
            (rev.h_t_estimate / rev.h_t_formula - 1.0).abs(),
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "div E_T - (1/c) dT/dt, L2",
            split.div_residual_l2,
            Bound::AtMost(1e-10),
        ),
        Check::new("curl E_T, L-inf", split.curl_linf, Bound::AtMost(1e-10)),
    ])
}
