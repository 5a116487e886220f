//! Explicit time evolution of `T`, `E`, `B`.
//!
//! The field equations, solved for the time derivatives, read
//!
//! ```text
//! ∂E/∂t =  c curl B − c grad T − 4πJ
//! ∂B/∂t = −c curl E
//! ∂T/∂t =  c div E − 4πcρ
//! ```
//!
//! With no explicit sources the system conserves the pseudo-energy
//! `Q = ∫(E² + B² − T²)/8π` exactly on the periodic grid: the curl terms
//! cancel because the centered curl is symmetric under the periodic sum, and
//! the `T`–`E` coupling cancels because `Σ T div E = −Σ E·grad T`. The scalar
//! sector obeys `∂²T/∂t² = −c²∇²T`, so each Fourier mode of `T` grows like
//! `cosh(c|k|t)`. Runs are meant to be short, or low-pass filtered.

mod initial;
mod sources;

pub use initial::{from_potential, gaussian_t_pulse, scalar_mode, transverse_wave, zero_state};
pub use sources::{ExplicitSources, SourceMode, Sources};

use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::{curl, div, grad, laplacian, Grid, ScalarField};
use crate::spectral;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub cfl_safety: f64,
    /// Cutoff fraction of the Nyquist index for the sharp low-pass filter.
    pub spectral_filter: Option<f64>,
}

impl EvolutionConfig {
    pub fn validate(&self, grid: &Grid, c: f64) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {}", self.dt),
            });
        }
        if self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "cfl_safety",
                reason: format!("must lie in (0, 1], got {}", self.cfl_safety),
            });
        }
        if let Some(f) = self.spectral_filter {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidParameter {
                    name: "spectral_filter",
                    reason: format!("cutoff fraction must lie in (0, 1], got {f}"),
                });
            }
        }
        let dt_max = cfl_limit(grid, c);
        let limit = self.cfl_safety * dt_max;
        if self.dt > limit {
            return Err(Error::CflViolation {
                dt: self.dt,
                limit,
                safety: self.cfl_safety,
                dt_max,
            });
        }
        Ok(())
    }
}

/// `min Δ / (c √3)`, also applied to 1-D and 2-D grids.
pub fn cfl_limit(grid: &Grid, c: f64) -> f64 {
    grid.min_spacing() / (c * 3.0_f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub step: usize,
    pub t: f64,
    /// `∫(E² + B² + T²)/8π`
    pub energy_u: f64,
    /// `∫(E² + B² − T²)/8π`
    pub pseudo_energy_q: f64,
    pub div_b_l2: f64,
    /// L2 norm of `div E − 4πρ`, the departure from the classical
    /// Coulomb-Gauss law that the temporal source carries.
    pub gauss_residual_l2: f64,
    pub max_t: f64,
}

impl DiagnosticsRow {
    pub fn is_finite(&self) -> bool {
        [
            self.energy_u,
            self.pseudo_energy_q,
            self.div_b_l2,
            self.gauss_residual_l2,
            self.max_t,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

pub fn energy(f: &FieldState) -> f64 {
    let t2 = f.temporal.inner(&f.temporal);
    (f.electric.norm_squared_integral() + f.magnetic.norm_squared_integral() + t2) / (8.0 * PI)
}

pub fn pseudo_energy(f: &FieldState) -> f64 {
    let t2 = f.temporal.inner(&f.temporal);
    (f.electric.norm_squared_integral() + f.magnetic.norm_squared_integral() - t2) / (8.0 * PI)
}

pub fn diagnostics(step: usize, f: &FieldState, sources: &Sources) -> DiagnosticsRow {
    let div_e = div(&f.electric);
    let gauss = match sources.densities_at(f.time) {
        Some(d) => div_e.sub(&d.rho.scale(4.0 * PI)),
        None => div_e,
    };
    DiagnosticsRow {
        step,
        t: f.time,
        energy_u: energy(f),
        pseudo_energy_q: pseudo_energy(f),
        div_b_l2: div(&f.magnetic).l2(),
        gauss_residual_l2: gauss.l2(),
        max_t: f.temporal.linf(),
    }
}

/// Time derivative of the state; the returned `time` equals `f.time`.
pub fn evolution_rhs(f: &FieldState, sources: &Sources) -> Result<FieldState> {
    let grid = *f.grid();
    sources.check_grid(&grid)?;
    let c = f.c;
    let mut de_dt = curl(&f.magnetic).sub(&grad(&f.temporal)).scale(c);
    let db_dt = curl(&f.electric).scale(-c);
    let mut dt_dt = div(&f.electric).scale(c);
    if let Some(d) = sources.densities_at(f.time) {
        de_dt.axpy(-4.0 * PI, &d.current);
        dt_dt.axpy(-4.0 * PI * c, &d.rho);
    }
    Ok(FieldState {
        temporal: dt_dt,
        electric: de_dt,
        magnetic: db_dt,
        time: f.time,
        c,
    })
}

fn apply_filter(f: &mut FieldState, cutoff: f64) {
    f.temporal = spectral::low_pass(&f.temporal, cutoff);
    for v in [&mut f.electric, &mut f.magnetic] {
        let filtered: Vec<Vec<f64>> = (0..3)
            .map(|a| spectral::low_pass(&v.component_field(a), cutoff).into_vec())
            .collect();
        for (a, comp) in filtered.into_iter().enumerate() {
            v.component_mut(a).copy_from_slice(&comp);
        }
    }
}

/// One classical RK4 step of size `dt`, followed by the optional filter.
pub fn step(f: &FieldState, sources: &Sources, cfg: &EvolutionConfig) -> Result<FieldState> {
    let dt = cfg.dt;
    let stage = |base: &FieldState, rate: &FieldState, h: f64| {
        let mut s = base.clone();
        s.axpy(h, rate);
        s.time = base.time + h;
        s
    };
    let k1 = evolution_rhs(f, sources)?;
    let k2 = evolution_rhs(&stage(f, &k1, 0.5 * dt), sources)?;
    let k3 = evolution_rhs(&stage(f, &k2, 0.5 * dt), sources)?;
    let k4 = evolution_rhs(&stage(f, &k3, dt), sources)?;
    let mut next = f.clone();
    next.axpy(dt / 6.0, &k1);
    next.axpy(dt / 3.0, &k2);
    next.axpy(dt / 3.0, &k3);
    next.axpy(dt / 6.0, &k4);
    next.time = f.time + dt;
    if let Some(cutoff) = cfg.spectral_filter {
        apply_filter(&mut next, cutoff);
    }
    Ok(next)
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub initial: DiagnosticsRow,
    pub final_state: FieldState,
    pub filter: Option<f64>,
}

/// Advances `cfg.steps` steps, handing each row and state to `observe`.
///
/// Aborts with [`Error::NonFinite`] carrying the step index once any field
/// value stops being finite; rows already observed stay with the caller.
pub fn run_observed(
    initial: FieldState,
    sources: &Sources,
    cfg: &EvolutionConfig,
    mut observe: impl FnMut(&DiagnosticsRow, &FieldState),
) -> Result<RunSummary> {
    cfg.validate(initial.grid(), initial.c)?;
    sources.check_grid(initial.grid())?;
    let initial_row = diagnostics(0, &initial, sources);
    let mut state = initial;
    for n in 1..=cfg.steps {
        state = step(&state, sources, cfg)?;
        if !state.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        let row = diagnostics(n, &state, sources);
        observe(&row, &state);
    }
    Ok(RunSummary {
        initial: initial_row,
        final_state: state,
        filter: cfg.spectral_filter,
    })
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub initial: DiagnosticsRow,
    pub rows: Vec<DiagnosticsRow>,
    pub final_state: FieldState,
    /// `(step, state)` every `snapshot_every` steps.
    pub snapshots: Vec<(usize, FieldState)>,
    pub filter: Option<f64>,
}

pub fn run(
    initial: FieldState,
    sources: &Sources,
    cfg: &EvolutionConfig,
    snapshot_every: Option<usize>,
) -> Result<RunOutput> {
    let mut rows = Vec::with_capacity(cfg.steps);
    let mut snapshots = Vec::new();
    let summary = run_observed(initial, sources, cfg, |row, state| {
        rows.push(*row);
        if let Some(k) = snapshot_every.filter(|&k| k > 0) {
            if row.step % k == 0 {
                snapshots.push((row.step, state.clone()));
            }
        }
    })?;
    Ok(RunOutput {
        initial: summary.initial,
        rows,
        final_state: summary.final_state,
        snapshots,
        filter: summary.filter,
    })
}

/// `(1/c²)∂²T/∂t² + ∇²T + (4π/c)(∂ρ/∂t + div J)` at the middle of three
/// consecutive `T` samples spaced `dt`.
///
/// The divergence of the `E` equation combined with the `T` equation makes
/// this vanish for any consistent evolution; with the temporal terms read as
/// the sources it is the charge continuity equation.
pub fn source_consistency_residual(
    prev: &ScalarField,
    current: &FieldState,
    next: &ScalarField,
    dt: f64,
    sources: &Sources,
) -> Result<ScalarField> {
    let grid = *current.grid();
    grid.ensure_same(prev.grid())?;
    grid.ensure_same(next.grid())?;
    sources.check_grid(&grid)?;
    let c = current.c;
    let t = &current.temporal;
    let ddt = next
        .sub(&t.scale(2.0))
        .add(prev)
        .scale(1.0 / (dt * dt * c * c));
    let mut res = ddt.add(&laplacian(t));
    if let Sources::Explicit(ex) = sources {
        let d = ex.at(current.time);
        let continuity = ex.rho_rate.add(&div(&d.current));
        res.axpy(4.0 * PI / c, &continuity);
    }
    Ok(res)
}

/// Sine and cosine coefficients of integer mode `m` in `f`:
/// `f ≈ s·sin(k·x) + c·cos(k·x) + …`.
pub fn mode_amplitude(f: &ScalarField, m: [i64; 3]) -> (f64, f64) {
    let grid = f.grid();
    let l = grid.lengths();
    let k = [0, 1, 2].map(|a| std::f64::consts::TAU * m[a] as f64 / l[a]);
    let (mut s, mut c) = (0.0, 0.0);
    for (idx, v) in f.values().iter().enumerate() {
        let p = grid.position(idx);
        let phase = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
        s += v * phase.sin();
        c += v * phase.cos();
    }
    let norm = 2.0 / grid.len() as f64;
    (s * norm, c * norm)
}

#[cfg(test)]
mod tests;
