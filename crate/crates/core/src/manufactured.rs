//! Analytic quaternion fields used as manufactured potentials.
//!
//! Random potentials draw from a `ChaCha8Rng` seeded with the caller's
//! 64-bit seed; per mode the draws are, in order: component index,
//! three integer wavenumbers, frequency, amplitude, phase.

use crate::field::{PotentialField, QuatField, QuatJet};
use crate::grid::Grid;
use crate::quaternion::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, TAU};

/// A quaternion-valued function of space and time that can report its own
/// time derivatives.
pub trait AnalyticField {
    fn eval(&self, p: [f64; 3], t: f64, time_order: usize) -> Quaternion;
}

impl<F> AnalyticField for F
where
    F: Fn([f64; 3], f64, usize) -> Quaternion,
{
    fn eval(&self, p: [f64; 3], t: f64, time_order: usize) -> Quaternion {
        self(p, t, time_order)
    }
}

/// Jet with exact time derivatives up to `order`.
pub fn analytic_jet(f: &impl AnalyticField, grid: Grid, t: f64, order: usize, c: f64) -> QuatJet {
    let levels = (0..=order)
        .map(|j| QuatField::from_fn(grid, |p| f.eval(p, t, j)))
        .collect();
    QuatJet::from_derivatives(levels, t, c).expect("valid analytic jet")
}

/// Jet built from `2·order + 1` frames spaced `dt` around `t`.
pub fn sampled_jet(
    f: &impl AnalyticField,
    grid: Grid,
    t: f64,
    dt: f64,
    order: usize,
    c: f64,
) -> QuatJet {
    let frames: Vec<QuatField> = (0..=2 * order)
        .map(|n| {
            let tn = t + (n as f64 - order as f64) * dt;
            QuatField::from_fn(grid, |p| f.eval(p, tn, 0))
        })
        .collect();
    QuatJet::from_frames(&frames, dt, t, c).expect("valid sampled jet")
}

/// `sin` and its time derivatives for phase `k·x − ωt + φ`.
fn sin_derivative(phase: f64, omega: f64, order: usize) -> f64 {
    (-omega).powi(order as i32) * (phase + order as f64 * FRAC_PI_2).sin()
}

/// Vacuum plane-wave potential `U = 0`, `A = ŷ a sin(k(x − ct))`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWavePotential {
    pub amplitude: f64,
    pub wavenumber: f64,
    pub c: f64,
}

impl AnalyticField for PlaneWavePotential {
    fn eval(&self, p: [f64; 3], t: f64, time_order: usize) -> Quaternion {
        let phase = self.wavenumber * (p[0] - self.c * t);
        let omega = self.wavenumber * self.c;
        Quaternion::new(
            0.0,
            0.0,
            self.amplitude * sin_derivative(phase, omega, time_order),
            0.0,
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrigMode {
    /// 0 = scalar potential, 1..=3 = vector potential components.
    pub component: usize,
    /// Physical wave vector.
    pub wave: [f64; 3],
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// Sum of travelling sine modes, periodic on the box it was drawn for.
#[derive(Debug, Clone)]
pub struct TrigPotential {
    pub modes: Vec<TrigMode>,
}

impl TrigPotential {
    /// Draws `n_modes` random modes with integer wavenumbers in
    /// `[-max_wavenumber, max_wavenumber]` on a box of size `lengths`
    /// (degenerate axes of a grid should be passed with `max_wavenumber`
    /// applying only to active axes via `active`).
    pub fn random(
        seed: u64,
        lengths: [f64; 3],
        active: [bool; 3],
        n_modes: usize,
        max_wavenumber: i64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = (0..n_modes)
            .map(|_| {
                let component = rng.gen_range(0..4usize);
                let mut wave = [0.0; 3];
                for a in 0..3 {
                    let m = rng.gen_range(-max_wavenumber..=max_wavenumber);
                    if active[a] {
                        wave[a] = TAU * m as f64 / lengths[a];
                    }
                }
                TrigMode {
                    component,
                    wave,
                    omega: rng.gen_range(-2.0..2.0),
                    amplitude: rng.gen_range(0.2..1.0),
                    phase: rng.gen_range(0.0..TAU),
                }
            })
            .collect();
        Self { modes }
    }

    /// Random potential suited to `grid`.
    pub fn random_for(grid: &Grid, seed: u64, n_modes: usize, max_wavenumber: i64) -> Self {
        let active = [0, 1, 2].map(|a| !grid.is_degenerate(a));
        Self::random(seed, grid.lengths(), active, n_modes, max_wavenumber)
    }
}

impl AnalyticField for TrigPotential {
    fn eval(&self, p: [f64; 3], t: f64, time_order: usize) -> Quaternion {
        let mut c = [0.0; 4];
        for m in &self.modes {
            let phase =
                m.wave[0] * p[0] + m.wave[1] * p[1] + m.wave[2] * p[2] - m.omega * t + m.phase;
            c[m.component] += m.amplitude * sin_derivative(phase, m.omega, time_order);
        }
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

/// Convenience: analytic potential jet.
pub fn potential(
    f: &impl AnalyticField,
    grid: Grid,
    t: f64,
    order: usize,
    c: f64,
) -> PotentialField {
    PotentialField::new(analytic_jet(f, grid, t, order, c))
}
