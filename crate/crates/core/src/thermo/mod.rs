//! Thermoelectric reading of the temporal field.
//!
//! A charge `q` in a temporal field `T` picks up the force-like quantity `qT`
//! and exchanges energy at the rate `−qTc`. With `T = T(K)` a function of the
//! temperature `K`, `dT/dK` acts as a heat capacity per unit charge, and the
//! Ampère-like law dotted with `J/σ` splits into Joule, Thomson, curl and
//! displacement heats.

mod split;

pub use split::{build_dh, split_et, DhSplit, TemporalHistory, TemporalSplit};

use crate::error::{invalid, Result};
use crate::grid::{curl, grad, Grid, ScalarField, VectorField};
use std::f64::consts::PI;

/// A material parameter that is either uniform or varies over the grid.
#[derive(Debug, Clone)]
pub enum Coefficient {
    Uniform(f64),
    Field(ScalarField),
}

impl Coefficient {
    pub fn at(&self, idx: usize) -> f64 {
        match self {
            Coefficient::Uniform(v) => *v,
            Coefficient::Field(f) => f.values()[idx],
        }
    }

    fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Coefficient::Uniform(v) => Box::new(std::iter::once(*v)),
            Coefficient::Field(f) => Box::new(f.values().iter().copied()),
        }
    }
}

/// Local material constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialPoint {
    pub sigma: f64,
    pub dtdk: f64,
}

impl MaterialPoint {
    pub fn new(sigma: f64, dtdk: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid(
                "sigma",
                format!("conductivity must be positive, got {sigma}"),
            ));
        }
        if !dtdk.is_finite() {
            return Err(invalid("dtdk", "must be finite"));
        }
        Ok(Self { sigma, dtdk })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.sigma, self.dtdk).map(|_| ())
    }
}

/// Conductivity `σ`, temporal heat capacity `dT/dK` and temperature `K`.
#[derive(Debug, Clone)]
pub struct Material {
    pub sigma: Coefficient,
    pub dtdk: Coefficient,
    pub temperature: ScalarField,
}

impl Material {
    pub fn new(sigma: Coefficient, dtdk: Coefficient, temperature: ScalarField) -> Result<Self> {
        let grid = *temperature.grid();
        for c in [&sigma, &dtdk] {
            if let Coefficient::Field(f) = c {
                grid.ensure_same(f.grid())?;
            }
        }
        if sigma.values().any(|s| !(s.is_finite() && s > 0.0)) {
            return Err(invalid("sigma", "conductivity must be positive everywhere"));
        }
        if dtdk.values().any(|v| !v.is_finite()) {
            return Err(invalid("dtdk", "must be finite everywhere"));
        }
        if !temperature.is_finite() {
            return Err(invalid("temperature", "must be finite everywhere"));
        }
        Ok(Self {
            sigma,
            dtdk,
            temperature,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.temperature.grid()
    }

    pub fn point(&self, idx: usize) -> MaterialPoint {
        MaterialPoint {
            sigma: self.sigma.at(idx),
            dtdk: self.dtdk.at(idx),
        }
    }
}

/// A test charge; only `q` enters the work, `v` must stay below `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeCharge {
    pub q: f64,
    pub x: [f64; 3],
    pub v: [f64; 3],
}

impl ProbeCharge {
    pub fn at_rest(q: f64) -> Self {
        Self {
            q,
            x: [0.0; 3],
            v: [0.0; 3],
        }
    }

    pub fn speed(&self) -> f64 {
        dot(self.v, self.v).sqrt()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Energy `W = −qc∫T dt` taken up by the probe from `T` sampled along its
/// path every `dt` (trapezoid rule). Positive charges in positive `T` lose
/// energy, i.e. appear cold.
pub fn temporal_work(probe: &ProbeCharge, temporal: &[f64], dt: f64, c: f64) -> Result<f64> {
    if temporal.is_empty() {
        return Err(invalid("temporal", "empty time series"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(invalid("dt", format!("must be positive, got {dt}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    if probe.speed() >= c {
        return Err(invalid(
            "v",
            format!("probe speed {} must be below c = {c}", probe.speed()),
        ));
    }
    let integral: f64 = temporal.windows(2).map(|w| 0.5 * (w[0] + w[1]) * dt).sum();
    Ok(-probe.q * c * integral)
}

/// The four heats whose sum vanishes when the Ampère-like law holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatBalanceTerms {
    /// `J²/σ`
    pub joule: f64,
    /// `(c/4πσ)(dT/dK) J·grad K`
    pub thomson: f64,
    /// `−(c/4πσ) J·curl B`
    pub curl_term: f64,
    /// `(1/4πσ) J·∂E/∂t`
    pub displacement_term: f64,
}

impl HeatBalanceTerms {
    pub fn sum(&self) -> f64 {
        self.joule + self.thomson + self.curl_term + self.displacement_term
    }

    pub fn scale(&self) -> f64 {
        [
            self.joule,
            self.thomson,
            self.curl_term,
            self.displacement_term,
        ]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `|sum| / max |term|`, zero when every term is zero.
    pub fn relative_residual(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            self.sum().abs() / s
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            joule: self.joule + o.joule,
            thomson: self.thomson + o.thomson,
            curl_term: self.curl_term + o.curl_term,
            displacement_term: self.displacement_term + o.displacement_term,
        }
    }
}

pub fn heat_balance(
    current: [f64; 3],
    material: MaterialPoint,
    grad_k: [f64; 3],
    curl_b: [f64; 3],
    de_dt: [f64; 3],
    c: f64,
) -> Result<HeatBalanceTerms> {
    material.check()?;
    let s = material.sigma;
    let k = c / (4.0 * PI * s);
    Ok(HeatBalanceTerms {
        joule: dot(current, current) / s,
        thomson: k * material.dtdk * dot(current, grad_k),
        curl_term: -k * dot(current, curl_b),
        displacement_term: dot(current, de_dt) / (4.0 * PI * s),
    })
}

/// Heat-balance terms integrated over the grid, with `grad K` and `curl B`
/// taken by the grid operators.
pub fn heat_balance_integrated(
    current: &VectorField,
    material: &Material,
    magnetic: &VectorField,
    de_dt: &VectorField,
    c: f64,
) -> Result<HeatBalanceTerms> {
    let grid = *material.grid();
    for g in [current.grid(), magnetic.grid(), de_dt.grid()] {
        grid.ensure_same(g)?;
    }
    let grad_k = grad(&material.temperature);
    let curl_b = curl(magnetic);
    let vol = grid.cell_volume();
    let mut total = HeatBalanceTerms {
        joule: 0.0,
        thomson: 0.0,
        curl_term: 0.0,
        displacement_term: 0.0,
    };
    for idx in 0..grid.len() {
        let t = heat_balance(
            current.at(idx),
            material.point(idx),
            grad_k.at(idx),
            curl_b.at(idx),
            de_dt.at(idx),
            c,
        )?;
        total = total.add(&t);
    }
    Ok(HeatBalanceTerms {
        joule: total.joule * vol,
        thomson: total.thomson * vol,
        curl_term: total.curl_term * vol,
        displacement_term: total.displacement_term * vol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomsonResult {
    /// Net heat exchanged with the reservoirs per unit time and volume.
    pub dq_dt: f64,
    /// Thomson specific heat `−(c/4πσ)(dT/dK)`.
    pub h_t: f64,
}

pub fn thomson_coefficient(material: MaterialPoint, c: f64) -> Result<f64> {
    material.check()?;
    Ok(-c / (4.0 * PI * material.sigma) * material.dtdk)
}

/// `dQ/dt = J²/σ − h_T J·grad K`.
pub fn thomson_heat(
    current: [f64; 3],
    grad_k: [f64; 3],
    material: MaterialPoint,
    c: f64,
) -> Result<ThomsonResult> {
    let h_t = thomson_coefficient(material, c)?;
    Ok(ThomsonResult {
        dq_dt: dot(current, current) / material.sigma - h_t * dot(current, grad_k),
        h_t,
    })
}

/// A point held in contact with heat reservoirs: `∂E/∂t = 0` and the
/// circulation of `B` perpendicular to the current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThomsonScenario {
    pub current: [f64; 3],
    pub grad_k: [f64; 3],
    /// Must satisfy `J·curl B = 0`; its component along `J` is removed.
    pub curl_b: [f64; 3],
    pub material: MaterialPoint,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReversalOutcome {
    pub dq_forward: f64,
    pub dq_reversed: f64,
    pub h_t_estimate: f64,
    pub h_t_formula: f64,
}

fn perpendicular_part(v: [f64; 3], to: [f64; 3]) -> [f64; 3] {
    let n2 = dot(to, to);
    if n2 == 0.0 {
        return v;
    }
    let s = dot(v, to) / n2;
    [v[0] - s * to[0], v[1] - s * to[1], v[2] - s * to[2]]
}

/// Heat exchanged with the reservoirs: with the curl and displacement terms
/// switched off, the balance no longer closes and its sum is the heat that
/// must flow out.
fn exchanged_heat(s: &ThomsonScenario, current: [f64; 3]) -> Result<f64> {
    let curl_b = perpendicular_part(s.curl_b, current);
    Ok(heat_balance(current, s.material, s.grad_k, curl_b, [0.0; 3], s.c)?.sum())
}

/// Runs the scenario with `J` and `−J` and isolates the reversible part:
/// `h_T = −(dQ₊ − dQ₋) / (2 J·grad K)`.
pub fn thomson_reversal_experiment(s: &ThomsonScenario) -> Result<ReversalOutcome> {
    let jg = dot(s.current, s.grad_k);
    if jg == 0.0 {
        return Err(invalid(
            "current",
            "J·grad K = 0, the reversible heat cannot be isolated",
        ));
    }
    let reversed = s.current.map(|v| -v);
    let dq_forward = exchanged_heat(s, s.current)?;
    let dq_reversed = exchanged_heat(s, reversed)?;
    Ok(ReversalOutcome {
        dq_forward,
        dq_reversed,
        h_t_estimate: -(dq_forward - dq_reversed) / (2.0 * jg),
        h_t_formula: thomson_coefficient(s.material, s.c)?,
    })
}

/// Smoothed step `T(x) = T₀ + ΔT (1 + tanh((x − x₀)/w)) / 2` at the middle
/// of a 1-D line of `n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeebeckProfile {
    pub base: f64,
    pub jump: f64,
    pub width: f64,
    pub cells: usize,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct SeebeckResult {
    pub positions: Vec<f64>,
    pub temporal: Vec<f64>,
    pub e_t: Vec<f64>,
    /// Asymptotic `E_T` beyond the step; the probe feels `q·kick`.
    pub kick: f64,
}

/// Comoving 1-D model of a charge crossing a jump in `T` at speed `v`.
///
/// Along the trajectory `(1/c)∂T/∂t = (v/c) dT/dx`; integrating
/// `dE_T/dx = (v/c) dT/dx` from the far left gives
/// `E_T(x) = (v/c)(T(x) − T(−∞))`, using cell-edge differences so the sum
/// telescopes.
pub fn seebeck_jump(profile: &SeebeckProfile, v: f64, c: f64) -> Result<SeebeckResult> {
    if !(c.is_finite() && c > 0.0) {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    if !(v.abs() < c) {
        return Err(invalid(
            "v",
            format!("|v| = {} must be below c = {c}", v.abs()),
        ));
    }
    let grid = Grid::line(profile.cells, profile.length)?;
    let dx = grid.dx;
    if !(profile.width >= 4.0 * dx) {
        return Err(invalid(
            "width",
            format!(
                "step of width {} spans fewer than 4 cells of size {dx}",
                profile.width
            ),
        ));
    }
    let x0 = 0.5 * profile.length;
    let positions: Vec<f64> = (0..profile.cells).map(|i| i as f64 * dx).collect();
    let temporal: Vec<f64> = positions
        .iter()
        .map(|&x| profile.base + 0.5 * profile.jump * (1.0 + ((x - x0) / profile.width).tanh()))
        .collect();
    let beta = v / c;
    let mut e_t = Vec::with_capacity(profile.cells);
    let mut acc = 0.0;
    e_t.push(0.0);
    for w in temporal.windows(2) {
        // edge slope (T[i+1] − T[i])/Δ integrated over one cell
        acc += beta * (w[1] - w[0]);
        e_t.push(acc);
    }
    let kick = *e_t.last().expect("at least 4 cells");
    Ok(SeebeckResult {
        positions,
        temporal,
        e_t,
        kick,
    })
}

/// Radial `E_T` around a ball of radius `R` whose temperature changes at the
/// uniform rate `K̇`, from Gauss's theorem applied to `div E_T = (1/c)Ṫ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatedBall {
    pub radius: f64,
    pub dtdk: f64,
    pub kdot: f64,
    pub c: f64,
}

impl HeatedBall {
    pub fn new(radius: f64, dtdk: f64, kdot: f64, c: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("radius", format!("must be positive, got {radius}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid("c", format!("must be positive, got {c}")));
        }
        Ok(Self {
            radius,
            dtdk,
            kdot,
            c,
        })
    }

    /// `(1/c)(dT/dK)K̇` inside the ball.
    pub fn source_density(&self) -> f64 {
        self.dtdk * self.kdot / self.c
    }

    pub fn field_at(&self, r: f64) -> f64 {
        let r = r.abs();
        let s = self.source_density() / 3.0;
        if r <= self.radius {
            s * r
        } else {
            s * self.radius.powi(3) / (r * r)
        }
    }
}

pub fn heated_ball_field(radius: f64, dtdk: f64, kdot: f64, c: f64) -> Result<HeatedBall> {
    HeatedBall::new(radius, dtdk, kdot, c)
}

#[cfg(test)]
mod tests;
