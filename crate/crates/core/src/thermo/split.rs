//! Driving/working split of `E` and the matching split of `B`.
//!
//! `E_T` is the part of the electric field sourced by `(1/c)∂T/∂t` alone.
//! Only its divergence is fixed, so the gradient representative with zero
//! mean is taken: `E_T = grad φ`, `∇²φ = (1/c)∂T/∂t`, with `∇²` the discrete
//! `div∘grad` so that `div E_T` reproduces the source to rounding.
//!
//! `B_T` is fixed by `curl B_T = (1/c)∂E_T/∂t + grad T` plus `div B_T = 0` and
//! zero mean. Taking the curl once more gives `−∇²B_T = curl R`, solved per
//! component. The curl system only has a solution when `div R = 0`; since
//! `R` is itself a gradient, that reduces to `(1/c²)∂²T/∂t² + ∇²T = 0`, and
//! then `R = 0`. Otherwise the mismatch is reported.

use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::{curl, div, grad, Grid, ScalarField, VectorField};
use crate::spectral::solve_poisson;

/// Time derivatives of `T` at the state's instant.
#[derive(Debug, Clone)]
pub struct TemporalHistory {
    pub rate: ScalarField,
    pub second_rate: Option<ScalarField>,
}

impl TemporalHistory {
    /// `T` not changing in time.
    pub fn frozen(grid: Grid) -> Self {
        Self {
            rate: ScalarField::zeros(grid),
            second_rate: Some(ScalarField::zeros(grid)),
        }
    }

    /// Centered differences of three samples spaced `dt`.
    pub fn from_samples(
        prev: &ScalarField,
        current: &ScalarField,
        next: &ScalarField,
        dt: f64,
    ) -> Result<Self> {
        prev.grid().ensure_same(current.grid())?;
        prev.grid().ensure_same(next.grid())?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(crate::error::invalid(
                "dt",
                format!("must be positive, got {dt}"),
            ));
        }
        Ok(Self {
            rate: next.sub(prev).scale(0.5 / dt),
            second_rate: Some(
                next.sub(&current.scale(2.0))
                    .add(prev)
                    .scale(1.0 / (dt * dt)),
            ),
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rate: self.rate.scale(s),
            second_rate: self.second_rate.as_ref().map(|f| f.scale(s)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TemporalSplit {
    pub e_t: VectorField,
    /// `(1/c)∂T/∂t`
    pub source: ScalarField,
    /// `‖div E_T − (1/c)∂T/∂t‖`
    pub div_residual_l2: f64,
    pub curl_linf: f64,
    /// Source content on modes the discrete divergence cannot reach.
    pub dropped_null_l2: f64,
}

impl TemporalSplit {
    /// The working field `E − E_T`.
    pub fn working_field(&self, state: &FieldState) -> VectorField {
        state.electric.sub(&self.e_t)
    }
}

fn gradient_solution(source: &ScalarField) -> Result<(VectorField, f64)> {
    if source.linf() == 0.0 {
        return Ok((VectorField::zeros(*source.grid()), 0.0));
    }
    let sol = solve_poisson(source)?;
    Ok((grad(&sol.potential), sol.dropped_null_l2))
}

pub fn split_et(state: &FieldState, history: &TemporalHistory) -> Result<TemporalSplit> {
    state.grid().ensure_same(history.rate.grid())?;
    let source = history.rate.scale(1.0 / state.c);
    let (e_t, dropped_null_l2) = gradient_solution(&source)?;
    Ok(TemporalSplit {
        div_residual_l2: div(&e_t).sub(&source).l2(),
        curl_linf: curl(&e_t).linf(),
        e_t,
        source,
        dropped_null_l2,
    })
}

#[derive(Debug, Clone)]
pub struct DhSplit {
    /// `E − E_T`
    pub d: VectorField,
    /// `B − B_T`
    pub h: VectorField,
    pub b_t: VectorField,
    /// `‖div R‖` for `R = (1/c)∂E_T/∂t + grad T`.
    pub div_source_l2: f64,
    /// `‖curl B_T − R‖`
    pub curl_mismatch_l2: f64,
}

/// Relative size of `‖curl B_T − R‖` against `max(1, ‖R‖)` accepted as solved.
pub const CURL_TOLERANCE: f64 = 1e-10;

pub fn build_dh(
    state: &FieldState,
    split: &TemporalSplit,
    history: &TemporalHistory,
) -> Result<DhSplit> {
    let grid = *state.grid();
    grid.ensure_same(split.e_t.grid())?;
    let second = history
        .second_rate
        .as_ref()
        .ok_or(Error::MissingTimeDerivative {
            needed: 2,
            available: 1,
        })?;
    grid.ensure_same(second.grid())?;
    let inv_c = 1.0 / state.c;
    // ∂E_T/∂t by linearity of the split
    let (de_t_dt, _) = gradient_solution(&second.scale(inv_c))?;
    let rhs = de_t_dt.scale(inv_c).add(&grad(&state.temporal));

    let curl_rhs = curl(&rhs);
    let mut comps = Vec::with_capacity(3);
    for a in 0..3 {
        let src = curl_rhs.component_field(a).scale(-1.0);
        let comp = if src.linf() == 0.0 {
            ScalarField::zeros(grid)
        } else {
            solve_poisson(&src)?.potential
        };
        comps.push(comp.into_vec());
    }
    let [bx, by, bz]: [Vec<f64>; 3] = comps.try_into().expect("three components");
    let b_t = VectorField::from_vecs(grid, [bx, by, bz])?;

    let div_source_l2 = div(&rhs).l2();
    let curl_mismatch_l2 = curl(&b_t).sub(&rhs).l2();
    if curl_mismatch_l2 > CURL_TOLERANCE * rhs.l2().max(1.0) {
        return Err(Error::IncompatibleCurlSource {
            div_norm: div_source_l2,
            mismatch: curl_mismatch_l2,
        });
    }
    Ok(DhSplit {
        d: split.working_field(state),
        h: state.magnetic.sub(&b_t),
        b_t,
        div_source_l2,
        curl_mismatch_l2,
    })
}
