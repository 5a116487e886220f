use crate::error::{invalid, Result};
use crate::field::{fields_from_potential, FieldState, PotentialField};
use crate::grid::{Grid, ScalarField, VectorField};
use std::f64::consts::TAU;

pub fn zero_state(grid: Grid, c: f64) -> FieldState {
    FieldState::zeros(grid, c)
}

fn wavenumber(grid: &Grid, mode: i64) -> Result<f64> {
    if grid.is_degenerate(0) {
        return Err(invalid("grid", "x axis must be resolved"));
    }
    Ok(TAU * mode as f64 / grid.lengths()[0])
}

/// Vacuum wave along x: `E = ŷ a sin(kx)`, `B = ẑ a sin(kx)`, `T = 0`.
/// Travels in +x with speed `c`.
pub fn transverse_wave(grid: Grid, amplitude: f64, mode: i64, c: f64) -> Result<FieldState> {
    let k = wavenumber(&grid, mode)?;
    let e = VectorField::from_fn(grid, |p| [0.0, amplitude * (k * p[0]).sin(), 0.0]);
    let b = VectorField::from_fn(grid, |p| [0.0, 0.0, amplitude * (k * p[0]).sin()]);
    FieldState::new(ScalarField::zeros(grid), e, b, 0.0, c)
}

/// `T = ε sin(kx)` at rest, all else zero.
pub fn scalar_mode(grid: Grid, epsilon: f64, mode: i64, c: f64) -> Result<FieldState> {
    let k = wavenumber(&grid, mode)?;
    let t = ScalarField::from_fn(grid, |p| epsilon * (k * p[0]).sin());
    FieldState::new(
        t,
        VectorField::zeros(grid),
        VectorField::zeros(grid),
        0.0,
        c,
    )
}

/// Gaussian bump of `T` centered in the box, using minimum-image distances
/// on active axes.
pub fn gaussian_t_pulse(grid: Grid, amplitude: f64, width: f64, c: f64) -> Result<FieldState> {
    if !(width > 0.0) {
        return Err(invalid("width", format!("must be positive, got {width}")));
    }
    let l = grid.lengths();
    let t = ScalarField::from_fn(grid, |p| {
        let mut r2 = 0.0;
        for a in 0..3 {
            if grid.is_degenerate(a) {
                continue;
            }
            let mut d = p[a] - 0.5 * l[a];
            d -= l[a] * (d / l[a]).round();
            r2 += d * d;
        }
        amplitude * (-r2 / (2.0 * width * width)).exp()
    });
    FieldState::new(
        t,
        VectorField::zeros(grid),
        VectorField::zeros(grid),
        0.0,
        c,
    )
}

/// Fields of a potential at its jet time.
pub fn from_potential(p: &PotentialField) -> Result<FieldState> {
    Ok(fields_from_potential(p)?.state())
}
