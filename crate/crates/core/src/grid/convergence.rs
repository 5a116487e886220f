//! Grid-refinement harness for the stencil operators.

use super::{curl, div, grad, laplacian, Grid, ScalarField, VectorField};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorTag {
    Identity,
    Grad,
    Div,
    Curl,
    Laplacian,
}

/// Analytic test functions on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticCase {
    /// `s = sin 2πx · cos 2πy + sin 2πz`
    TrigScalar,
    /// `v = (cos 2πx + sin 2πy, cos 2πy + sin 2πz, cos 2πz + sin 2πx)`
    TrigVector,
    /// `s = x²`; not periodic, so it cannot be refined on the torus.
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    /// Every error was exactly zero.
    Exact,
    Measured(f64),
}

impl Order {
    pub fn value(self) -> f64 {
        match self {
            Order::Exact => f64::INFINITY,
            Order::Measured(p) => p,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub spacings: Vec<f64>,
    /// L2 error against the analytic result at each resolution.
    pub errors: Vec<f64>,
    pub order: Order,
}

fn trig_scalar(p: [f64; 3]) -> f64 {
    (TAU * p[0]).sin() * (TAU * p[1]).cos() + (TAU * p[2]).sin()
}

fn trig_scalar_grad(p: [f64; 3]) -> [f64; 3] {
    [
        TAU * (TAU * p[0]).cos() * (TAU * p[1]).cos(),
        -TAU * (TAU * p[0]).sin() * (TAU * p[1]).sin(),
        TAU * (TAU * p[2]).cos(),
    ]
}

fn trig_scalar_laplacian(p: [f64; 3]) -> f64 {
    -2.0 * TAU * TAU * (TAU * p[0]).sin() * (TAU * p[1]).cos() - TAU * TAU * (TAU * p[2]).sin()
}

fn trig_vector(p: [f64; 3]) -> [f64; 3] {
    let (c, s) = (|u: f64| (TAU * u).cos(), |u: f64| (TAU * u).sin());
    [c(p[0]) + s(p[1]), c(p[1]) + s(p[2]), c(p[2]) + s(p[0])]
}

fn trig_vector_div(p: [f64; 3]) -> f64 {
    -TAU * ((TAU * p[0]).sin() + (TAU * p[1]).sin() + (TAU * p[2]).sin())
}

fn trig_vector_curl(p: [f64; 3]) -> [f64; 3] {
    let c = |u: f64| (TAU * u).cos();
    [-TAU * c(p[2]), -TAU * c(p[0]), -TAU * c(p[1])]
}

/// L2 error of `op` applied to `case` on an `n³` unit torus.
fn error_at(op: OperatorTag, case: AnalyticCase, n: usize) -> Result<f64> {
    let grid = Grid::cube(n, 1.0)?;
    let mismatch =
        || Error::Convergence(format!("operator {op:?} does not apply to case {case:?}"));
    let err = match (op, case) {
        (_, AnalyticCase::Polynomial) => {
            return Err(Error::Convergence(
                "polynomial case is not periodic and is unavailable on the torus".into(),
            ))
        }
        (OperatorTag::Identity, AnalyticCase::TrigScalar) => {
            let s = ScalarField::from_fn(grid, trig_scalar);
            s.sub(&ScalarField::from_fn(grid, trig_scalar)).l2()
        }
        (OperatorTag::Identity, AnalyticCase::TrigVector) => {
            let v = VectorField::from_fn(grid, trig_vector);
            v.sub(&VectorField::from_fn(grid, trig_vector)).l2()
        }
        (OperatorTag::Grad, AnalyticCase::TrigScalar) => {
            let s = ScalarField::from_fn(grid, trig_scalar);
            grad(&s)
                .sub(&VectorField::from_fn(grid, trig_scalar_grad))
                .l2()
        }
        (OperatorTag::Laplacian, AnalyticCase::TrigScalar) => {
            let s = ScalarField::from_fn(grid, trig_scalar);
            laplacian(&s)
                .sub(&ScalarField::from_fn(grid, trig_scalar_laplacian))
                .l2()
        }
        (OperatorTag::Div, AnalyticCase::TrigVector) => {
            let v = VectorField::from_fn(grid, trig_vector);
            div(&v)
                .sub(&ScalarField::from_fn(grid, trig_vector_div))
                .l2()
        }
        (OperatorTag::Curl, AnalyticCase::TrigVector) => {
            let v = VectorField::from_fn(grid, trig_vector);
            curl(&v)
                .sub(&VectorField::from_fn(grid, trig_vector_curl))
                .l2()
        }
        _ => return Err(mismatch()),
    };
    Ok(err)
}

/// Least-squares slope of `ln(error)` against `ln(Δ)`.
pub fn fit_order(spacings: &[f64], errors: &[f64]) -> Order {
    if errors.iter().all(|&e| e == 0.0) {
        return Order::Exact;
    }
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Order::Measured(sxy / sxx)
}

/// Measures the convergence order of `op` on `case` over the given
/// resolutions (cells per axis of a unit cube).
pub fn convergence_order(
    op: OperatorTag,
    case: AnalyticCase,
    resolutions: &[usize],
) -> Result<ConvergenceReport> {
    if resolutions.len() < 3 {
        return Err(Error::Convergence(format!(
            "need at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    if let Some(&n) = resolutions.iter().find(|&&n| n < 8) {
        return Err(Error::Convergence(format!(
            "resolution {n} is below the minimum of 8"
        )));
    }
    let errors = resolutions
        .iter()
        .map(|&n| error_at(op, case, n))
        .collect::<Result<Vec<_>>>()?;
    let spacings: Vec<f64> = resolutions.iter().map(|&n| 1.0 / n as f64).collect();
    let order = fit_order(&spacings, &errors);
    Ok(ConvergenceReport {
        resolutions: resolutions.to_vec(),
        spacings,
        errors,
        order,
    })
}
