//! Transform-based periodic solves and the sharp low-pass filter.
//!
//! The Poisson solve inverts the discrete `div∘grad` operator itself, whose
//! Fourier symbol is `−Σ sin²(2π m_a / n_a) / Δ_a²`. That symbol vanishes on
//! the mean mode and on every mode whose wavenumbers are all 0 or Nyquist;
//! those components are not in the range of the discrete divergence and are
//! dropped from the solution (their source content is reported).

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Relative size of the source mean, against its RMS, treated as zero.
pub const MEAN_TOLERANCE: f64 = 1e-10;

fn transform_axis(grid: &Grid, data: &mut [Complex64], axis: usize, inverse: bool) {
    let [nx, ny, _] = grid.dims();
    let n = grid.dims()[axis];
    if n == 1 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    match axis {
        0 => {
            for row in data.chunks_mut(nx) {
                fft.process(row);
            }
        }
        _ => {
            let stride = if axis == 1 { nx } else { nx * ny };
            let lines: Vec<usize> = (0..grid.len())
                .filter(|&idx| grid.coords(idx)[axis] == 0)
                .collect();
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for start in lines {
                for (m, b) in buf.iter_mut().enumerate() {
                    *b = data[start + m * stride];
                }
                fft.process(&mut buf);
                for (m, b) in buf.iter().enumerate() {
                    data[start + m * stride] = *b;
                }
            }
        }
    }
}

/// Forward 3-D DFT (unnormalised).
pub fn forward(field: &ScalarField) -> Vec<Complex64> {
    let grid = *field.grid();
    let mut data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    for axis in 0..3 {
        transform_axis(&grid, &mut data, axis, false);
    }
    data
}

/// Inverse 3-D DFT including the `1/N` normalisation; keeps the real part.
pub fn inverse(grid: Grid, mut data: Vec<Complex64>) -> ScalarField {
    for axis in 0..3 {
        transform_axis(&grid, &mut data, axis, true);
    }
    let scale = 1.0 / grid.len() as f64;
    let values = data.iter().map(|c| c.re * scale).collect();
    ScalarField::from_vec(grid, values).expect("transform preserves length")
}

/// Signed wavenumber index of DFT bin `m` out of `n`.
fn signed_mode(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

fn is_null_axis(m: usize, n: usize) -> bool {
    m == 0 || (n % 2 == 0 && m == n / 2)
}

/// Fourier symbol of the discrete `div∘grad` for bin `(mx, my, mz)`.
fn laplacian_symbol(grid: &Grid, bins: [usize; 3]) -> f64 {
    let dims = grid.dims();
    let h = grid.spacing();
    (0..3)
        .map(|a| {
            if dims[a] == 1 {
                0.0
            } else {
                let s = (std::f64::consts::TAU * bins[a] as f64 / dims[a] as f64).sin() / h[a];
                -s * s
            }
        })
        .sum()
}

#[derive(Debug, Clone)]
pub struct PoissonSolution {
    /// Zero-mean solution of `div(grad φ) = source`.
    pub potential: ScalarField,
    /// L2 norm of the source content on non-mean null modes that was dropped.
    pub dropped_null_l2: f64,
}

/// Solves `div(grad φ) = source` on the periodic grid.
pub fn solve_poisson(source: &ScalarField) -> Result<PoissonSolution> {
    let grid = *source.grid();
    let mean = source.mean();
    let rms = source.rms();
    if mean.abs() > MEAN_TOLERANCE * rms.max(f64::MIN_POSITIVE) && mean != 0.0 {
        return Err(Error::NonZeroMeanSource { mean });
    }
    let mut hat = forward(source);
    let dims = grid.dims();
    let mut dropped = 0.0;
    for (idx, c) in hat.iter_mut().enumerate() {
        let bins = grid.coords(idx);
        let null = (0..3).all(|a| is_null_axis(bins[a], dims[a]));
        if null {
            if bins != [0, 0, 0] {
                dropped += c.norm_sqr();
            }
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= laplacian_symbol(&grid, bins);
        }
    }
    // Parseval: Σ|f|² = Σ|f̂|² / N
    let dropped_null_l2 = (dropped / grid.len() as f64 * grid.cell_volume()).sqrt();
    Ok(PoissonSolution {
        potential: inverse(grid, hat),
        dropped_null_l2,
    })
}

/// Sharp low-pass: zeroes every mode with `|m_a| > cutoff · n_a / 2` on any axis.
pub fn low_pass(field: &ScalarField, cutoff: f64) -> ScalarField {
    let grid = *field.grid();
    let dims = grid.dims();
    let mut hat = forward(field);
    for (idx, c) in hat.iter_mut().enumerate() {
        let bins = grid.coords(idx);
        let cut = (0..3).any(|a| {
            let limit = cutoff * dims[a] as f64 / 2.0;
            signed_mode(bins[a], dims[a]).unsigned_abs() as f64 > limit
        });
        if cut {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    inverse(grid, hat)
}
