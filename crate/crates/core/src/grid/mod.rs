//! Uniform periodic grids and the fields sampled on them.
//!
//! Storage is x-fastest: cell `(i, j, k)` lives at `i + nx * (j + ny * k)`.
//! An axis with a single cell is degenerate: derivatives along it vanish,
//! which is how 1-D (`n×1×1`) and 2-D (`n×m×1`) problems are expressed.

mod convergence;
mod ops;

pub use convergence::{convergence_order, AnalyticCase, ConvergenceReport, OperatorTag, Order};
pub(crate) use ops::partial_slice;
pub use ops::{curl, div, grad, laplacian, partial};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Smallest cell count on a non-degenerate axis.
pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, nz: usize, dx: f64, dy: f64, dz: f64) -> Result<Self> {
        let grid = Self {
            nx,
            ny,
            nz,
            dx,
            dy,
            dz,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `n×n×n` cube of side `length`.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        let d = length / n as f64;
        Self::new(n, n, n, d, d, d)
    }

    /// `n×1×1` line of length `length`; degenerate axes have unit thickness,
    /// so integrals are per unit cross-section.
    pub fn line(n: usize, length: f64) -> Result<Self> {
        Self::new(n, 1, 1, length / n as f64, 1.0, 1.0)
    }

    /// `nx×ny×1` plane.
    pub fn plane(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        let dx = lx / nx as f64;
        let dy = ly / ny as f64;
        Self::new(nx, ny, 1, dx, dy, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny), ("nz", self.nz)] {
            if n == 0 || (n > 1 && n < MIN_CELLS) {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n}: an axis needs 1 cell (degenerate) or at least {MIN_CELLS}"
                )));
            }
        }
        for (name, d) in [("dx", self.dx), ("dy", self.dy), ("dz", self.dz)] {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {d} must be positive and finite"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn spacing(&self) -> [f64; 3] {
        [self.dx, self.dy, self.dz]
    }

    /// Periodic box lengths.
    pub fn lengths(&self) -> [f64; 3] {
        [
            self.nx as f64 * self.dx,
            self.ny as f64 * self.dy,
            self.nz as f64 * self.dz,
        ]
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    pub fn is_degenerate(&self, axis: usize) -> bool {
        self.dims()[axis] == 1
    }

    /// Number of non-degenerate axes.
    pub fn active_dims(&self) -> usize {
        (0..3).filter(|&a| !self.is_degenerate(a)).count()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.nx;
        let rest = idx / self.nx;
        [i, rest % self.ny, rest / self.ny]
    }

    /// Physical position of a cell sample; cell `(0,0,0)` sits at the origin.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.coords(idx);
        [i as f64 * self.dx, j as f64 * self.dy, k as f64 * self.dz]
    }

    /// Smallest spacing over the non-degenerate axes (all axes if none is active).
    pub fn min_spacing(&self) -> f64 {
        let h = self.spacing();
        let active = (0..3).filter(|&a| !self.is_degenerate(a)).map(|a| h[a]);
        let m = active.fold(f64::INFINITY, f64::min);
        if m.is_finite() {
            m
        } else {
            h.iter().copied().fold(f64::INFINITY, f64::min)
        }
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// One real value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            data: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self {
            grid,
            data: vec![value; grid.len()],
        }
    }

    pub fn from_vec(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: data.len(),
            });
        }
        Ok(Self { grid, data })
    }

    /// Samples `f` at every cell position.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let data = (0..grid.len()).map(|idx| f(grid.position(idx))).collect();
        Self { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "scalar fields on different grids");
        Self {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.grid, other.grid, "scalar fields on different grids");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    /// Sequential sum in storage order.
    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.data.len() as f64
    }

    /// `sqrt(Σ v² ΔV)`
    pub fn l2(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Root mean square over cells.
    pub fn rms(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() / self.data.len() as f64).sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ a·b ΔV`
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "scalar fields on different grids");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Three real values per cell, stored as three component arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    comps: [Vec<f64>; 3],
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            comps: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    pub fn from_components(x: ScalarField, y: ScalarField, z: ScalarField) -> Result<Self> {
        x.grid.ensure_same(&y.grid)?;
        x.grid.ensure_same(&z.grid)?;
        Ok(Self {
            grid: x.grid,
            comps: [x.data, y.data, z.data],
        })
    }

    pub fn from_vecs(grid: Grid, comps: [Vec<f64>; 3]) -> Result<Self> {
        for c in &comps {
            if c.len() != grid.len() {
                return Err(Error::LengthMismatch {
                    expected: grid.len(),
                    actual: c.len(),
                });
            }
        }
        Ok(Self { grid, comps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let n = grid.len();
        let mut comps = [
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        ];
        for idx in 0..n {
            let v = f(grid.position(idx));
            for a in 0..3 {
                comps[a].push(v[a]);
            }
        }
        Self { grid, comps }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn component(&self, axis: usize) -> &[f64] {
        &self.comps[axis]
    }

    pub fn component_mut(&mut self, axis: usize) -> &mut [f64] {
        &mut self.comps[axis]
    }

    /// Copies one component out as a scalar field.
    pub fn component_field(&self, axis: usize) -> ScalarField {
        ScalarField {
            grid: self.grid,
            data: self.comps[axis].clone(),
        }
    }

    pub fn into_components(self) -> [ScalarField; 3] {
        let grid = self.grid;
        let [x, y, z] = self.comps;
        [
            ScalarField { grid, data: x },
            ScalarField { grid, data: y },
            ScalarField { grid, data: z },
        ]
    }

    pub fn at(&self, idx: usize) -> [f64; 3] {
        [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]]
    }

    pub fn set(&mut self, idx: usize, v: [f64; 3]) {
        for a in 0..3 {
            self.comps[a][idx] = v[a];
        }
    }

    pub fn map_components(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        Self {
            grid: self.grid,
            comps: [f(&self.comps[0]), f(&self.comps[1]), f(&self.comps[2])],
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "vector fields on different grids");
        let zip = |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect();
        Self {
            grid: self.grid,
            comps: [
                zip(&self.comps[0], &other.comps[0]),
                zip(&self.comps[1], &other.comps[1]),
                zip(&self.comps[2], &other.comps[2]),
            ],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_components(|c| c.iter().map(|v| v * s).collect())
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.grid, other.grid, "vector fields on different grids");
        for a in 0..3 {
            for (x, y) in self.comps[a].iter_mut().zip(&other.comps[a]) {
                *x += alpha * y;
            }
        }
    }

    /// `Σ |v|² ΔV`, summed component-major in storage order.
    pub fn norm_squared_integral(&self) -> f64 {
        let s: f64 = self
            .comps
            .iter()
            .map(|c| c.iter().map(|v| v * v).sum::<f64>())
            .sum();
        s * self.grid.cell_volume()
    }

    pub fn l2(&self) -> f64 {
        self.norm_squared_integral().sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "vector fields on different grids");
        let s: f64 = (0..3)
            .map(|a| {
                self.comps[a]
                    .iter()
                    .zip(&other.comps[a])
                    .map(|(x, y)| x * y)
                    .sum::<f64>()
            })
            .sum();
        s * self.grid.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(4, 4, 4, 1.0, 1.0, 1.0).is_ok());
        assert!(Grid::new(16, 1, 1, 0.1, 0.1, 0.1).is_ok());
        assert!(Grid::new(3, 4, 4, 1.0, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 0, 4, 1.0, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 4, 4, 0.0, 1.0, 1.0).is_err());
        assert!(Grid::new(4, 4, 4, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(5, 4, 6, 1.0, 1.0, 1.0).unwrap();
        for idx in 0..g.len() {
            let [i, j, k] = g.coords(idx);
            assert_eq!(g.index(i, j, k), idx);
        }
        assert_eq!(g.index(1, 0, 0), 1);
        assert_eq!(g.index(0, 1, 0), 5);
        assert_eq!(g.index(0, 0, 1), 20);
    }

    #[test]
    fn length_checks() {
        let g = Grid::line(8, 1.0).unwrap();
        assert!(ScalarField::from_vec(g, vec![0.0; 7]).is_err());
        assert!(VectorField::from_vecs(g, [vec![0.0; 8], vec![0.0; 8], vec![0.0; 9]]).is_err());
    }

    #[test]
    fn norms() {
        let g = Grid::line(4, 4.0).unwrap();
        let s = ScalarField::from_vec(g, vec![1.0, -2.0, 2.0, 0.0]).unwrap();
        assert_eq!(s.linf(), 2.0);
        assert_eq!(s.sum(), 1.0);
        assert_eq!(s.l2(), 3.0);
        assert_eq!(s.min(), -2.0);
    }
}
