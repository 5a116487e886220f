//! Second-order centered differences with periodic wrap.
//!
//! Every operator is built from the single stencil `(f[i+1] − f[i−1]) / 2Δ`.
//! Shifts along different axes commute, so `curl∘grad` and `div∘curl`
//! vanish up to rounding, and the laplacian is exactly `div∘grad`
//! (a stride-two stencil, with the usual odd-even decoupling).

use super::{Grid, ScalarField, VectorField};
use rayon::prelude::*;

/// Centered first difference of raw grid data along `axis`.
pub(crate) fn partial_slice(grid: &Grid, data: &[f64], axis: usize) -> Vec<f64> {
    let n = grid.len();
    let mut out = vec![0.0; n];
    if grid.is_degenerate(axis) {
        return out;
    }
    let [nx, ny, nz] = grid.dims();
    let inv = 0.5 / grid.spacing()[axis];
    out.par_chunks_mut(nx).enumerate().for_each(|(row, dst)| {
        let j = row % ny;
        let k = row / ny;
        let base = nx * row;
        match axis {
            0 => {
                for i in 0..nx {
                    let ip = if i + 1 == nx { 0 } else { i + 1 };
                    let im = if i == 0 { nx - 1 } else { i - 1 };
                    dst[i] = (data[base + ip] - data[base + im]) * inv;
                }
            }
            1 => {
                let jp = if j + 1 == ny { 0 } else { j + 1 };
                let jm = if j == 0 { ny - 1 } else { j - 1 };
                let bp = nx * (jp + ny * k);
                let bm = nx * (jm + ny * k);
                for i in 0..nx {
                    dst[i] = (data[bp + i] - data[bm + i]) * inv;
                }
            }
            _ => {
                let kp = if k + 1 == nz { 0 } else { k + 1 };
                let km = if k == 0 { nz - 1 } else { k - 1 };
                let bp = nx * (j + ny * kp);
                let bm = nx * (j + ny * km);
                for i in 0..nx {
                    dst[i] = (data[bp + i] - data[bm + i]) * inv;
                }
            }
        }
    });
    out
}

/// Centered derivative of a scalar field along one axis.
pub fn partial(s: &ScalarField, axis: usize) -> ScalarField {
    let grid = *s.grid();
    ScalarField::from_vec(grid, partial_slice(&grid, s.values(), axis)).expect("same grid length")
}

pub fn grad(s: &ScalarField) -> VectorField {
    let grid = *s.grid();
    let d = |a| partial_slice(&grid, s.values(), a);
    VectorField::from_vecs(grid, [d(0), d(1), d(2)]).expect("same grid length")
}

pub fn div(v: &VectorField) -> ScalarField {
    let grid = *v.grid();
    let dx = partial_slice(&grid, v.component(0), 0);
    let dy = partial_slice(&grid, v.component(1), 1);
    let dz = partial_slice(&grid, v.component(2), 2);
    let data = dx
        .iter()
        .zip(&dy)
        .zip(&dz)
        .map(|((a, b), c)| a + b + c)
        .collect();
    ScalarField::from_vec(grid, data).expect("same grid length")
}

pub fn curl(v: &VectorField) -> VectorField {
    let grid = *v.grid();
    let d = |comp: usize, axis: usize| partial_slice(&grid, v.component(comp), axis);
    let diff = |a: Vec<f64>, b: Vec<f64>| a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>();
    let cx = diff(d(2, 1), d(1, 2));
    let cy = diff(d(0, 2), d(2, 0));
    let cz = diff(d(1, 0), d(0, 1));
    VectorField::from_vecs(grid, [cx, cy, cz]).expect("same grid length")
}

/// `div(grad(s))` composed from the same centered stencils.
pub fn laplacian(s: &ScalarField) -> ScalarField {
    div(&grad(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_scalar(grid: Grid, seed: u64) -> ScalarField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        ScalarField::from_vec(grid, data).unwrap()
    }

    fn random_vector(grid: Grid, seed: u64) -> VectorField {
        let [x, y, z] = [0, 1, 2].map(|a| random_scalar(grid, seed * 3 + a));
        VectorField::from_components(x, y, z).unwrap()
    }

    fn grid3() -> Grid {
        Grid::new(8, 6, 5, 0.3, 0.25, 0.4).unwrap()
    }

    #[test]
    fn constants_have_zero_derivatives() {
        let g = grid3();
        let s = ScalarField::constant(g, 3.5);
        assert_eq!(grad(&s).linf(), 0.0);
        let v = VectorField::from_fn(g, |_| [1.0, -2.0, 0.5]);
        assert_eq!(div(&v).linf(), 0.0);
        assert_eq!(curl(&v).linf(), 0.0);
    }

    #[test]
    fn sine_gradient_is_second_order() {
        let err = |n: usize| {
            let g = Grid::line(n, 1.0).unwrap();
            let s = ScalarField::from_fn(g, |p| (2.0 * PI * p[0]).sin());
            let exact = ScalarField::from_fn(g, |p| 2.0 * PI * (2.0 * PI * p[0]).cos());
            grad(&s).component_field(0).sub(&exact).l2()
        };
        let ratio = err(32) / err(64);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn linear_polynomial_is_exact_in_interior() {
        // (x+h)² − (x−h)² = 4xh, so the stencil is exact for quadratics away from the wrap
        let g = Grid::line(16, 1.6).unwrap();
        let s = ScalarField::from_fn(g, |p| p[0] * p[0]);
        let gx = grad(&s).component_field(0);
        for i in 1..15 {
            let x = g.position(i)[0];
            assert!((gx.values()[i] - 2.0 * x).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_axes_give_zero() {
        let g = Grid::plane(8, 8, 1.0, 1.0).unwrap();
        let s = random_scalar(g, 1);
        assert_eq!(partial(&s, 2).linf(), 0.0);
    }

    #[test]
    fn curl_grad_and_div_curl_vanish() {
        let g = grid3();
        for seed in 0..5 {
            let s = random_scalar(g, seed);
            assert!(curl(&grad(&s)).linf() <= 1e-12);
            let v = random_vector(g, seed + 100);
            assert!(div(&curl(&v)).linf() <= 1e-12);
        }
    }

    #[test]
    fn periodic_sum_of_divergence_is_zero() {
        let g = grid3();
        let v = random_vector(g, 7);
        assert!(div(&v).sum().abs() <= 1e-11);
    }

    #[test]
    fn summation_by_parts() {
        let g = grid3();
        let t = random_scalar(g, 3);
        let e = random_vector(g, 4);
        let lhs = t.inner(&div(&e));
        let rhs = -e.inner(&grad(&t));
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-300));
    }

    #[test]
    fn curl_is_symmetric_under_periodic_sum() {
        let g = grid3();
        let a = random_vector(g, 11);
        let b = random_vector(g, 12);
        let lhs = a.inner(&curl(&b));
        let rhs = b.inner(&curl(&a));
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn operators_are_linear() {
        let g = grid3();
        let (s1, s2) = (random_scalar(g, 20), random_scalar(g, 21));
        let alpha = 0.75; // exactly representable, so scaling commutes with the stencil
        let lhs = grad(&s1.scale(alpha).add(&s2));
        let rhs = grad(&s1).scale(alpha).add(&grad(&s2));
        assert!(lhs.sub(&rhs).linf() <= 1e-13);
        let (v1, v2) = (random_vector(g, 22), random_vector(g, 23));
        let lhs = curl(&v1.scale(alpha).add(&v2));
        let rhs = curl(&v1).scale(alpha).add(&curl(&v2));
        assert!(lhs.sub(&rhs).linf() <= 1e-13);
    }

    #[test]
    fn laplacian_is_div_grad() {
        let g = grid3();
        let s = random_scalar(g, 30);
        assert_eq!(laplacian(&s), div(&grad(&s)));
    }
}
