//! Quaternion derivative of the potential and the fields built from it.
//!
//! The operator `d/dr = (1/c)∂t + i∂x + j∂y + k∂z` acts on a quaternion
//! field `X = s + v` from either side. Per cell the action is assembled from
//! the sixteen partials `∂_μ X_ν` weighted by the unit products `e_μ e_ν`
//! (right action) or `e_ν e_μ` (left action), so the sign structure comes
//! straight from [`crate::quaternion::product`].
//!
//! Time information is carried as a [`QuatJet`]: the value and its time
//! derivatives at one instant. Applying `d/dr` consumes one jet order. Since
//! spatial stencils act on each jet level independently, time and space
//! derivatives commute exactly, which is what makes the algebraic identities
//! vanish to rounding on the grid.

mod jet;

pub use jet::QuatJet;

use crate::error::{Error, Result};
use crate::grid::{curl, div, grad, partial_slice, Grid, ScalarField, VectorField};
use crate::quaternion::{product, ProductSide, Quaternion};
use rayon::prelude::*;
use std::f64::consts::PI;

/// One quaternion per cell: scalar part plus 3-vector part.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatField {
    pub scalar: ScalarField,
    pub vector: VectorField,
}

impl QuatField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            scalar: ScalarField::zeros(grid),
            vector: VectorField::zeros(grid),
        }
    }

    pub fn new(scalar: ScalarField, vector: VectorField) -> Result<Self> {
        scalar.grid().ensure_same(vector.grid())?;
        Ok(Self { scalar, vector })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Quaternion) -> Self {
        let cells: Vec<Quaternion> = (0..grid.len()).map(|idx| f(grid.position(idx))).collect();
        Self::from_cells(grid, &cells)
    }

    pub fn from_cells(grid: Grid, cells: &[Quaternion]) -> Self {
        let mut w = Vec::with_capacity(cells.len());
        let mut v = [
            Vec::with_capacity(cells.len()),
            Vec::with_capacity(cells.len()),
            Vec::with_capacity(cells.len()),
        ];
        for q in cells {
            w.push(q.w);
            v[0].push(q.x);
            v[1].push(q.y);
            v[2].push(q.z);
        }
        Self {
            scalar: ScalarField::from_vec(grid, w).expect("cell count matches grid"),
            vector: VectorField::from_vecs(grid, v).expect("cell count matches grid"),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.scalar.grid()
    }

    pub fn at(&self, idx: usize) -> Quaternion {
        let v = self.vector.at(idx);
        Quaternion::new(self.scalar.values()[idx], v[0], v[1], v[2])
    }

    /// Component `ν` (0 = scalar, 1..=3 = i, j, k) as raw values.
    pub fn component(&self, nu: usize) -> &[f64] {
        if nu == 0 {
            self.scalar.values()
        } else {
            self.vector.component(nu - 1)
        }
    }

    pub fn map_cells(&self, f: impl Fn(Quaternion) -> Quaternion + Sync) -> Self {
        let cells: Vec<Quaternion> = (0..self.grid().len())
            .into_par_iter()
            .map(|i| f(self.at(i)))
            .collect();
        Self::from_cells(*self.grid(), &cells)
    }

    pub fn zip_cells(
        &self,
        other: &Self,
        f: impl Fn(Quaternion, Quaternion) -> Quaternion + Sync,
    ) -> Self {
        assert_eq!(
            self.grid(),
            other.grid(),
            "quaternion fields on different grids"
        );
        let cells: Vec<Quaternion> = (0..self.grid().len())
            .into_par_iter()
            .map(|i| f(self.at(i), other.at(i)))
            .collect();
        Self::from_cells(*self.grid(), &cells)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            scalar: self.scalar.add(&other.scalar),
            vector: self.vector.add(&other.vector),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            scalar: self.scalar.sub(&other.scalar),
            vector: self.vector.sub(&other.vector),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            scalar: self.scalar.scale(s),
            vector: self.vector.scale(s),
        }
    }

    pub fn linf(&self) -> f64 {
        self.scalar.linf().max(self.vector.linf())
    }

    /// `sqrt(Σ |q|² ΔV)`
    pub fn l2(&self) -> f64 {
        let s = self.scalar.l2();
        (s * s + self.vector.norm_squared_integral()).sqrt()
    }
}

/// The five named pieces of `d/dr` applied to a potential `U + A`.
#[derive(Debug, Clone)]
pub struct FivePartDerivative {
    /// `(1/c) ∂U/∂t`
    pub time_scalar: ScalarField,
    /// `div A`
    pub div_part: ScalarField,
    /// `(1/c) ∂A/∂t`
    pub time_vector: VectorField,
    /// `grad U`
    pub grad_part: VectorField,
    /// `+curl A` for the right action, `−curl A` for the left.
    pub curl_part: VectorField,
    pub side: ProductSide,
}

impl FivePartDerivative {
    /// `(time_scalar − div_part) + (time_vector + grad_part + curl_part)`
    pub fn recombine(&self) -> QuatField {
        QuatField {
            scalar: self.time_scalar.sub(&self.div_part),
            vector: self.time_vector.add(&self.grad_part).add(&self.curl_part),
        }
    }
}

/// Potential `A = U + A1 i + A2 j + A3 k` with its time derivatives.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub jet: QuatJet,
}

impl PotentialField {
    pub fn new(jet: QuatJet) -> Self {
        Self { jet }
    }

    pub fn scalar_potential(&self) -> &ScalarField {
        &self.jet.value().scalar
    }

    pub fn vector_potential(&self) -> &VectorField {
        &self.jet.value().vector
    }

    pub fn c(&self) -> f64 {
        self.jet.c()
    }

    pub fn grid(&self) -> &Grid {
        self.jet.grid()
    }
}

/// The seven field components at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    /// Temporal field `T`, the scalar part of the electric quaternion.
    pub temporal: ScalarField,
    pub electric: VectorField,
    pub magnetic: VectorField,
    pub time: f64,
    pub c: f64,
}

impl FieldState {
    pub fn zeros(grid: Grid, c: f64) -> Self {
        Self {
            temporal: ScalarField::zeros(grid),
            electric: VectorField::zeros(grid),
            magnetic: VectorField::zeros(grid),
            time: 0.0,
            c,
        }
    }

    pub fn new(
        temporal: ScalarField,
        electric: VectorField,
        magnetic: VectorField,
        time: f64,
        c: f64,
    ) -> Result<Self> {
        temporal.grid().ensure_same(electric.grid())?;
        temporal.grid().ensure_same(magnetic.grid())?;
        Ok(Self {
            temporal,
            electric,
            magnetic,
            time,
            c,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.temporal.grid()
    }

    /// `T + E` as a quaternion field.
    pub fn electric_quaternion(&self) -> QuatField {
        QuatField {
            scalar: self.temporal.clone(),
            vector: self.electric.clone(),
        }
    }

    /// `0 + B` as a quaternion field.
    pub fn magnetic_quaternion(&self) -> QuatField {
        QuatField {
            scalar: ScalarField::zeros(*self.grid()),
            vector: self.magnetic.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.temporal.is_finite() && self.electric.is_finite() && self.magnetic.is_finite()
    }

    /// `self += alpha * rate`, time untouched.
    pub fn axpy(&mut self, alpha: f64, rate: &FieldState) {
        self.temporal.axpy(alpha, &rate.temporal);
        self.electric.axpy(alpha, &rate.electric);
        self.magnetic.axpy(alpha, &rate.magnetic);
    }
}

/// How a field jet came about; only potential-derived fields are expected
/// to satisfy the algebraic identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOrigin {
    Potential,
    External,
}

/// Electric quaternion `T + E` and magnetic quaternion `0 + B` with their
/// time derivatives.
#[derive(Debug, Clone)]
pub struct FieldJet {
    pub electric: QuatJet,
    pub magnetic: QuatJet,
    pub origin: FieldOrigin,
}

impl FieldJet {
    /// Fields set by hand rather than derived from a potential.
    pub fn external(electric: QuatJet, magnetic: QuatJet) -> Result<Self> {
        electric.grid().ensure_same(magnetic.grid())?;
        Ok(Self {
            electric,
            magnetic,
            origin: FieldOrigin::External,
        })
    }

    /// Static hand-set fields: all time derivatives zero up to `order`.
    pub fn external_static(state: &FieldState, order: usize) -> Self {
        let e = QuatJet::constant(state.electric_quaternion(), order, state.time, state.c);
        let b = QuatJet::constant(state.magnetic_quaternion(), order, state.time, state.c);
        Self {
            electric: e,
            magnetic: b,
            origin: FieldOrigin::External,
        }
    }

    pub fn order(&self) -> usize {
        self.electric.order().min(self.magnetic.order())
    }

    pub fn state(&self) -> FieldState {
        let e = self.electric.value();
        FieldState {
            temporal: e.scalar.clone(),
            electric: e.vector.clone(),
            magnetic: self.magnetic.value().vector.clone(),
            time: self.electric.time(),
            c: self.electric.c(),
        }
    }

    pub fn is_potential_derived(&self) -> bool {
        self.origin == FieldOrigin::Potential
    }
}

/// Charge density `ρ` and current density `J` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDensities {
    pub rho: ScalarField,
    pub current: VectorField,
}

impl SourceDensities {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            rho: ScalarField::zeros(grid),
            current: VectorField::zeros(grid),
        }
    }

    /// The source quaternion `ρ + J/c`.
    pub fn quaternion(&self, c: f64) -> QuatField {
        QuatField {
            scalar: self.rho.clone(),
            vector: self.current.scale(1.0 / c),
        }
    }
}

fn unit_products(side: ProductSide) -> [[Quaternion; 4]; 4] {
    let mut table = [[Quaternion::ZERO; 4]; 4];
    for (mu, row) in table.iter_mut().enumerate() {
        for (nu, entry) in row.iter_mut().enumerate() {
            *entry = product(Quaternion::unit(mu), Quaternion::unit(nu), side);
        }
    }
    table
}

/// Applies `d/dr` from `side` to one jet level: `time_rate` is the level
/// above (`∂t` of `value`).
fn act(value: &QuatField, time_rate: &QuatField, c: f64, side: ProductSide) -> QuatField {
    let grid = *value.grid();
    let table = unit_products(side);
    // partials[mu][nu]: mu = 0 time, 1..=3 space; nu = component
    let mut partials: Vec<Vec<Vec<f64>>> = Vec::with_capacity(4);
    partials.push(
        (0..4)
            .map(|nu| time_rate.component(nu).iter().map(|v| v / c).collect())
            .collect(),
    );
    for axis in 0..3 {
        partials.push(
            (0..4)
                .map(|nu| partial_slice(&grid, value.component(nu), axis))
                .collect(),
        );
    }
    let cells: Vec<Quaternion> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let mut acc = Quaternion::ZERO;
            for mu in 0..4 {
                for nu in 0..4 {
                    acc = acc + table[mu][nu].scale(partials[mu][nu][idx]);
                }
            }
            acc
        })
        .collect();
    QuatField::from_cells(grid, &cells)
}

/// `d/dr→X` or `X←d/dr` on a whole jet; the result has one order fewer.
pub fn apply_operator(x: &QuatJet, side: ProductSide) -> Result<QuatJet> {
    if x.order() < 1 {
        return Err(Error::MissingTimeDerivative {
            needed: 1,
            available: x.order(),
        });
    }
    let levels = (0..x.order())
        .map(|j| act(x.derivative(j), x.derivative(j + 1), x.c(), side))
        .collect();
    Ok(QuatJet::from_derivatives(levels, x.time(), x.c()).expect("levels share one grid"))
}

/// The five-part decomposition of `d/dr` acting on the potential.
pub fn quat_derivative(p: &PotentialField, side: ProductSide) -> Result<FivePartDerivative> {
    let jet = &p.jet;
    if jet.order() < 1 {
        return Err(Error::MissingTimeDerivative {
            needed: 1,
            available: jet.order(),
        });
    }
    let inv_c = 1.0 / jet.c();
    let rate = jet.derivative(1);
    let u = &jet.value().scalar;
    let a = &jet.value().vector;
    Ok(FivePartDerivative {
        time_scalar: rate.scalar.scale(inv_c),
        div_part: div(a),
        time_vector: rate.vector.scale(inv_c),
        grad_part: grad(u),
        curl_part: curl(a).scale(side.cross_sign()),
        side,
    })
}

/// `E = −{d/dr, A}` and `B = [d/dr, A]`, via the right and left actions.
pub fn fields_from_potential(p: &PotentialField) -> Result<FieldJet> {
    let right = apply_operator(&p.jet, ProductSide::RightAction)?;
    let left = apply_operator(&p.jet, ProductSide::LeftAction)?;
    let mut e_levels = Vec::with_capacity(right.order() + 1);
    let mut b_levels = Vec::with_capacity(right.order() + 1);
    for j in 0..=right.order() {
        let (r, l) = (right.derivative(j), left.derivative(j));
        e_levels.push(r.zip_cells(l, |a, b| -(a + b).scale(0.5)));
        b_levels.push(r.zip_cells(l, |a, b| (a - b).scale(0.5)));
    }
    Ok(FieldJet {
        electric: QuatJet::from_derivatives(e_levels, p.jet.time(), p.c())?,
        magnetic: QuatJet::from_derivatives(b_levels, p.jet.time(), p.c())?,
        origin: FieldOrigin::Potential,
    })
}

/// The component formulas `T = −(1/c)∂U/∂t + div A`, `E = −grad U − (1/c)∂A/∂t`,
/// `B = curl A`, evaluated directly with the grid operators.
pub fn fields_from_potential_direct(p: &PotentialField) -> Result<FieldJet> {
    let jet = &p.jet;
    if jet.order() < 1 {
        return Err(Error::MissingTimeDerivative {
            needed: 1,
            available: jet.order(),
        });
    }
    let inv_c = 1.0 / jet.c();
    let grid = *jet.grid();
    let mut e_levels = Vec::new();
    let mut b_levels = Vec::new();
    for j in 0..jet.order() {
        let (x, rate) = (jet.derivative(j), jet.derivative(j + 1));
        let t = div(&x.vector).sub(&rate.scalar.scale(inv_c));
        let e = grad(&x.scalar).scale(-1.0).sub(&rate.vector.scale(inv_c));
        e_levels.push(QuatField {
            scalar: t,
            vector: e,
        });
        b_levels.push(QuatField {
            scalar: ScalarField::zeros(grid),
            vector: curl(&x.vector),
        });
    }
    Ok(FieldJet {
        electric: QuatJet::from_derivatives(e_levels, jet.time(), jet.c())?,
        magnetic: QuatJet::from_derivatives(b_levels, jet.time(), jet.c())?,
        origin: FieldOrigin::Potential,
    })
}

/// Largest relative disagreement between the quaternion-combinator and the
/// component-formula extraction of `T`, `E`, `B` over all jet levels.
pub fn path_discrepancy(p: &PotentialField) -> Result<f64> {
    let a = fields_from_potential(p)?;
    let b = fields_from_potential_direct(p)?;
    let mut worst = 0.0_f64;
    for j in 0..=a.order() {
        for (x, y) in [
            (a.electric.derivative(j), b.electric.derivative(j)),
            (a.magnetic.derivative(j), b.magnetic.derivative(j)),
        ] {
            let scale = y.linf();
            let diff = x.sub(y).linf();
            let rel = if scale > 0.0 { diff / scale } else { diff };
            worst = worst.max(rel);
        }
    }
    Ok(worst)
}

fn sym(r: &QuatField, l: &QuatField) -> QuatField {
    r.zip_cells(l, |a, b| (a + b).scale(0.5))
}

fn antisym(r: &QuatField, l: &QuatField) -> QuatField {
    r.zip_cells(l, |a, b| (a - b).scale(0.5))
}

fn both_sides(x: &QuatJet) -> Result<(QuatField, QuatField)> {
    let r = apply_operator(x, ProductSide::RightAction)?;
    let l = apply_operator(x, ProductSide::LeftAction)?;
    Ok((r.value().clone(), l.value().clone()))
}

/// `[d/dr, B] − {d/dr, E}`: vanishes only where the field equations hold.
///
/// Scalar part is `div E − (1/c)∂T/∂t`, vector part is
/// `curl B − (1/c)∂E/∂t − grad T`.
pub fn law_residual(f: &FieldJet) -> Result<QuatField> {
    let (rb, lb) = both_sides(&f.magnetic)?;
    let (re, le) = both_sides(&f.electric)?;
    Ok(antisym(&rb, &lb).sub(&sym(&re, &le)))
}

/// `[d/dr, E] + {d/dr, B}`: vanishes for every potential-derived field.
///
/// Scalar part is `−div B`, vector part `curl E + (1/c)∂B/∂t`. For fields
/// not derived from a potential (see [`FieldJet::is_potential_derived`]) a
/// nonzero value is a genuine measurement rather than a defect.
pub fn identity_residual(f: &FieldJet) -> Result<QuatField> {
    let (rb, lb) = both_sides(&f.magnetic)?;
    let (re, le) = both_sides(&f.electric)?;
    Ok(antisym(&re, &le).add(&sym(&rb, &lb)))
}

/// `d/dr→(d/dr→A) + (A←d/dr)←d/dr − 8πJ` with `J = ρ + J/c`.
pub fn potential_equation_residual(
    p: &PotentialField,
    sources: Option<&SourceDensities>,
) -> Result<QuatField> {
    require_order(&p.jet, 2)?;
    let rr = apply_operator(
        &apply_operator(&p.jet, ProductSide::RightAction)?,
        ProductSide::RightAction,
    )?;
    let ll = apply_operator(
        &apply_operator(&p.jet, ProductSide::LeftAction)?,
        ProductSide::LeftAction,
    )?;
    let lhs = rr.value().add(ll.value());
    Ok(match sources {
        Some(s) => {
            s.rho.grid().ensure_same(p.grid())?;
            lhs.sub(&s.quaternion(p.c()).scale(8.0 * PI))
        }
        None => lhs,
    })
}

/// `d/dr→(A←d/dr) − (d/dr→A)←d/dr`; zero for every potential.
pub fn potential_identity_residual(p: &PotentialField) -> Result<QuatField> {
    require_order(&p.jet, 2)?;
    let rl = apply_operator(
        &apply_operator(&p.jet, ProductSide::LeftAction)?,
        ProductSide::RightAction,
    )?;
    let lr = apply_operator(
        &apply_operator(&p.jet, ProductSide::RightAction)?,
        ProductSide::LeftAction,
    )?;
    Ok(rl.value().sub(lr.value()))
}

/// Reads the temporal terms as sources: `4πρ = (1/c)∂T/∂t`, `4πJ/c = grad T`.
pub fn identified_sources(f: &FieldJet) -> Result<SourceDensities> {
    require_order(&f.electric, 1)?;
    let c = f.electric.c();
    let t = &f.electric.value().scalar;
    let dt_t = &f.electric.derivative(1).scalar;
    Ok(SourceDensities {
        rho: dt_t.scale(1.0 / (4.0 * PI * c)),
        current: grad(t).scale(c / (4.0 * PI)),
    })
}

fn require_order(jet: &QuatJet, needed: usize) -> Result<()> {
    if jet.order() < needed {
        Err(Error::MissingTimeDerivative {
            needed,
            available: jet.order(),
        })
    } else {
        Ok(())
    }
}
