//! Value-level quaternion algebra with distinct right and left actions.
//!
//! A quaternion `w + x i + y j + z k` carries time in the scalar slot and
//! space in `i`, `j`, `k`. Because the units anticommute, the product of an
//! operator `a` acting on a variable `b` depends on the side it acts from:
//!
//! * right action `a→b` is the Hamilton product `a b`,
//! * left action `b←a` is the Hamilton product `b a`.
//!
//! Both share the scalar part and the aligned terms; they differ only in the
//! sign of the cross product `a × b`. The symmetric and antisymmetric
//! combinators keep the shared part and the cross part respectively.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which way an operator quaternion acts on its operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductSide {
    /// `a→b`: operator on the left, acting to the right.
    RightAction,
    /// `b←a`: operator on the right, acting to the left.
    LeftAction,
}

impl ProductSide {
    /// Sign carried by the cross-product term under this action.
    pub fn cross_sign(self) -> f64 {
        match self {
            ProductSide::RightAction => 1.0,
            ProductSide::LeftAction => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn scalar(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Pure-vector quaternion `0 + v`.
    pub const fn vector(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    /// Basis unit by index: 0 → 1, 1 → i, 2 → j, 3 → k.
    pub fn unit(index: usize) -> Self {
        match index {
            0 => Self::ONE,
            1 => Self::I,
            2 => Self::J,
            3 => Self::K,
            _ => panic!("quaternion unit index {index} out of range"),
        }
    }

    pub fn components(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector_part(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Negates the `i`, `j`, `k` parts.
    pub fn conjugate(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Largest absolute component, used to scale comparison tolerances.
    pub fn max_abs(self) -> f64 {
        self.components()
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

/// Operator `a` acting to the right on `b` (`a→b`), i.e. the Hamilton
/// product `a b`.
pub fn hamilton_right(a: Quaternion, b: Quaternion) -> Quaternion {
    product(a, b, ProductSide::RightAction)
}

/// Operator `a` acting to the left on `b` (`b←a`), i.e. the Hamilton
/// product `b a`.
pub fn hamilton_left(a: Quaternion, b: Quaternion) -> Quaternion {
    product(a, b, ProductSide::LeftAction)
}

/// Shared expansion: scalar, aligned terms, then the cross term with the
/// sign selected by `side`.
pub fn product(a: Quaternion, b: Quaternion, side: ProductSide) -> Quaternion {
    let s = side.cross_sign();
    let cross = [
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    ];
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + s * cross[0],
        a.w * b.y + a.y * b.w + s * cross[1],
        a.w * b.z + a.z * b.w + s * cross[2],
    )
}

/// `{a,b} = (a→b + b←a) / 2`.
pub fn sym_product(a: Quaternion, b: Quaternion) -> Quaternion {
    (hamilton_right(a, b) + hamilton_left(a, b)).scale(0.5)
}

/// `[a,b] = (a→b − b←a) / 2`.
pub fn antisym_product(a: Quaternion, b: Quaternion) -> Quaternion {
    (hamilton_right(a, b) - hamilton_left(a, b)).scale(0.5)
}

pub fn conjugate(q: Quaternion) -> Quaternion {
    q.conjugate()
}

pub fn norm(q: Quaternion) -> f64 {
    q.norm()
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// `a * b` is the right action `a→b`.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        hamilton_right(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}
