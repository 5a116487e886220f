//! Quaternion electrodynamics with a temporal scalar field.
//!
//! The electromagnetic potential `U + A` is differentiated by the quaternion
//! operator `d/dr` from the right and from the left. The symmetric part of
//! the two gives the electric quaternion `T + E`, whose scalar part `T` is the
//! temporal field; the antisymmetric part gives `0 + B`. This crate provides
//! the value-level algebra, periodic grid calculus, the field extraction and
//! residuals, a time-domain solver for the seven components, and the
//! thermoelectric diagnostics built on `T`.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod grid;
pub mod manufactured;
pub mod quaternion;
pub mod spectral;
pub mod thermo;

pub use error::{Error, Result};
