//! Verification toolkit for shifted moments of the Riemann zeta function and
//! ternary additive divisor sums.
//!
//! Everything here exists to check explicit formulas numerically: prime-local
//! Euler factors against their defining series, Dirichlet-series
//! factorizations against truncated sums, the smoothed approximate functional
//! equation against direct critical-line evaluation, the swap-sum moment main
//! terms against raw moment integrals, and the additive-divisor main term
//! against brute-force correlation sums.

pub mod afe;
pub mod arith;
pub mod dirichlet;
pub mod divisor;
pub mod error;
pub mod gamma;
pub mod localfac;
pub mod moment;
pub mod shifts;
pub mod weight;
pub mod zeta;

pub use error::{Error, Result};
pub use shifts::ShiftSet;
