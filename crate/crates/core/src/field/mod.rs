//! Exact arithmetic in towers of quadratic extensions of `Q`.
//!
//! A [`Tower`] is built by successively adjoining square roots; a
//! [`FieldElement`] is a coefficient vector over the `2^k` products of the
//! adjoined roots. The degree-8 field `Q(i, sqrt3, sqrt5)` is
//! [`Tower::standard`]; `x0` sampling adjoins a formal `delta` on top of
//! `Q(i, sqrt3)` when a discriminant is not a square.

mod approx;
mod element;
mod json;
mod parse;
mod tower;

use thiserror::Error;

pub use approx::{Approx, ComplexApprox};
pub use element::{arith, ArithOp, FieldElement};
pub use json::{tower_from_levels, tower_levels, ElementJson, LevelJson};
pub use tower::{rational_sqrt, Adjoined, Tower};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero divisor at level {level} ({name}): the adjoined value is a square in the tower below")]
    ZeroDivisor { level: usize, name: String },
    #[error("cannot adjoin the square root of zero")]
    ZeroSquare,
    #[error("{0} is a perfect rational square")]
    PerfectSquare(String),
    #[error("tower mismatch: {0} does not embed in {1}")]
    TowerMismatch(String, String),
    #[error("tower does not contain a primitive cube root of unity")]
    NoCubeRoot,
    #[error("malformed element: {0}")]
    Parse(String),
}
