//! Exact arithmetic in the continuation parameters `λ_1, …, λ_r`.
//!
//! Rational functions keep their denominators factored into integer affine
//! forms, so simplification only ever needs exact division by a linear
//! polynomial. Two ways of sending `λ → 0` are provided: the iterated limit
//! (one variable at a time, in a given order) and the limit along the
//! monomial curve `λ_j = κ^{μ_j}`.

mod linear;
mod mpoly;
mod ratfn;
mod univariate;

pub use linear::LinearForm;
pub use mpoly::{mpoly_arith, MPoly, PolyOp};
pub use ratfn::{FactorWitness, PositivityWitness, RatFn};
pub use univariate::{UniPoly, UniRatFn};

use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFnError {
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    #[error("operands live in different variable lists ({left} vs {right} variables)")]
    VariableMismatch { left: usize, right: usize },
    #[error("denominator vanishes identically")]
    ZeroDenominator,
    #[error("iterated limit does not exist: pole in λ{}", .var + 1)]
    NotHolomorphic { var: usize },
    #[error("curve limit does not exist: pole at κ = 0")]
    PoleAtZero,
    #[error("holomorphy witness failed: {0}")]
    WitnessFails(String),
    #[error("invalid variable order or weights: {0}")]
    InvalidArgument(String),
}

pub(crate) fn lambda_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("λ{i}")).collect()
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            if q == 0.into() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Formats as `"p/q"`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
