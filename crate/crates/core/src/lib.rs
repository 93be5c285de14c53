//! Exact and numerical evaluation of residue currents on normal-crossings
//! (monomial) data.
//!
//! Products of currents `R^q ∧ ⋯ ∧ R^1` (and the mixed `U`/`R` and
//! Lelong-type `M` variants) are regularized by `|f_j|^{2λ_j}`. On monomial
//! data every pairing against a split monomial-radial test form is an exact
//! rational function of `λ`, which this crate computes and then sends to zero
//! either one variable at a time or along the curve `λ_j = κ^{μ_j}`.

pub mod currents;
pub mod gamma;
pub mod products;
pub mod quad;
pub mod ratfun;

pub use ratfun::{LinearForm, MPoly, RatFn, RatFnError, Rational};
