//! Exact pairing of monomial tensor currents with split test forms.
//!
//! Every one-variable factor `|x|^{2s} x^{-a} x̄^{-b}` paired with
//! `x^c x̄^d ψ(|x|²)` reduces, after the angular integral, to a Mellin
//! transform of the radial profile. For `ψ(t) = Σ c_m t^m (1-t)^N` this is a
//! rational function of `s`, which gives the analytic continuation in closed
//! form.

mod form;
mod pairing;
mod scalar;
mod tensor;

pub use form::{CoordinateTest, Differential, RadialProfile, TestForm};
pub use pairing::{factor_pairing, pairing, tensor_pairing, FactorPairing};
pub use scalar::{value_at_zero, ExactValue, LimitMode, ScalarTerm, ScalarValue, Tag, Units};
pub use tensor::{wedge_groups, CurrentFactor, CurrentSum, FormSlot, MonomialWedge, TensorCurrent};

use thiserror::Error;

use crate::ratfun::RatFnError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurrentError {
    #[error("bidegree mismatch: current {current:?} against test form {test:?}")]
    DegreeMismatch { current: (u32, u32), test: (u32, u32) },
    #[error("radial profile order {got} too small, need at least {needed}")]
    InsufficientSmoothness { needed: u32, got: u32 },
    #[error("current has {current} coordinates, test form has {test}")]
    DimensionMismatch { current: usize, test: usize },
    #[error("invalid radial profile: {0}")]
    InvalidProfile(String),
    #[error(transparent)]
    Algebra(#[from] RatFnError),
}
