use num_traits::{One, ToPrimitive, Zero};

use super::CurrentError;
use crate::ratfun::{LinearForm, MPoly, RatFn, Rational};

/// `ψ(t) = Σ_m c_m t^m (1-t)^N` on `[0, 1]`, zero beyond.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadialProfile {
    order: u32,
    coeffs: Vec<Rational>,
}

impl RadialProfile {
    pub fn new(order: u32, coeffs: Vec<Rational>) -> Result<Self, CurrentError> {
        if order < 2 {
            return Err(CurrentError::InvalidProfile(format!("order {order} < 2")));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(CurrentError::InvalidProfile("zero profile".into()));
        }
        Ok(Self { order, coeffs })
    }

    /// `(1-t)^N`.
    pub fn standard(order: u32) -> Result<Self, CurrentError> {
        Self::new(order, vec![Rational::one()])
    }

    /// `t^m (1-t)^N`.
    pub fn shifted(order: u32, m: usize) -> Result<Self, CurrentError> {
        let mut coeffs = vec![Rational::zero(); m + 1];
        coeffs[m] = Rational::one();
        Self::new(order, coeffs)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn value_at_zero(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn value(&self, t: f64) -> f64 {
        if !(0.0..1.0).contains(&t) {
            return 0.0;
        }
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN));
        poly * (1.0 - t).powi(self.order as i32)
    }

    /// `∫₀¹ t^s ψ(t) dt` continued to all `s`, as a rational function of the
    /// affine form `shift`.
    pub fn mellin(&self, shift: &LinearForm) -> Result<RatFn, CurrentError> {
        let nvars = shift.nvars();
        let fact = factorial(self.order);
        let mut out = RatFn::zero(nvars);
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let factors: Vec<_> = (1..=self.order as i64 + 1).map(|j| (shift.shifted(m as i64 + j), 1)).collect();
            let term = RatFn::new(MPoly::constant(nvars, c * &fact), factors)?;
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn mellin_f64(&self, s: f64) -> f64 {
        let fact = factorial(self.order).to_f64().unwrap_or(f64::NAN);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| {
                let den: f64 = (1..=self.order + 1).map(|j| s + m as f64 + f64::from(j)).product();
                c.to_f64().unwrap_or(f64::NAN) * fact / den
            })
            .sum()
    }
}

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// Differential part of one coordinate of a split test form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Differential {
    One,
    Dx,
    Dxbar,
    DxDxbar,
    /// The area element `(i/2) dx∧dx̄`.
    Area,
}

impl Differential {
    pub fn holo_degree(self) -> u32 {
        match self {
            Self::Dx | Self::DxDxbar | Self::Area => 1,
            _ => 0,
        }
    }

    pub fn anti_degree(self) -> u32 {
        match self {
            Self::Dxbar | Self::DxDxbar | Self::Area => 1,
            _ => 0,
        }
    }

    pub fn degree(self) -> u32 {
        self.holo_degree() + self.anti_degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordinateTest {
    pub hol: u32,
    pub anti: u32,
    pub profile: RadialProfile,
    pub diff: Differential,
}

impl CoordinateTest {
    pub fn new(hol: u32, anti: u32, profile: RadialProfile, diff: Differential) -> Self {
        Self { hol, anti, profile, diff }
    }
}

/// `Π_j x_j^{a_j} x̄_j^{d_j} ψ_j(|x_j|²) · diff_j`, differentials in
/// coordinate order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TestForm {
    pub coords: Vec<CoordinateTest>,
}

impl TestForm {
    pub fn new(coords: Vec<CoordinateTest>) -> Self {
        Self { coords }
    }

    /// Same profile in every coordinate.
    pub fn uniform(hol: &[u32], anti: &[u32], profile: &RadialProfile, diffs: &[Differential]) -> Self {
        let coords = hol
            .iter()
            .zip(anti)
            .zip(diffs)
            .map(|((&a, &d), &df)| CoordinateTest::new(a, d, profile.clone(), df))
            .collect();
        Self { coords }
    }

    pub fn ncoords(&self) -> usize {
        self.coords.len()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.coords.iter().fold((0, 0), |(p, q), c| (p + c.diff.holo_degree(), q + c.diff.anti_degree()))
    }
}
