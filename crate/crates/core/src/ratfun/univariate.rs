use std::fmt;

use num_traits::{One, Zero};

use super::{RatFnError, Rational};

/// Dense univariate polynomial in κ, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Order of vanishing at κ = 0; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn shift_down(&self, by: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(by).all(Zero::is_zero));
        Self::new(self.coeffs.iter().skip(by).cloned().collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= Rational::zero())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = if neg { -c.clone() } else { c.clone() };
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    if i == 1 {
                        f.write_str("κ")?;
                    } else {
                        write!(f, "κ^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A univariate rational function in κ, the result of substituting
/// `λ_j = κ^{μ_j}`. Denominators here are always expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniRatFn {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl UniRatFn {
    /// Cancels the common power of κ and scales so that the lowest nonzero
    /// coefficient of the denominator is 1.
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, RatFnError> {
        let dv = den.valuation().ok_or(RatFnError::ZeroDenominator)?;
        if num.is_zero() {
            return Ok(Self { num, den: UniPoly::one() });
        }
        let nv = num.valuation().unwrap_or(0);
        let common = nv.min(dv);
        let (num, den) = (num.shift_down(common), den.shift_down(common));
        let lead = den.coeff(den.valuation().unwrap_or(0));
        let inv = Rational::one() / lead;
        Ok(Self { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn value_at_zero(&self) -> Result<Rational, RatFnError> {
        if self.num.is_zero() {
            return Ok(Rational::zero());
        }
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(RatFnError::PoleAtZero);
        }
        Ok(self.num.coeff(0) / d0)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// Equality of values, by cross-multiplication.
    pub fn same_value(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for UniRatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == UniPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
