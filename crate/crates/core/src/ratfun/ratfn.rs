use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{LinearForm, MPoly, RatFnError, Rational, UniPoly, UniRatFn};

/// Rational function `numerator / Π L_i^{m_i}` with primitive affine factors.
///
/// After construction the representation is canonical: every factor is
/// primitive (see [`LinearForm::normalize`]), constants live in the
/// numerator, and no denominator factor divides the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: MPoly,
    den: BTreeMap<LinearForm, u32>,
}

impl RatFn {
    pub fn new(
        num: MPoly,
        factors: impl IntoIterator<Item = (LinearForm, u32)>,
    ) -> Result<Self, RatFnError> {
        let nvars = num.nvars();
        let mut out = Self { num, den: BTreeMap::new() };
        for (form, mult) in factors {
            if form.nvars() != nvars {
                return Err(RatFnError::VariableMismatch { left: nvars, right: form.nvars() });
            }
            out.push_factor(form, mult)?;
        }
        out.cancel();
        Ok(out)
    }

    pub fn from_poly(num: MPoly) -> Self {
        Self { num, den: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    /// `1 / form`.
    pub fn inverse_form(form: &LinearForm) -> Result<Self, RatFnError> {
        Self::new(MPoly::one(form.nvars()), [(form.clone(), 1)])
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numeric value if the function is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.den.is_empty() && self.num.is_constant()).then(|| self.num.constant_term())
    }

    fn push_factor(&mut self, form: LinearForm, mult: u32) -> Result<(), RatFnError> {
        if mult == 0 {
            return Ok(());
        }
        let (content, prim) = form.normalize();
        if content == 0 {
            return Err(RatFnError::ZeroDenominator);
        }
        let c = num_traits::pow(Rational::from_integer(content.into()), mult as usize);
        self.num = self.num.scale(&(Rational::one() / c));
        if !prim.is_constant() {
            *self.den.entry(prim).or_insert(0) += mult;
        }
        Ok(())
    }

    /// Divides out every denominator factor that divides the numerator.
    /// Idempotent.
    pub fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let forms: Vec<LinearForm> = self.den.keys().cloned().collect();
        for form in forms {
            let divisor = form.to_mpoly();
            let mult = self.den.get_mut(&form).expect("factor present");
            while *mult > 0 {
                // A single term can only be divisible by a single-term form.
                if self.num.len() == 1 && divisor.len() > 1 {
                    break;
                }
                match self.num.exact_divide(&divisor) {
                    Ok(q) => {
                        self.num = q;
                        *mult -= 1;
                    }
                    Err(_) => break,
                }
            }
            if *mult == 0 {
                self.den.remove(&form);
            }
        }
    }

    pub fn cancelled(mut self) -> Self {
        self.cancel();
        self
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars());
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "variable mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars());
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        Self { num: &self.num * &other.num, den }.cancelled()
    }

    pub fn mul_poly(&self, p: &MPoly) -> Self {
        Self { num: &self.num * p, den: self.den.clone() }.cancelled()
    }

    pub fn div_form(&self, form: &LinearForm, mult: u32) -> Result<Self, RatFnError> {
        let mut out = self.clone();
        out.push_factor(form.clone(), mult)?;
        out.cancel();
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "variable mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut lcm = self.den.clone();
        for (f, &m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let lift = |r: &Self| {
            let mut p = r.num.clone();
            for (f, &m) in &lcm {
                let have = r.den.get(f).copied().unwrap_or(0);
                if m > have {
                    p = &p * &f.to_mpoly().pow(m - have);
                }
            }
            p
        };
        let num = &lift(self) + &lift(other);
        Self { num, den: lcm }.cancelled()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact value at a rational point; `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, &m) in &self.den {
            let v = f.eval(point);
            if v.is_zero() {
                return None;
            }
            d *= num_traits::pow(v, m as usize);
        }
        Some(self.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut d = 1.0;
        for (f, &m) in &self.den {
            d *= f.eval_f64(point).powi(m as i32);
        }
        self.num.eval_f64(point) / d
    }

    /// Reindexes arguments: the result at `λ` equals `self` at `(λ_σ(1), …)`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        Self {
            num: self.num.permute(sigma),
            den: self.den.iter().map(|(f, &m)| (f.permute(sigma), m)).collect(),
        }
        .cancelled()
    }

    /// Same value, by cross-multiplication against the other's denominator.
    pub fn same_value(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Iterated limit: for each variable in `order`, cancel the common power
    /// of that variable, then set it to zero.
    pub fn iterated_limit(&self, order: &[usize]) -> Result<Rational, RatFnError> {
        let n = self.nvars();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
            return Err(RatFnError::InvalidArgument(format!(
                "order {order:?} is not a permutation of {n} variables"
            )));
        }
        let mut f = self.clone().cancelled();
        for &v in order {
            if f.num.is_zero() {
                return Ok(Rational::zero());
            }
            let unit = LinearForm::var(n, v);
            let pole = f.den.remove(&unit).unwrap_or(0);
            if f.num.valuation(v) < pole {
                return Err(RatFnError::NotHolomorphic { var: v });
            }
            let num = f.num.shift_down(v, pole).set_zero(v);
            let mut next = Self::from_poly(num);
            for (form, m) in f.den {
                let restricted = form.set_zero(v);
                if restricted.is_zero() {
                    return Err(RatFnError::NotHolomorphic { var: v });
                }
                next.push_factor(restricted, m)?;
            }
            next.cancel();
            f = next;
        }
        f.as_constant().ok_or_else(|| {
            RatFnError::InvalidArgument("iterated limit left a nonconstant remainder".into())
        })
    }

    /// Substitutes `λ_j = κ^{μ_j}` and cancels the common power of κ.
    pub fn curve_substitute(&self, mu: &[u32]) -> Result<UniRatFn, RatFnError> {
        self.check_weights(mu)?;
        let num = self.num.curve(mu);
        let den = self
            .den
            .iter()
            .fold(UniPoly::one(), |acc, (f, &m)| acc.mul(&f.curve(mu).pow(m)));
        UniRatFn::new(num, den)
    }

    pub fn curve_value_at_zero(&self, mu: &[u32]) -> Result<Rational, RatFnError> {
        self.curve_substitute(mu)?.value_at_zero()
    }

    fn check_weights(&self, mu: &[u32]) -> Result<(), RatFnError> {
        if mu.len() != self.nvars() || mu.contains(&0) {
            return Err(RatFnError::InvalidArgument(format!(
                "weights {mu:?} must be {} positive integers",
                self.nvars()
            )));
        }
        Ok(())
    }

    /// Certifies that the curve-substituted function is holomorphic on a
    /// neighborhood of `[0, ∞)`: every denominator factor becomes a
    /// κ-polynomial with nonnegative coefficients (hence no zeros on
    /// `(0, ∞)`) and, after removing the common κ power, the denominator has
    /// a positive constant term.
    pub fn positivity_witness(&self, mu: &[u32]) -> Result<PositivityWitness, RatFnError> {
        self.check_weights(mu)?;
        let f = self.clone().cancelled();
        let mut factors = Vec::new();
        let mut den_order = 0usize;
        let mut den_constant = Rational::one();
        for (form, &m) in &f.den {
            if !form.has_nonnegative_coeffs() {
                return Err(RatFnError::WitnessFails(format!("factor {form} has a negative coefficient")));
            }
            let poly = form.curve(mu);
            let order = poly.valuation().ok_or_else(|| {
                RatFnError::WitnessFails(format!("factor {form} is the zero polynomial on the curve"))
            })?;
            let reduced_constant = poly.coeff(order);
            debug_assert!(reduced_constant.is_positive());
            den_order += order * m as usize;
            den_constant *= num_traits::pow(reduced_constant.clone(), m as usize);
            factors.push(FactorWitness {
                form: form.clone(),
                multiplicity: m,
                value_at_one: poly.eval(&Rational::one()),
                kappa_poly: poly,
                kappa_order: order,
                reduced_constant,
            });
        }
        let num_poly = f.num.curve(mu);
        let numerator_order = num_poly.valuation();
        if let Some(v) = numerator_order {
            if v < den_order {
                return Err(RatFnError::WitnessFails(format!(
                    "pole of order {} at κ = 0",
                    den_order - v
                )));
            }
        }
        Ok(PositivityWitness {
            factors,
            numerator_order,
            denominator_order: den_order,
            denominator_constant: den_constant,
        })
    }
}

/// Per-factor data of a [`PositivityWitness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorWitness {
    pub form: LinearForm,
    pub multiplicity: u32,
    pub kappa_poly: UniPoly,
    /// Power of κ dividing `kappa_poly`.
    pub kappa_order: usize,
    /// Lowest nonzero coefficient of `kappa_poly`; positive.
    pub reduced_constant: Rational,
    pub value_at_one: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityWitness {
    pub factors: Vec<FactorWitness>,
    /// `None` when the function is identically zero.
    pub numerator_order: Option<usize>,
    pub denominator_order: usize,
    /// Constant term of the full denominator after removing `κ^denominator_order`.
    pub denominator_constant: Rational,
}

impl PositivityWitness {
    pub fn holds(&self) -> bool {
        self.denominator_constant.is_positive()
            && self.factors.iter().all(|f| {
                f.kappa_poly.has_nonnegative_coeffs() && f.value_at_one.is_positive()
            })
            && self.numerator_order.is_none_or(|v| v >= self.denominator_order)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (i, (form, m)) in self.den.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            write!(f, "({form})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        f.write_str(")")
    }
}

impl RatFn {
    /// Approximate size, used to bound work in randomized suites.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.values().map(|&m| m as usize).sum::<usize>()
    }

    pub fn to_f64_constant(&self) -> Option<f64> {
        self.as_constant().and_then(|c| c.to_f64())
    }
}
