use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ratfun::{format_rational, RatFn, RatFnError, Rational};

/// Transcendental tag `π^pi · i^i` with `i ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tag {
    pub pi: i32,
    pub i: u8,
}

impl Tag {
    pub const ONE: Tag = Tag { pi: 0, i: 0 };

    /// Normalizes `π^pi · i^i_power`, returning the sign produced by `i² = -1`.
    pub fn from_powers(pi: i32, i_power: i32) -> (i32, Tag) {
        let r = i_power.rem_euclid(4);
        let sign = if r >= 2 { -1 } else { 1 };
        (sign, Tag { pi, i: (r % 2) as u8 })
    }

    pub fn mul(self, other: Tag) -> (i32, Tag) {
        Self::from_powers(self.pi + other.pi, i32::from(self.i) + i32::from(other.i))
    }

    pub fn to_complex(self) -> Complex64 {
        let m = std::f64::consts::PI.powi(self.pi);
        if self.i == 1 {
            Complex64::new(0.0, m)
        } else {
            Complex64::new(m, 0.0)
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi {
            0 => {}
            1 => f.write_str("π")?,
            p => write!(f, "π^{p}")?,
        }
        if self.i == 1 {
            if self.pi != 0 {
                f.write_str("·")?;
            }
            f.write_str("i")?;
        }
        Ok(())
    }
}

/// Positive constant units `c_j` whose `c_j^{2λ_j}` factors are tracked
/// numerically only; they equal 1 at `λ = 0`.
pub type Units = Vec<(usize, Rational)>;

pub(crate) fn normalize_units(mut units: Units) -> Units {
    units.sort();
    let mut out: Units = Vec::new();
    for (j, c) in units {
        match out.last_mut() {
            Some((k, d)) if *k == j => *d *= c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|(_, c)| !c.is_one());
    out
}

/// One summand of a paired value: `value(λ) · tag · Π c_j^{2λ_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarTerm {
    pub tag: Tag,
    pub value: RatFn,
    pub units: Units,
}

/// A formal sum of tagged rational functions of `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarValue {
    nvars: usize,
    terms: Vec<ScalarTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitMode {
    /// Send `λ_{order[0]}` to zero first, then `λ_{order[1]}`, and so on.
    Iterated(Vec<usize>),
    /// Substitute `λ_j = κ^{μ_j}` and evaluate at `κ = 0`.
    Curve(Vec<u32>),
}

impl LimitMode {
    pub fn natural_order(nvars: usize) -> Self {
        LimitMode::Iterated((0..nvars).collect())
    }
}

impl ScalarValue {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[ScalarTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: ScalarTerm) {
        assert_eq!(term.value.nvars(), self.nvars, "variable mismatch");
        if !term.value.is_zero() {
            self.terms.push(term);
        }
    }

    pub fn extend(&mut self, other: ScalarValue) {
        for t in other.terms {
            self.push(t);
        }
    }

    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Combines summands with equal tag and units into single rational
    /// functions.
    pub fn collapse(&self) -> Self {
        let mut acc: BTreeMap<(Tag, Units), RatFn> = BTreeMap::new();
        for t in &self.terms {
            let key = (t.tag, t.units.clone());
            let entry = acc.entry(key).or_insert_with(|| RatFn::zero(self.nvars));
            *entry = entry.add(&t.value);
        }
        let mut out = Self::zero(self.nvars);
        for ((tag, units), value) in acc {
            out.push(ScalarTerm { tag, value, units });
        }
        out
    }

    /// Numerical value at a real point, including unit factors.
    pub fn eval_f64(&self, lambda: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let units: f64 = t
                    .units
                    .iter()
                    .map(|(j, c)| c.to_f64().unwrap_or(f64::NAN).powf(2.0 * lambda[*j]))
                    .product();
                t.tag.to_complex() * (t.value.eval_f64(lambda) * units)
            })
            .sum()
    }

    /// Sends `λ → 0` termwise. Unit factors are 1 there.
    pub fn value_at_zero(&self, mode: &LimitMode) -> Result<ExactValue, RatFnError> {
        let mut out = ExactValue::zero();
        for t in &self.terms {
            let v = match mode {
                LimitMode::Iterated(order) => t.value.iterated_limit(order)?,
                LimitMode::Curve(mu) => t.value.curve_value_at_zero(mu)?,
            };
            out.add_tagged(t.tag, v);
        }
        Ok(out)
    }
}

/// Delegates to the rational-function limits of each summand.
pub fn value_at_zero(value: &ScalarValue, mode: &LimitMode) -> Result<ExactValue, RatFnError> {
    value.value_at_zero(mode)
}

/// An exact number `Σ q_t · tag_t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactValue {
    parts: BTreeMap<Tag, Rational>,
}

impl ExactValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tagged(tag: Tag, q: Rational) -> Self {
        let mut v = Self::zero();
        v.add_tagged(tag, q);
        v
    }

    pub fn rational(q: Rational) -> Self {
        Self::tagged(Tag::ONE, q)
    }

    pub fn add_tagged(&mut self, tag: Tag, q: Rational) {
        if q.is_zero() {
            return;
        }
        let e = self.parts.entry(tag).or_insert_with(Rational::zero);
        *e += q;
        if e.is_zero() {
            self.parts.remove(&tag);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, q) in &other.parts {
            out.add_tagged(*t, q.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { parts: self.parts.iter().map(|(t, q)| (*t, -q.clone())).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (t, q) in &self.parts {
            out.add_tagged(*t, q * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (Tag, &Rational)> {
        self.parts.iter().map(|(t, q)| (*t, q))
    }

    /// The single `(tag, q)` pair, if the value has one tag. Zero reports as
    /// `(1, 0)`.
    pub fn single(&self) -> Option<(Tag, Rational)> {
        match self.parts.len() {
            0 => Some((Tag::ONE, Rational::zero())),
            1 => self.parts.iter().next().map(|(t, q)| (*t, q.clone())),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        self.parts.iter().map(|(t, q)| t.to_complex() * q.to_f64().unwrap_or(f64::NAN)).sum()
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        for (k, (t, q)) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            let a = q.abs();
            if *t == Tag::ONE {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{t}")?;
            } else {
                write!(f, "{}·{t}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}
