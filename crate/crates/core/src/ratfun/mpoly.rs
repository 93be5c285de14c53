use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{RatFnError, Rational, UniPoly};

/// Sparse multivariate polynomial over ℚ in a fixed, ordered variable list.
///
/// Terms are keyed by exponent vector; `BTreeMap` ordering on `Vec<u32>` is
/// lexicographic with variable 0 most significant, so the last entry is the
/// lex-leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    ExactDivide,
}

/// Checked binary arithmetic on polynomials.
pub fn mpoly_arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly, RatFnError> {
    if a.nvars != b.nvars {
        return Err(RatFnError::VariableMismatch { left: a.nvars, right: b.nvars });
    }
    match op {
        PolyOp::Add => Ok(a + b),
        PolyOp::Mul => Ok(a * b),
        PolyOp::ExactDivide => a.exact_divide(b),
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`; `NotDivisible` if the remainder of
    /// lex division is nonzero.
    pub fn exact_divide(&self, divisor: &MPoly) -> Result<MPoly, RatFnError> {
        if self.nvars != divisor.nvars {
            return Err(RatFnError::VariableMismatch { left: self.nvars, right: divisor.nvars });
        }
        let (dlead_e, dlead_c) = divisor.leading().ok_or(RatFnError::ZeroDenominator)?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading() {
            if e.iter().zip(dlead_e).any(|(a, b)| a < b) {
                return Err(RatFnError::NotDivisible);
            }
            let qe: Vec<u32> = e.iter().zip(dlead_e).map(|(a, b)| a - b).collect();
            let qc = c / dlead_c;
            for (de, dc) in &divisor.terms {
                let te: Vec<u32> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(&qc * dc));
            }
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn valuation(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    /// Divides by `λ_var^by`; caller guarantees `by <= valuation(var)`.
    pub fn shift_down(&self, var: usize, by: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] -= by;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `λ_var = 0`.
    pub fn set_zero(&self, var: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e[var] == 0).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &k) in point.iter().zip(e) {
                    t *= x.powi(k as i32);
                }
                t
            })
            .sum()
    }

    /// Substitutes `λ_j = κ^{μ_j}`.
    pub fn curve(&self, mu: &[u32]) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (e, c) in &self.terms {
            let d: usize = e.iter().zip(mu).map(|(&a, &m)| (a * m) as usize).sum();
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rational::zero());
            }
            coeffs[d] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Reindexes arguments: the result at `λ` equals `self` at `(λ_σ(1), …)`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for (l, &k) in e.iter().enumerate() {
                ne[sigma[l]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let is_const = e.iter().all(|&k| k == 0);
            if !a.is_one() || is_const {
                out.push_str(&a.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => out.push_str(&names[i]),
                    _ => out.push_str(&format!("{}^{}", names[i], k)),
                }
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&super::lambda_names(self.nvars)))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    #[test]
    fn expansion_and_division() {
        let a = &l(2, 0) + &l(2, 1);
        let prod = &a * &l(2, 1);
        let mut expect = MPoly::zero(2);
        expect.add_term(vec![1, 1], Rational::one());
        expect.add_term(vec![0, 2], Rational::one());
        assert_eq!(prod, expect);
        assert_eq!(mpoly_arith(&prod, &l(2, 1), PolyOp::ExactDivide).unwrap(), a);
        assert_eq!(mpoly_arith(&a, &l(2, 0), PolyOp::ExactDivide), Err(RatFnError::NotDivisible));
    }

    #[test]
    fn variable_mismatch() {
        assert_eq!(
            mpoly_arith(&l(2, 0), &l(3, 0), PolyOp::Add),
            Err(RatFnError::VariableMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn divide_by_affine() {
        // (λ1 + λ2 + 1)(λ1 - 2λ2) / (λ1 + λ2 + 1)
        let a = &(&l(2, 0) + &l(2, 1)) + &MPoly::one(2);
        let b = &l(2, 0) - &l(2, 1).scale(&Rational::from_integer(2.into()));
        assert_eq!((&a * &b).exact_divide(&a).unwrap(), b);
    }

    #[test]
    fn permute_reindexes() {
        // p = λ1 λ2^2 ; p∘σ with σ=(2,1) (0-based [1,0]) = λ2 λ1^2
        let p = MPoly::monomial(vec![1, 2], Rational::one());
        assert_eq!(p.permute(&[1, 0]), MPoly::monomial(vec![2, 1], Rational::one()));
    }

    #[test]
    fn display() {
        let p = &(&l(2, 0) * &l(2, 1)) - &MPoly::constant(2, Rational::new(3.into(), 2.into()));
        assert_eq!(p.to_string(), "λ1λ2 - 3/2");
    }
}
