use std::collections::BTreeMap;

use super::scalar::{normalize_units, Tag, Units};
use crate::ratfun::{LinearForm, MPoly, RatFn, Rational};

/// `prefactor(λ) · |x|^{2s} x^{-hol_pole} x̄^{-anti_pole} [dx] [dx̄]` in one
/// coordinate. A negative pole order is a holomorphic monomial factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurrentFactor {
    pub s: LinearForm,
    pub hol_pole: i32,
    pub anti_pole: i32,
    pub has_dx: bool,
    pub has_dxbar: bool,
    pub prefactor: MPoly,
}

impl CurrentFactor {
    pub fn plain(nlambda: usize) -> Self {
        Self {
            s: LinearForm::zero(nlambda),
            hol_pole: 0,
            anti_pole: 0,
            has_dx: false,
            has_dxbar: false,
            prefactor: MPoly::one(nlambda),
        }
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.has_dx) + u32::from(self.has_dxbar)
    }

    fn shape(&self) -> FactorShape {
        FactorShape {
            s: self.s.clone(),
            hol_pole: self.hol_pole,
            anti_pole: self.anti_pole,
            has_dx: self.has_dx,
            has_dxbar: self.has_dxbar,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct FactorShape {
    s: LinearForm,
    hol_pole: i32,
    anti_pole: i32,
    has_dx: bool,
    has_dxbar: bool,
}

/// `sign · tag · scalar(λ) · Π c_j^{2λ_j} · ⊗_k factor_k`, where the
/// differentials of the factors are wedged in canonical order
/// `dx₁, dx̄₁, dx₂, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorCurrent {
    pub factors: Vec<CurrentFactor>,
    pub scalar: RatFn,
    pub sign: i32,
    pub tag: Tag,
    pub units: Units,
}

impl TensorCurrent {
    /// The constant current 1.
    pub fn one(nlambda: usize, ncoords: usize) -> Self {
        Self {
            factors: vec![CurrentFactor::plain(nlambda); ncoords],
            scalar: RatFn::one(nlambda),
            sign: 1,
            tag: Tag::ONE,
            units: Vec::new(),
        }
    }

    pub fn nlambda(&self) -> usize {
        self.scalar.nvars()
    }

    pub fn ncoords(&self) -> usize {
        self.factors.len()
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.factors.iter().fold((0, 0), |(p, q), f| (p + u32::from(f.has_dx), q + u32::from(f.has_dxbar)))
    }

    pub fn hol_poles(&self) -> Vec<i32> {
        self.factors.iter().map(|f| f.hol_pole).collect()
    }

    pub fn exponents(&self) -> Vec<LinearForm> {
        self.factors.iter().map(|f| f.s.clone()).collect()
    }

    pub fn dbar_mask(&self) -> Vec<bool> {
        self.factors.iter().map(|f| f.has_dxbar).collect()
    }

    /// `sign · scalar · Π prefactor`, the full λ-coefficient.
    pub fn coefficient(&self) -> RatFn {
        let pre = self.factors.iter().fold(MPoly::one(self.nlambda()), |acc, f| &acc * &f.prefactor);
        let c = self.scalar.mul_poly(&pre);
        if self.sign < 0 {
            c.neg()
        } else {
            c
        }
    }

    /// Same current with prefactors and sign folded into the scalar.
    pub fn canonical(&self) -> Self {
        let nl = self.nlambda();
        Self {
            factors: self
                .factors
                .iter()
                .map(|f| CurrentFactor { prefactor: MPoly::one(nl), ..f.clone() })
                .collect(),
            scalar: self.coefficient(),
            sign: 1,
            tag: self.tag,
            units: normalize_units(self.units.clone()),
        }
    }

    /// Multiplies by `c · x^e`.
    pub fn mul_monomial(&self, exponents: &[u32], unit: &Rational) -> Self {
        let mut out = self.clone();
        for (f, &e) in out.factors.iter_mut().zip(exponents) {
            f.hol_pole -= e as i32;
        }
        out.scalar = out.scalar.scale(unit);
        out
    }

    /// `∂̄` of the current, as distributions for `Re λ ≫ 0`: one term per
    /// coordinate that has no `dx̄` yet.
    pub fn dbar(&self) -> Vec<Self> {
        let nl = self.nlambda();
        let mut out = Vec::new();
        let mut before = 0u32;
        for (k, f) in self.factors.iter().enumerate() {
            if !f.has_dxbar {
                // ∂/∂x̄ of x̄^{s - anti_pole} brings down (s - anti_pole).
                let d = &f.s.to_mpoly() - &MPoly::constant(nl, Rational::from_integer(f.anti_pole.into()));
                if !d.is_zero() {
                    let mut t = self.clone();
                    let g = &mut t.factors[k];
                    g.prefactor = &g.prefactor * &d;
                    g.anti_pole += 1;
                    g.has_dxbar = true;
                    // dx̄_k moves right past everything before it in canonical order.
                    let passes = before + u32::from(f.has_dx);
                    if passes % 2 == 1 {
                        t.sign = -t.sign;
                    }
                    out.push(t);
                }
            }
            before += f.degree();
        }
        out
    }

    fn shape_key(&self) -> (Vec<FactorShape>, Tag, Units) {
        (self.factors.iter().map(CurrentFactor::shape).collect(), self.tag, normalize_units(self.units.clone()))
    }
}

/// A formal sum of tensor currents over a shared variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentSum {
    nlambda: usize,
    ncoords: usize,
    terms: Vec<TensorCurrent>,
}

impl CurrentSum {
    pub fn new(nlambda: usize, ncoords: usize) -> Self {
        Self { nlambda, ncoords, terms: Vec::new() }
    }

    pub fn one(nlambda: usize, ncoords: usize) -> Self {
        let mut s = Self::new(nlambda, ncoords);
        s.push(TensorCurrent::one(nlambda, ncoords));
        s
    }

    pub fn from_terms(nlambda: usize, ncoords: usize, terms: Vec<TensorCurrent>) -> Self {
        let mut s = Self::new(nlambda, ncoords);
        for t in terms {
            s.push(t);
        }
        s
    }

    pub fn nlambda(&self) -> usize {
        self.nlambda
    }

    pub fn ncoords(&self) -> usize {
        self.ncoords
    }

    pub fn terms(&self) -> &[TensorCurrent] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: TensorCurrent) {
        assert_eq!(t.nlambda(), self.nlambda, "λ-variable mismatch");
        assert_eq!(t.ncoords(), self.ncoords, "coordinate mismatch");
        self.terms.push(t);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.sign = -t.sign;
        }
        out
    }

    pub fn mul_monomial(&self, exponents: &[u32], unit: &Rational) -> Self {
        Self { terms: self.terms.iter().map(|t| t.mul_monomial(exponents, unit)).collect(), ..self.clone() }
    }

    pub fn dbar(&self) -> Self {
        Self { terms: self.terms.iter().flat_map(TensorCurrent::dbar).collect(), ..self.clone() }
    }

    /// Terms of bidegree `(p, q)`.
    pub fn bidegree_part(&self, p: u32, q: u32) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| t.bidegree() == (p, q)).cloned().collect(),
            ..self.clone()
        }
    }

    /// Merges terms of identical shape, drops zero coefficients, and sorts.
    /// Two sums are equal as currents (for `Re λ ≫ 0`) when their canonical
    /// forms compare equal.
    pub fn canonicalize(&self) -> Self {
        let mut acc: BTreeMap<(Vec<FactorShape>, Tag, Units), (TensorCurrent, RatFn)> = BTreeMap::new();
        for t in &self.terms {
            let c = t.canonical();
            match acc.get_mut(&t.shape_key()) {
                Some((_, sum)) => *sum = sum.add(&c.scalar),
                None => {
                    let s = c.scalar.clone();
                    acc.insert(t.shape_key(), (c, s));
                }
            }
        }
        let terms = acc
            .into_values()
            .filter(|(_, s)| !s.is_zero())
            .map(|(mut t, s)| {
                t.scalar = s;
                t
            })
            .collect();
        Self { terms, ..self.clone() }
    }

    /// Exact equality as formal currents.
    pub fn same_current(&self, other: &Self) -> bool {
        let (a, b) = (self.canonicalize(), other.canonicalize());
        a.terms.len() == b.terms.len()
            && a.terms.iter().zip(&b.terms).all(|(x, y)| x.shape_key() == y.shape_key() && x.scalar.same_value(&y.scalar))
    }
}

/// One 1-form `Σ_k e_k dx_k/x_k` (or its conjugate) to be wedged in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSlot {
    pub exponents: Vec<u32>,
    pub anti: bool,
}

/// Distributes a wedge of logarithmic 1-forms over coordinates. Keys are
/// bitmasks over the canonical basis (`dx_k` is bit `2k`, `dx̄_k` bit
/// `2k+1`); values are the signed integer coefficients of the canonical
/// wedge.
pub fn wedge_groups(slots: &[FormSlot]) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut chosen = Vec::with_capacity(slots.len());
    fn rec(slots: &[FormSlot], chosen: &mut Vec<usize>, coeff: i64, out: &mut BTreeMap<u64, i64>) {
        let Some((slot, rest)) = slots.split_first() else {
            let mut inv = 0;
            for i in 0..chosen.len() {
                for j in i + 1..chosen.len() {
                    if chosen[i] > chosen[j] {
                        inv += 1;
                    }
                }
            }
            let mask = chosen.iter().fold(0u64, |m, &b| m | (1 << b));
            let c = if inv % 2 == 0 { coeff } else { -coeff };
            *out.entry(mask).or_insert(0) += c;
            return;
        };
        for (k, &e) in slot.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let b = 2 * k + usize::from(slot.anti);
            if chosen.contains(&b) {
                continue;
            }
            chosen.push(b);
            rec(rest, chosen, coeff * i64::from(e), out);
            chosen.pop();
        }
    }
    rec(slots, &mut chosen, 1, &mut out);
    out.retain(|_, c| *c != 0);
    out
}

/// Data of a product of monomial weights, poles, and logarithmic 1-forms,
/// before distributing the 1-forms over coordinates.
#[derive(Clone, Debug)]
pub struct MonomialWedge {
    pub exponents: Vec<LinearForm>,
    pub hol_poles: Vec<i32>,
    pub slots: Vec<FormSlot>,
    pub scalar: RatFn,
    pub tag: Tag,
    pub units: Units,
}

impl MonomialWedge {
    /// Expands into tensor currents. With `grouped`, each `dx̄_k/x̄_k` slot
    /// is written as `∂̄|x_k|^{2s_k} / s_k` (prefactor `s_k`); otherwise the
    /// prefactor is 1.
    pub fn expand(&self, grouped: bool) -> Vec<TensorCurrent> {
        let nl = self.scalar.nvars();
        let n = self.exponents.len();
        let mut out = Vec::new();
        for (mask, coeff) in wedge_groups(&self.slots) {
            let mut scalar = self.scalar.scale(&Rational::from_integer(coeff.into()));
            let mut factors = Vec::with_capacity(n);
            for k in 0..n {
                let has_dx = mask & (1 << (2 * k)) != 0;
                let has_dxbar = mask & (1 << (2 * k + 1)) != 0;
                let s = self.exponents[k].clone();
                let mut prefactor = MPoly::one(nl);
                if has_dxbar && grouped {
                    prefactor = s.to_mpoly();
                    scalar = scalar.div_form(&s, 1).expect("∂̄ slot exponent is nonzero");
                }
                factors.push(CurrentFactor {
                    s,
                    hol_pole: self.hol_poles[k] + i32::from(has_dx),
                    anti_pole: i32::from(has_dxbar),
                    has_dx,
                    has_dxbar,
                    prefactor,
                });
            }
            out.push(TensorCurrent {
                factors,
                scalar,
                sign: 1,
                tag: self.tag,
                units: normalize_units(self.units.clone()),
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_of_two_antiforms() {
        // (dx̄₁ + dx̄₂) ∧ dx̄₁ = dx̄₂∧dx̄₁ = -dx̄₁∧dx̄₂
        let slots = vec![
            FormSlot { exponents: vec![1, 1], anti: true },
            FormSlot { exponents: vec![1, 0], anti: true },
        ];
        let g = wedge_groups(&slots);
        assert_eq!(g.len(), 1);
        assert_eq!(g[&0b1010], -1);
    }

    #[test]
    fn dbar_sign_after_dx() {
        // ∂̄ applied to |x₁|^{2λ} dx₁ ⊗ |x₂|^{2λ}: dx̄₁ lands after dx₁ (sign -),
        // dx̄₂ passes dx₁ (sign -).
        let mut t = TensorCurrent::one(1, 2);
        t.factors[0].s = LinearForm::var(1, 0);
        t.factors[0].has_dx = true;
        t.factors[1].s = LinearForm::var(1, 0);
        let d = t.dbar();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|x| x.sign == -1));
    }

    #[test]
    fn canonicalize_merges() {
        let t = TensorCurrent::one(1, 1);
        let s = CurrentSum::from_terms(1, 1, vec![t.clone(), t.clone()]);
        let c = s.canonicalize();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].scalar.as_constant(), Some(Rational::from_integer(2.into())));
        assert!(s.add(&s.neg()).canonicalize().is_empty());
    }
}
