//! Ordered products `P^q ∧ ⋯ ∧ P^1` of rank-one `U`, `R` and `M` factors on
//! monomial sections `f_j = c_j x^{α_j}`.
//!
//! With `λ_j` attached to factor `j` (index 0 innermost),
//!
//! * `U^λ = |f|^{2λ} / f^k`,
//! * `R^λ = 1 - |f|^{2λ} + ∂̄|f|^{2λ} / f^k`,
//! * `M^λ = 1 - |f|^{2λ} + ∂̄|f|^{2λ} ∧ ∂ log|f|² / (2πi)`.
//!
//! For monomial `f` the higher terms of `M^λ` carry `(dd^c log|f|²)^{k-1}`,
//! which vanishes off the divisor, so they are dropped. Products are expanded
//! into tensor currents, paired exactly, and sent to `λ = 0` both by the
//! recursive definition (`λ_1` first) and along `λ_j = κ^{μ_j}`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::currents::{
    pairing, CoordinateTest, CurrentError, CurrentSum, Differential, ExactValue, FormSlot, LimitMode, MonomialWedge,
    RadialProfile, ScalarValue, Tag, TensorCurrent, TestForm,
};
use crate::gamma::{GammaError, Weights};
use crate::ratfun::{LinearForm, MPoly, PositivityWitness, RatFn, RatFnError, Rational};

pub const M_TRUNCATION_NOTE: &str = "terms with k >= 2 dropped: (dd^c log|f|^2)^(k-1) vanishes off the divisor";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("unsupported factor: {0}")]
    UnsupportedRank(String),
    #[error("invalid product: {0}")]
    InvalidSpec(String),
    #[error("factors do not have disjoint supports")]
    NotCompleteIntersection,
    #[error(transparent)]
    Current(#[from] CurrentError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Algebra(#[from] RatFnError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    U,
    R,
    M,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorSpec {
    pub kind: FactorKind,
    pub monomial: Vec<u32>,
    pub unit: Rational,
    pub pole_order: u32,
}

impl FactorSpec {
    pub fn new(kind: FactorKind, monomial: Vec<u32>) -> Self {
        Self { kind, monomial, unit: Rational::one(), pole_order: 1 }
    }

    pub fn r(monomial: Vec<u32>) -> Self {
        Self::new(FactorKind::R, monomial)
    }

    pub fn u(monomial: Vec<u32>) -> Self {
        Self::new(FactorKind::U, monomial)
    }

    pub fn m(monomial: Vec<u32>) -> Self {
        Self::new(FactorKind::M, monomial)
    }

    pub fn with_unit(mut self, unit: Rational) -> Self {
        self.unit = unit;
        self
    }

    pub fn with_pole_order(mut self, k: u32) -> Self {
        self.pole_order = k;
        self
    }

    fn support(&self) -> BTreeSet<usize> {
        self.monomial.iter().enumerate().filter(|(_, &a)| a > 0).map(|(k, _)| k).collect()
    }
}

/// Factors in order of continuation: `factors[0]` is innermost and gets the
/// largest weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProductSpec {
    factors: Vec<FactorSpec>,
    weights: Weights,
}

impl ProductSpec {
    /// Weights must be strictly decreasing.
    pub fn new(factors: Vec<FactorSpec>, weights: Weights) -> Result<Self, ProductError> {
        if !weights.is_strictly_decreasing() {
            return Err(ProductError::InvalidSpec(format!("weights {:?} not strictly decreasing", weights.as_slice())));
        }
        Self::exploratory(factors, weights)
    }

    /// Any positive weights.
    pub fn exploratory(factors: Vec<FactorSpec>, weights: Weights) -> Result<Self, ProductError> {
        let n = factors.first().map(|f| f.monomial.len()).ok_or_else(|| ProductError::InvalidSpec("no factors".into()))?;
        if n == 0 || n > 16 {
            return Err(ProductError::InvalidSpec(format!("{n} coordinates")));
        }
        if weights.len() != factors.len() {
            return Err(ProductError::InvalidSpec(format!("{} weights for {} factors", weights.len(), factors.len())));
        }
        for (j, f) in factors.iter().enumerate() {
            if f.monomial.len() != n {
                return Err(ProductError::InvalidSpec(format!("factor {} has {} coordinates", j + 1, f.monomial.len())));
            }
            if f.monomial.iter().all(|&a| a == 0) {
                return Err(ProductError::UnsupportedRank(format!("factor {} is a constant section", j + 1)));
            }
            if !f.unit.is_positive() {
                return Err(ProductError::InvalidSpec(format!("factor {} has non-positive unit", j + 1)));
            }
            if f.pole_order == 0 {
                return Err(ProductError::InvalidSpec(format!("factor {} has pole order 0", j + 1)));
            }
            if f.kind == FactorKind::M && f.pole_order != 1 {
                return Err(ProductError::UnsupportedRank(format!("factor {}: M takes no pole order", j + 1)));
            }
        }
        Ok(Self { factors, weights })
    }

    /// All-`R` product with unit 1 and pole order 1.
    pub fn coleff_herrera(monomials: &[Vec<u32>], weights: Weights) -> Result<Self, ProductError> {
        Self::new(monomials.iter().cloned().map(FactorSpec::r).collect(), weights)
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn nfactors(&self) -> usize {
        self.factors.len()
    }

    pub fn ncoords(&self) -> usize {
        self.factors[0].monomial.len()
    }

    pub fn with_weights(&self, weights: Weights) -> Result<Self, ProductError> {
        Self::new(self.factors.clone(), weights)
    }

    /// Largest holomorphic pole order any expansion term can carry.
    pub fn max_pole_order(&self) -> u32 {
        (0..self.ncoords())
            .map(|k| {
                self.factors
                    .iter()
                    .map(|f| match f.kind {
                        FactorKind::M => u32::from(f.monomial[k] > 0),
                        _ => f.pole_order * f.monomial[k],
                    })
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    One,
    Restrict,
    Residue,
    Principal,
    Lelong,
}

fn pieces(kind: FactorKind) -> &'static [Piece] {
    match kind {
        FactorKind::U => &[Piece::Principal],
        FactorKind::R => &[Piece::One, Piece::Restrict, Piece::Residue],
        FactorKind::M => &[Piece::One, Piece::Restrict, Piece::Lelong],
    }
}

fn selections(spec: &ProductSpec) -> Vec<Vec<Piece>> {
    let mut out = vec![Vec::new()];
    for f in &spec.factors {
        out = out
            .into_iter()
            .flat_map(|sel: Vec<Piece>| {
                pieces(f.kind).iter().map(move |&p| {
                    let mut s = sel.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    out
}

fn selection_wedge(spec: &ProductSpec, sel: &[Piece]) -> MonomialWedge {
    let q = spec.nfactors();
    let n = spec.ncoords();
    let mut exps = vec![vec![0i64; q]; n];
    let mut poles = vec![0i32; n];
    let mut scalar = Rational::one();
    let mut lambda_pow = vec![0u32; q];
    let mut lelong = 0i32;
    let mut units = Vec::new();
    for (j, (f, &p)) in spec.factors.iter().zip(sel).enumerate() {
        let weighted = !matches!(p, Piece::One);
        if weighted {
            for k in 0..n {
                exps[k][j] += i64::from(f.monomial[k]);
            }
            units.push((j, f.unit.clone()));
        }
        match p {
            Piece::One => {}
            Piece::Restrict => scalar = -scalar,
            Piece::Residue | Piece::Principal => {
                for k in 0..n {
                    poles[k] += (f.pole_order * f.monomial[k]) as i32;
                }
                scalar /= num_traits::pow(f.unit.clone(), f.pole_order as usize);
                if p == Piece::Residue {
                    lambda_pow[j] = 1;
                }
            }
            Piece::Lelong => {
                lambda_pow[j] = 1;
                lelong += 1;
            }
        }
    }
    // wedge order P^q ∧ ⋯ ∧ P^1
    let mut slots = Vec::new();
    for (f, &p) in spec.factors.iter().zip(sel).rev() {
        match p {
            Piece::Residue => slots.push(FormSlot { exponents: f.monomial.clone(), anti: true }),
            Piece::Lelong => {
                slots.push(FormSlot { exponents: f.monomial.clone(), anti: true });
                slots.push(FormSlot { exponents: f.monomial.clone(), anti: false });
            }
            _ => {}
        }
    }
    // (2πi)^{-L} = 2^{-L} π^{-L} i^{-L}
    let (sign, tag) = Tag::from_powers(-lelong, -lelong);
    scalar *= Rational::new(i64::from(sign).into(), num_bigint::BigInt::from(2).pow(lelong as u32));
    MonomialWedge {
        exponents: exps.into_iter().map(LinearForm::new).collect(),
        hol_poles: poles,
        slots,
        scalar: RatFn::from_poly(MPoly::monomial(lambda_pow, scalar)),
        tag,
        units,
    }
}

/// Expansion with each `∂̄` coordinate written as `∂̄|x_k|^{2s_k}/s_k`.
pub fn expand_product(spec: &ProductSpec) -> CurrentSum {
    expand_product_with(spec, true)
}

/// Expansion; `grouped = false` keeps prefactor 1 on every factor.
pub fn expand_product_with(spec: &ProductSpec, grouped: bool) -> CurrentSum {
    let mut sum = CurrentSum::new(spec.nfactors(), spec.ncoords());
    for sel in selections(spec) {
        for t in selection_wedge(spec, &sel).expand(grouped) {
            sum.push(t);
        }
    }
    sum
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductReport {
    pub value: ScalarValue,
    pub iterated: Result<ExactValue, RatFnError>,
    pub curve: Result<ExactValue, RatFnError>,
    pub witnesses: Vec<Result<PositivityWitness, RatFnError>>,
    pub notes: Vec<String>,
}

impl ProductReport {
    pub fn equal(&self) -> bool {
        matches!((&self.iterated, &self.curve), (Ok(a), Ok(b)) if a == b)
    }

    pub fn witnesses_hold(&self) -> bool {
        self.witnesses.iter().all(|w| w.as_ref().is_ok_and(PositivityWitness::holds))
    }
}

/// Pairs an expanded sum and takes both limits.
pub fn evaluate_sum(sum: &CurrentSum, phi: &TestForm, weights: &Weights) -> Result<ProductReport, ProductError> {
    let value = pairing(sum, phi, true)?.collapse();
    let order = LimitMode::natural_order(sum.nlambda());
    let iterated = value.value_at_zero(&order);
    let curve = value.value_at_zero(&LimitMode::Curve(weights.as_slice().to_vec()));
    let witnesses = value.terms().iter().map(|t| t.value.positivity_witness(weights.as_slice())).collect();
    Ok(ProductReport { value, iterated, curve, witnesses, notes: Vec::new() })
}

pub fn evaluate_product(spec: &ProductSpec, phi: &TestForm) -> Result<ProductReport, ProductError> {
    check_dims(spec, phi)?;
    let mut rep = evaluate_sum(&expand_product(spec), phi, spec.weights())?;
    if spec.factors.iter().any(|f| f.kind == FactorKind::M) {
        rep.notes.push(M_TRUNCATION_NOTE.into());
    }
    Ok(rep)
}

fn check_dims(spec: &ProductSpec, phi: &TestForm) -> Result<(), ProductError> {
    if phi.ncoords() != spec.ncoords() {
        return Err(CurrentError::DimensionMismatch { current: spec.ncoords(), test: phi.ncoords() }.into());
    }
    Ok(())
}

/// The top-degree part `∂̄(1/f_q) ∧ ⋯ ∧ ∂̄(1/f_1)` of an all-`R` product.
pub fn ch_current(spec: &ProductSpec) -> CurrentSum {
    expand_product(spec).bidegree_part(0, spec.nfactors() as u32)
}

/// `∂̄(1/f_q) ∧ ⋯ ∧ ∂̄(1/f_1)` paired with `φ`.
pub fn ch_product(monomials: &[Vec<u32>], phi: &TestForm, weights: &Weights) -> Result<ProductReport, ProductError> {
    let spec = ProductSpec::coleff_herrera(monomials, weights.clone())?;
    check_dims(&spec, phi)?;
    evaluate_sum(&ch_current(&spec), phi, weights)
}

/// Same as [`evaluate_product`]; for `M` factors the truncation is noted.
pub fn m_product(spec: &ProductSpec, phi: &TestForm) -> Result<ProductReport, ProductError> {
    evaluate_product(spec, phi)
}

/// Test forms complementary to the terms of `sum`: for each term, the
/// differential that completes every coordinate to `dx∧dx̄`, monomial powers
/// `x^{c+m} x̄^{d+m}` for the `extra + 1` smallest admissible `m`, and the
/// profiles `(1-t)^N`, `t(1-t)^N` with `N` one more than the worst pole.
pub fn spanning_test_forms(sum: &CurrentSum, extra: u32) -> Vec<TestForm> {
    let worst = sum
        .terms()
        .iter()
        .flat_map(|t| t.factors.iter().map(|f| f.hol_pole.max(f.anti_pole)))
        .max()
        .unwrap_or(0)
        .max(1) as u32;
    let profiles = [
        RadialProfile::standard(worst + 1).expect("order ≥ 2"),
        RadialProfile::shifted(worst + 1, 1).expect("order ≥ 2"),
    ];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in sum.terms() {
        for e in 0..=extra {
            for prof in &profiles {
                let phi = complementary_form(t, e, prof);
                let key = format!("{phi:?}");
                if seen.insert(key) {
                    out.push(phi);
                }
            }
        }
    }
    out
}

fn complementary_form(t: &TensorCurrent, e: u32, profile: &RadialProfile) -> TestForm {
    let coords = t
        .factors
        .iter()
        .map(|f| {
            let diff = match (f.has_dx, f.has_dxbar) {
                (true, true) => Differential::One,
                (true, false) => Differential::Dxbar,
                (false, true) => Differential::Dx,
                (false, false) => Differential::DxDxbar,
            };
            let m = -i64::from(f.hol_pole.min(f.anti_pole)) + i64::from(e);
            let a = (i64::from(f.hol_pole) + m).max(0) as u32;
            let d = (i64::from(f.anti_pole) + m).max(0) as u32;
            CoordinateTest::new(a, d, profile.clone(), diff)
        })
        .collect();
    TestForm::new(coords)
}

fn check_complete_intersection(spec: &ProductSpec) -> Result<(), ProductError> {
    if spec.factors.iter().any(|f| f.kind != FactorKind::R || f.pole_order != 1) {
        return Err(ProductError::InvalidSpec("annihilation test needs an all-R product".into()));
    }
    let mut used = BTreeSet::new();
    for f in &spec.factors {
        for k in f.support() {
            if !used.insert(k) {
                return Err(ProductError::NotCompleteIntersection);
            }
        }
    }
    Ok(())
}

/// Whether `g · ∂̄(1/f_q) ∧ ⋯ ∧ ∂̄(1/f_1)` vanishes on a spanning family of
/// test forms: on each coordinate `x^a x̄^d ψ(|x|²)` with `a` up to the pole
/// order plus one, `d ∈ {0, 1}`, `ψ ∈ {(1-t)^N, t(1-t)^N}`, and every
/// placement of the `dx` factors.
pub fn annihilation_test(spec: &ProductSpec, g: &[u32]) -> Result<bool, ProductError> {
    check_complete_intersection(spec)?;
    let n = spec.ncoords();
    if g.len() != n {
        return Err(ProductError::InvalidSpec(format!("g has {} coordinates, expected {n}", g.len())));
    }
    let current = ch_current(spec).mul_monomial(g, &Rational::one());
    if current.is_empty() {
        return Ok(true);
    }
    let q = spec.nfactors() as u32;
    let top = spec.max_pole_order();
    let profiles = [
        RadialProfile::standard(top + 1).map_err(ProductError::Current)?,
        RadialProfile::shifted(top + 1, 1).map_err(ProductError::Current)?,
    ];
    let order = LimitMode::natural_order(spec.nfactors());
    let masks: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() == q).collect();
    let per_coord: Vec<(u32, u32)> = (0..=top + 1).flat_map(|a| (0..=1).map(move |d| (a, d))).collect();
    let total = per_coord.len().pow(n as u32);
    for mask in masks {
        for prof in &profiles {
            for idx in 0..total {
                let mut rest = idx;
                let coords = (0..n)
                    .map(|k| {
                        let (a, d) = per_coord[rest % per_coord.len()];
                        rest /= per_coord.len();
                        let diff = if mask & (1 << k) != 0 { Differential::Dx } else { Differential::DxDxbar };
                        CoordinateTest::new(a, d, prof.clone(), diff)
                    })
                    .collect();
                let phi = TestForm::new(coords);
                let v = pairing(&current, &phi, false)?;
                if !v.value_at_zero(&order)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `R(f)` against `1 - (δ_f - ∂̄) U(f)` as formal currents, where `δ_f`
/// multiplies by `f`. Requires pole order 1.
pub fn structural_identity(factor: &FactorSpec) -> Result<bool, ProductError> {
    if factor.pole_order != 1 {
        return Err(ProductError::InvalidSpec("identity holds for pole order 1".into()));
    }
    let w = Weights::new(vec![1])?;
    let r = ProductSpec::exploratory(vec![FactorSpec { kind: FactorKind::R, ..factor.clone() }], w.clone())?;
    let u = ProductSpec::exploratory(vec![FactorSpec { kind: FactorKind::U, ..factor.clone() }], w)?;
    let n = factor.monomial.len();
    let lhs = expand_product(&r);
    let us = expand_product(&u);
    let nabla = us.mul_monomial(&factor.monomial, &factor.unit).add(&us.dbar().neg());
    let rhs = CurrentSum::one(1, n).add(&nabla.neg());
    Ok(lhs.same_current(&rhs))
}

/// `Σ_j α_j ∫_{x_j = 0} φ` for a test form whose coordinate `j` carries no
/// differential and every other coordinate the area element. Computed by
/// direct polynomial integration of the profiles.
pub fn lelong_oracle(alpha: &[u32], phi: &TestForm) -> ExactValue {
    let mut total = Rational::zero();
    let mut tag = Tag::ONE;
    for (j, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let cj = &phi.coords[j];
        if cj.diff != Differential::One || cj.hol != 0 || cj.anti != 0 {
            continue;
        }
        let mut v = Rational::from_integer(a.into()) * cj.profile.value_at_zero();
        let mut pis = 0;
        for (k, ck) in phi.coords.iter().enumerate() {
            if k == j {
                continue;
            }
            if ck.diff != Differential::Area || ck.hol != ck.anti {
                v = Rational::zero();
                break;
            }
            v *= radial_moment(&ck.profile, ck.hol);
            pis += 1;
        }
        if !v.is_zero() {
            tag = Tag { pi: pis, i: 0 };
            total += v;
        }
    }
    ExactValue::tagged(tag, total)
}

/// `∫₀¹ t^m ψ(t) dt` by expanding `ψ` into powers of `t`.
fn radial_moment(profile: &RadialProfile, m: u32) -> Rational {
    let n = profile.order() as usize;
    let mut binom = vec![Rational::one(); n + 1];
    for i in 1..=n {
        binom[i] = &binom[i - 1] * Rational::new(((n - i + 1) as i64).into(), (i as i64).into());
    }
    let mut acc = Rational::zero();
    for (e, c) in profile.coeffs().iter().enumerate() {
        for (i, b) in binom.iter().enumerate() {
            let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
            let deg = m as i64 + e as i64 + i as i64 + 1;
            acc += c * b * sign / Rational::from_integer(deg.into());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn w(mu: &[u32]) -> Weights {
        Weights::strict(mu.to_vec()).unwrap()
    }

    fn dz_dw(hol: [u32; 2], n: u32) -> TestForm {
        let p = RadialProfile::standard(n).unwrap();
        TestForm::uniform(&hol, &[0, 0], &p, &[Differential::Dx, Differential::Dx])
    }

    #[test]
    fn term_counts() {
        let s = ProductSpec::coleff_herrera(&[vec![1, 0], vec![0, 1]], w(&[3, 1])).unwrap();
        let e = expand_product(&s);
        assert_eq!(e.len(), 9);
        assert_eq!(e.bidegree_part(0, 2).len(), 1);
        let u = ProductSpec::new(vec![FactorSpec::u(vec![1])], w(&[1])).unwrap();
        let e = expand_product(&u);
        assert_eq!(e.len(), 1);
        assert_eq!(e.terms()[0].bidegree(), (0, 0));
    }

    #[test]
    fn z_zw_top_part_matches_gamma() {
        let s = ProductSpec::coleff_herrera(&[vec![1, 0], vec![1, 1]], w(&[3, 1])).unwrap();
        let top = ch_current(&s);
        assert_eq!(top.len(), 1);
        let t = &top.terms()[0];
        assert_eq!(t.hol_poles(), vec![2, 1]);
        assert_eq!(t.exponents(), vec![LinearForm::new(vec![1, 1]), LinearForm::new(vec![0, 1])]);
    }

    #[test]
    fn worked_examples() {
        let phi = dz_dw([1, 0], 4);
        let zero = ch_product(&[vec![1, 0], vec![1, 1]], &phi, &w(&[3, 1])).unwrap();
        assert!(zero.equal());
        assert!(zero.iterated.as_ref().unwrap().is_zero());
        let rev = ch_product(&[vec![1, 1], vec![1, 0]], &phi, &w(&[3, 1])).unwrap();
        assert!(rev.equal());
        let v = rev.iterated.unwrap();
        assert_eq!(v.single(), Some((Tag { pi: 2, i: 0 }, q(4))));
        let tensor = ch_product(&[vec![1, 0], vec![0, 1]], &dz_dw([0, 0], 4), &w(&[3, 1])).unwrap();
        assert_eq!(tensor.curve.unwrap().single(), Some((Tag { pi: 2, i: 0 }, q(-4))));
    }

    #[test]
    fn lelong_example() {
        let p = RadialProfile::standard(2).unwrap();
        let phi = TestForm::uniform(&[0, 0], &[0, 0], &p, &[Differential::One, Differential::Area]);
        let s = ProductSpec::new(vec![FactorSpec::m(vec![2, 1])], w(&[1])).unwrap();
        let rep = m_product(&s, &phi).unwrap();
        assert!(rep.equal());
        let expect = ExactValue::tagged(Tag { pi: 1, i: 0 }, Rational::new(2.into(), 3.into()));
        assert_eq!(rep.iterated.unwrap(), expect);
        assert_eq!(lelong_oracle(&[2, 1], &phi), expect);
        // degree-0 part on a top-degree form vanishes
        let phi = TestForm::uniform(&[0, 0], &[0, 0], &p, &[Differential::Area, Differential::Area]);
        assert!(m_product(&s, &phi).unwrap().iterated.unwrap().is_zero());
    }

    #[test]
    fn duality_examples() {
        let s = ProductSpec::coleff_herrera(&[vec![2, 0], vec![0, 1]], w(&[2, 1])).unwrap();
        assert!(annihilation_test(&s, &[2, 0]).unwrap());
        assert!(!annihilation_test(&s, &[1, 0]).unwrap());
        assert!(annihilation_test(&s, &[0, 1]).unwrap());
        let bad = ProductSpec::coleff_herrera(&[vec![1, 0], vec![1, 1]], w(&[2, 1])).unwrap();
        assert_eq!(annihilation_test(&bad, &[1, 0]), Err(ProductError::NotCompleteIntersection));
    }

    #[test]
    fn structural_identity_examples() {
        assert!(structural_identity(&FactorSpec::r(vec![2, 1, 0])).unwrap());
        assert!(structural_identity(&FactorSpec::r(vec![1]).with_unit(q(3))).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ProductSpec::new(vec![FactorSpec::r(vec![0, 0])], w(&[1])).is_err());
        assert!(ProductSpec::new(vec![FactorSpec::r(vec![1]), FactorSpec::r(vec![1])], Weights::new(vec![1, 2]).unwrap()).is_err());
    }

    #[test]
    fn radial_moment_matches_beta() {
        // ∫ t (1-t)^3 = 1/20
        let p = RadialProfile::standard(3).unwrap();
        assert_eq!(radial_moment(&p, 1), Rational::new(1.into(), 20.into()));
    }
}
