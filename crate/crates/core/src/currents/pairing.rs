use rayon::prelude::*;

use super::form::{CoordinateTest, Differential, TestForm};
use super::scalar::{ScalarTerm, ScalarValue, Tag};
use super::tensor::{CurrentFactor, CurrentSum, TensorCurrent};
use super::CurrentError;
use crate::ratfun::{RatFn, Rational};

/// Value of one coordinate: `value(λ) · tag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPairing {
    pub value: RatFn,
    pub tag: Tag,
}

/// Pairs one coordinate factor (wedged first) with one coordinate of a test
/// form. Uses `dx∧dx̄ = -2i dA` and `∫ |x|^{2s} ψ(|x|²) dA = π M_ψ(s)`.
pub fn factor_pairing(factor: &CurrentFactor, test: &CoordinateTest) -> Result<FactorPairing, CurrentError> {
    let nl = factor.s.nvars();
    let (coeff, i_power) = match (factor.has_dx, factor.has_dxbar, test.diff) {
        (true, true, Differential::One) => (-2, 1),
        (false, false, Differential::DxDxbar) => (-2, 1),
        (false, false, Differential::Area) => (1, 0),
        (true, false, Differential::Dxbar) => (-2, 1),
        (false, true, Differential::Dx) => (2, 1),
        _ => {
            return Err(CurrentError::DegreeMismatch {
                current: (u32::from(factor.has_dx), u32::from(factor.has_dxbar)),
                test: (test.diff.holo_degree(), test.diff.anti_degree()),
            })
        }
    };
    let tag = Tag { pi: 1, i: i_power };
    let worst = factor.hol_pole.max(factor.anti_pole).max(0) as u32;
    if test.profile.order() < worst + 1 {
        return Err(CurrentError::InsufficientSmoothness { needed: worst + 1, got: test.profile.order() });
    }
    let m = test.hol as i64 - i64::from(factor.hol_pole);
    if m != test.anti as i64 - i64::from(factor.anti_pole) {
        return Ok(FactorPairing { value: RatFn::zero(nl), tag });
    }
    let mellin = test.profile.mellin(&factor.s.shifted(m))?;
    let value = mellin.mul_poly(&factor.prefactor).scale(&Rational::from_integer(coeff.into()));
    Ok(FactorPairing { value, tag })
}

/// Pairs one tensor current against a split test form. `Ok(None)` on a
/// bidegree mismatch.
pub fn tensor_pairing(t: &TensorCurrent, phi: &TestForm) -> Result<Option<ScalarTerm>, CurrentError> {
    if t.ncoords() != phi.ncoords() {
        return Err(CurrentError::DimensionMismatch { current: t.ncoords(), test: phi.ncoords() });
    }
    let mut parts = Vec::with_capacity(t.ncoords());
    for (f, c) in t.factors.iter().zip(&phi.coords) {
        match factor_pairing(f, c) {
            Ok(p) => parts.push(p),
            Err(CurrentError::DegreeMismatch { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    // Reorder C₁…C_n T₁…T_n into C₁T₁ C₂T₂ …
    let mut inversions = 0u32;
    let mut later = 0u32;
    for (f, c) in t.factors.iter().zip(&phi.coords).rev() {
        inversions += c.diff.degree() * later;
        later += f.degree();
    }
    let mut sign = if inversions.is_multiple_of(2) { t.sign } else { -t.sign };
    let mut tag = t.tag;
    let mut value = t.scalar.clone();
    for p in parts {
        if p.value.is_zero() {
            value = RatFn::zero(value.nvars());
            break;
        }
        let (s, tg) = tag.mul(p.tag);
        sign *= s;
        tag = tg;
        value = value.mul(&p.value);
    }
    if sign < 0 {
        value = value.neg();
    }
    Ok(Some(ScalarTerm { tag, value, units: t.units.clone() }))
}

/// Pairs a sum of currents with a test form. Terms of non-complementary
/// bidegree contribute 0; with `strict`, a nonempty sum with no matching
/// term is an error.
pub fn pairing(currents: &CurrentSum, phi: &TestForm, strict: bool) -> Result<ScalarValue, CurrentError> {
    let results: Vec<Result<Option<ScalarTerm>, CurrentError>> =
        currents.terms().par_iter().map(|t| tensor_pairing(t, phi)).collect();
    let mut out = ScalarValue::zero(currents.nlambda());
    let mut matched = false;
    for r in results {
        if let Some(term) = r? {
            matched = true;
            out.push(term);
        }
    }
    if strict && !matched && !currents.is_empty() {
        return Err(CurrentError::DegreeMismatch { current: currents.terms()[0].bidegree(), test: phi.bidegree() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::form::RadialProfile;
    use super::*;
    use crate::ratfun::{LinearForm, MPoly};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// `∂̄|x|^{2λ}/x^k`.
    fn residue_factor(k: i32) -> CurrentFactor {
        CurrentFactor {
            s: LinearForm::var(1, 0),
            hol_pole: k,
            anti_pole: 1,
            has_dx: false,
            has_dxbar: true,
            prefactor: MPoly::var(1, 0),
        }
    }

    #[test]
    fn cauchy_pompeiu() {
        let prof = RadialProfile::standard(4).unwrap();
        let t = CoordinateTest::new(0, 0, prof, Differential::Dx);
        let p = factor_pairing(&residue_factor(1), &t).unwrap();
        assert_eq!(p.tag, Tag { pi: 1, i: 1 });
        assert_eq!(p.value.iterated_limit(&[0]).unwrap(), q(2));
    }

    #[test]
    fn second_order_pole() {
        let prof = RadialProfile::standard(4).unwrap();
        let t = CoordinateTest::new(1, 0, prof.clone(), Differential::Dx);
        assert_eq!(factor_pairing(&residue_factor(2), &t).unwrap().value.iterated_limit(&[0]).unwrap(), q(2));
        // x·∂̄(1/x) = 0 by angular orthogonality
        assert!(factor_pairing(&residue_factor(1), &t).unwrap().value.is_zero());
    }

    #[test]
    fn degree_mismatch_and_smoothness() {
        let prof = RadialProfile::standard(2).unwrap();
        let t = CoordinateTest::new(0, 0, prof.clone(), Differential::Dxbar);
        assert!(matches!(factor_pairing(&residue_factor(1), &t), Err(CurrentError::DegreeMismatch { .. })));
        let t = CoordinateTest::new(2, 0, prof, Differential::Dx);
        assert!(matches!(
            factor_pairing(&residue_factor(3), &t),
            Err(CurrentError::InsufficientSmoothness { .. })
        ));
    }

    #[test]
    fn empty_sum_is_zero() {
        let prof = RadialProfile::standard(2).unwrap();
        let phi = TestForm::uniform(&[0], &[0], &prof, &[Differential::Dx]);
        let v = pairing(&CurrentSum::new(1, 1), &phi, true).unwrap();
        assert!(v.is_formally_zero());
    }

    #[test]
    fn constant_current_on_area() {
        // ∫ (1-t)² (i/2)dx∧dx̄ = π/3
        let prof = RadialProfile::standard(2).unwrap();
        let phi = TestForm::uniform(&[0], &[0], &prof, &[Differential::Area]);
        let v = pairing(&CurrentSum::one(1, 1), &phi, true).unwrap();
        let e = v.value_at_zero(&super::super::LimitMode::natural_order(1)).unwrap();
        assert_eq!(e.single(), Some((Tag { pi: 1, i: 0 }, Rational::new(1.into(), 3.into()))));
    }
}
