//! Pointwise evaluation of differential forms on `ℂⁿ`.
//!
//! A form is a dense coefficient vector indexed by bitmasks over the real
//! basis `dx_1, dx̄_1, dx_2, …` (`dx_k` is bit `2k`, `dx̄_k` bit `2k+1`).

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::currents::{Differential, TestForm};
use crate::products::{FactorKind, FactorSpec};

pub(crate) struct Algebra {
    dim: usize,
    sign: Vec<i8>,
}

impl Algebra {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << (2 * n);
        let mut sign = vec![0i8; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                if a & b != 0 {
                    continue;
                }
                let mut inv = 0u32;
                for j in 0..2 * n {
                    if b & (1 << j) != 0 {
                        inv += (a >> (j + 1)).count_ones();
                    }
                }
                sign[a * dim + b] = if inv.is_multiple_of(2) { 1 } else { -1 };
            }
        }
        Self { dim, sign }
    }

    pub fn full(&self) -> usize {
        self.dim - 1
    }

    pub fn scalar(&self, c: Complex64) -> Vec<Complex64> {
        let mut f = vec![Complex64::new(0.0, 0.0); self.dim];
        f[0] = c;
        f
    }

    pub fn sign(&self, a: usize, b: usize) -> i8 {
        self.sign[a * self.dim + b]
    }

    pub fn wedge(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (ma, ca) in a.iter().enumerate() {
            if ca.re == 0.0 && ca.im == 0.0 {
                continue;
            }
            for (mb, cb) in b.iter().enumerate() {
                if cb.re == 0.0 && cb.im == 0.0 {
                    continue;
                }
                match self.sign[ma * self.dim + mb] {
                    0 => {}
                    1 => out[ma | mb] += ca * cb,
                    _ => out[ma | mb] -= ca * cb,
                }
            }
        }
        out
    }
}

/// A point of `ℂⁿ` with the quantities every integrand needs.
pub(crate) struct Point {
    pub x: Vec<Complex64>,
    pub t: Vec<f64>,
}

impl Point {
    pub fn polar(t: &[f64], theta: &[f64]) -> Self {
        let x = t.iter().zip(theta).map(|(&t, &th)| Complex64::from_polar(t.sqrt(), th)).collect();
        Self { x, t: t.to_vec() }
    }

    /// `c² Π t_k^{α_k}`.
    pub fn abs2(&self, alpha: &[u32], c: f64) -> f64 {
        alpha.iter().zip(&self.t).fold(c * c, |acc, (&a, &t)| acc * t.powi(a as i32))
    }

    /// `c^k Π x_k^{kα_k}`.
    pub fn power(&self, alpha: &[u32], c: f64, k: u32) -> Complex64 {
        alpha
            .iter()
            .zip(&self.x)
            .fold(Complex64::new(c.powi(k as i32), 0.0), |acc, (&a, &x)| acc * x.powi((a * k) as i32))
    }

    /// `∂̄ log|x^α|²` (anti) or `∂ log|x^α|²`.
    pub fn dlog(&self, alg: &Algebra, alpha: &[u32], anti: bool) -> Vec<Complex64> {
        let mut f = vec![Complex64::new(0.0, 0.0); alg.dim];
        for (k, (&a, x)) in alpha.iter().zip(&self.x).enumerate() {
            if a > 0 {
                let (bit, z) = if anti { (2 * k + 1, x.conj()) } else { (2 * k, *x) };
                f[1 << bit] = f64::from(a) / z;
            }
        }
        f
    }
}

fn unit(f: &FactorSpec) -> f64 {
    f.unit.to_f64().unwrap_or(f64::NAN)
}

/// `U^λ`, `R^λ` or `M^λ` of one factor at a point.
pub(crate) fn regularized_factor(alg: &Algebra, p: &Point, f: &FactorSpec, lambda: f64) -> Vec<Complex64> {
    let c = unit(f);
    let w = p.abs2(&f.monomial, c).powf(lambda);
    match f.kind {
        FactorKind::U => alg.scalar(Complex64::new(w, 0.0) / p.power(&f.monomial, c, f.pole_order)),
        FactorKind::R => {
            let mut form = p.dlog(alg, &f.monomial, true);
            let s = lambda * w / p.power(&f.monomial, c, f.pole_order);
            form.iter_mut().for_each(|z| *z *= s);
            form[0] = Complex64::new(1.0 - w, 0.0);
            form
        }
        FactorKind::M => {
            let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
            let mut form = alg.wedge(&p.dlog(alg, &f.monomial, true), &p.dlog(alg, &f.monomial, false));
            let s = lambda * w / two_pi_i;
            form.iter_mut().for_each(|z| *z *= s);
            form[0] = Complex64::new(1.0 - w, 0.0);
            form
        }
    }
}

/// `∂̄χ(|f|²/ε) / f^k` with the factor `χ'(v) v` left out (it becomes the
/// weight of the shell variable).
pub(crate) fn shell_factor(alg: &Algebra, p: &Point, f: &FactorSpec) -> Vec<Complex64> {
    let mut form = p.dlog(alg, &f.monomial, true);
    let s = Complex64::new(1.0, 0.0) / p.power(&f.monomial, unit(f), f.pole_order);
    form.iter_mut().for_each(|z| *z *= s);
    form
}

/// Mask and coefficient of a split test form at a point.
pub(crate) fn test_form_at(phi: &TestForm, p: &Point) -> (usize, Complex64) {
    let mut mask = 0usize;
    let mut c = Complex64::new(1.0, 0.0);
    for (k, (ct, x)) in phi.coords.iter().zip(&p.x).enumerate() {
        c *= x.powi(ct.hol as i32) * x.conj().powi(ct.anti as i32) * ct.profile.value(p.t[k]);
        match ct.diff {
            Differential::One => {}
            Differential::Dx => mask |= 1 << (2 * k),
            Differential::Dxbar => mask |= 1 << (2 * k + 1),
            Differential::DxDxbar => mask |= 3 << (2 * k),
            Differential::Area => {
                mask |= 3 << (2 * k);
                c *= Complex64::new(0.0, 0.5);
            }
        }
    }
    (mask, c)
}

/// Top-degree coefficient of `current ∧ φ` in the basis
/// `dx_1∧dx̄_1∧⋯∧dx_n∧dx̄_n`.
pub(crate) fn top_coefficient(alg: &Algebra, current: &[Complex64], phi: (usize, Complex64)) -> Complex64 {
    let (mphi, cphi) = phi;
    let full = alg.full();
    if mphi & !full != 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mc = full ^ mphi;
    match alg.sign(mc, mphi) {
        0 => Complex64::new(0.0, 0.0),
        s => current[mc] * cphi * f64::from(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_anticommutes() {
        let alg = Algebra::new(2);
        let mut a = alg.scalar(Complex64::new(0.0, 0.0));
        let mut b = a.clone();
        a[1 << 1] = Complex64::new(1.0, 0.0);
        b[1 << 2] = Complex64::new(1.0, 0.0);
        let ab = alg.wedge(&a, &b);
        let ba = alg.wedge(&b, &a);
        assert_eq!(ab[0b110], -ba[0b110]);
        assert_eq!(alg.wedge(&a, &a)[0b10], Complex64::new(0.0, 0.0));
    }
}
