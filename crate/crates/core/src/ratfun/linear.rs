use std::fmt;

use num_integer::Integer;

use super::{MPoly, Rational, UniPoly};

/// An integer affine form `c_1 λ_1 + ... + c_r λ_r + offset`.
///
/// The forms `b_k(λ) = Σ_ℓ α_{ℓ,k} λ_ℓ` have `offset = 0`. Shifted copies
/// `b_k(λ) + m` appear as the denominators of exact Mellin transforms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<i64>,
    offset: i64,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs, offset: 0 }
    }

    pub fn affine(coeffs: Vec<i64>, offset: i64) -> Self {
        Self { coeffs, offset }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    /// The coordinate form `λ_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut coeffs = vec![0; nvars];
        coeffs[i] = 1;
        Self::new(coeffs)
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs[i]
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.offset == 0 && self.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when the form is `c·λ_var` for some nonzero `c`.
    pub fn is_var_multiple(&self, var: usize) -> bool {
        self.offset == 0
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, &c)| (i == var) == (c != 0))
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.offset >= 0 && self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self { coeffs: self.coeffs.clone(), offset: self.offset + by }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars(), "linear forms over different variable lists");
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            offset: self.offset + other.offset,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * k).collect(), offset: self.offset * k }
    }

    /// Splits the form as `content · primitive` where the primitive form has
    /// coprime entries and its first nonzero entry (coefficients, then offset)
    /// positive. Returns `(0, self)` for the zero form.
    pub fn normalize(&self) -> (i64, LinearForm) {
        let g = self.coeffs.iter().fold(self.offset.abs(), |g, &c| g.gcd(&c));
        if g == 0 {
            return (0, self.clone());
        }
        let lead = self.coeffs.iter().copied().find(|&c| c != 0).unwrap_or(self.offset);
        let content = if lead < 0 { -g } else { g };
        let primitive = Self {
            coeffs: self.coeffs.iter().map(|c| c / content).collect(),
            offset: self.offset / content,
        };
        (content, primitive)
    }

    pub fn set_zero(&self, var: usize) -> Self {
        let mut out = self.clone();
        out.coeffs[var] = 0;
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::from_integer(self.offset.into());
        for (c, x) in self.coeffs.iter().zip(point) {
            if *c != 0 {
                acc += x * Rational::from_integer((*c).into());
            }
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.coeffs.iter().zip(point).map(|(&c, x)| c as f64 * x).sum::<f64>() + self.offset as f64
    }

    /// Reindexes arguments: the result evaluated at `λ` equals `self` evaluated
    /// at `(λ_σ(1), …, λ_σ(r))`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        let mut coeffs = vec![0; self.nvars()];
        for (l, &c) in self.coeffs.iter().enumerate() {
            coeffs[sigma[l]] += c;
        }
        Self { coeffs, offset: self.offset }
    }

    pub fn to_mpoly(&self) -> MPoly {
        let n = self.nvars();
        let mut p = MPoly::constant(n, Rational::from_integer(self.offset.into()));
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                p.add_term(e, Rational::from_integer(c.into()));
            }
        }
        p
    }

    /// Substitutes `λ_j = κ^{μ_j}`.
    pub fn curve(&self, mu: &[u32]) -> UniPoly {
        let mut coeffs = vec![Rational::from_integer(self.offset.into())];
        for (&c, &m) in self.coeffs.iter().zip(mu) {
            if c == 0 {
                continue;
            }
            let m = m as usize;
            if coeffs.len() <= m {
                coeffs.resize(m + 1, Rational::from_integer(0.into()));
            }
            coeffs[m] += Rational::from_integer(c.into());
        }
        UniPoly::new(coeffs)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push_str(if c < 0 { " - " } else { " + " });
            } else if c < 0 {
                out.push('-');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&names[i]);
        }
        if self.offset != 0 || out.is_empty() {
            if out.is_empty() {
                out.push_str(&self.offset.to_string());
            } else {
                out.push_str(if self.offset < 0 { " - " } else { " + " });
                out.push_str(&self.offset.abs().to_string());
            }
        }
        out
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&super::lambda_names(self.nvars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_moves_content_and_sign() {
        let (c, p) = LinearForm::affine(vec![-2, 0, 4], -6).normalize();
        assert_eq!(c, -2);
        assert_eq!(p, LinearForm::affine(vec![1, 0, -2], 3));
        let (c, p) = LinearForm::affine(vec![0, 0], 5).normalize();
        assert_eq!((c, p), (5, LinearForm::affine(vec![0, 0], 1)));
        assert_eq!(LinearForm::zero(2).normalize().0, 0);
    }

    #[test]
    fn var_multiple_detection() {
        assert!(LinearForm::new(vec![0, 3]).is_var_multiple(1));
        assert!(!LinearForm::new(vec![1, 3]).is_var_multiple(1));
        assert!(!LinearForm::affine(vec![0, 1], 1).is_var_multiple(1));
    }

    #[test]
    fn curve_collects_equal_weights() {
        let l = LinearForm::affine(vec![1, 2], 1);
        let u = l.curve(&[2, 2]);
        assert_eq!(u.coeffs().len(), 3);
        assert_eq!(u.coeffs()[2], Rational::from_integer(3.into()));
    }

    #[test]
    fn display() {
        assert_eq!(LinearForm::affine(vec![1, 2], -1).to_string(), "λ1 + 2λ2 - 1");
        assert_eq!(LinearForm::new(vec![0, 0]).to_string(), "0");
    }
}
