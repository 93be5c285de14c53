//! The coefficient functions of a wedge of `∂̄|x^{α_ℓ}|^{2λ_ℓ}`.
//!
//! Writing `b_k(λ) = Σ_ℓ α_{ℓ,k} λ_ℓ`, the product
//! `∂̄|x^{α_p}|^{2λ_p} ∧ ⋯ ∧ ∂̄|x^{α_1}|^{2λ_1} · Π_{ℓ>p} |x^{α_ℓ}|^{2λ_ℓ} / x^{Σ k_ℓ α_ℓ}`
//! splits over increasing column sets `I` into `A_I γ_I(λ)` times a tensor
//! product of one-variable currents, where `A_I` is a `p×p` minor of `α` and
//! `γ_I = λ_1⋯λ_p / Π_{i∈I} b_i`. The iterated limit of `γ_I^σ` agrees with
//! its limit along `λ_j = κ^{μ_j}` whenever `μ` is strictly decreasing.

use std::fmt;

use thiserror::Error;

use crate::currents::{CurrentFactor, FormSlot, MonomialWedge, Tag, TensorCurrent};
use crate::ratfun::{LinearForm, MPoly, PositivityWitness, RatFn, RatFnError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("minor on columns {columns:?} is singular")]
    SingularMinor { columns: Vec<usize> },
    #[error("invalid exponent matrix: {0}")]
    InvalidMatrix(String),
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("holomorphy witness failed: {0}")]
    WitnessFails(String),
    #[error(transparent)]
    Algebra(#[from] RatFnError),
}

/// Row `ℓ` holds the exponent vector of the monomial `x^{α_ℓ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u32>>,
    ncols: usize,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self, GammaError> {
        let ncols = rows.first().map(Vec::len).ok_or_else(|| GammaError::InvalidMatrix("no rows".into()))?;
        if ncols == 0 {
            return Err(GammaError::InvalidMatrix("no columns".into()));
        }
        for (l, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(GammaError::InvalidMatrix(format!("row {} has length {}, expected {ncols}", l + 1, row.len())));
            }
            if row.iter().all(|&a| a == 0) {
                return Err(GammaError::InvalidMatrix(format!("row {} is zero", l + 1)));
            }
        }
        Ok(Self { rows, ncols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        Self { rows, ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.rows[row][col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.rows[row]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        f.write_str("]")
    }
}

/// Positive integer weights `μ` for the curve `λ_j = κ^{μ_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights(Vec<u32>);

impl Weights {
    /// Any positive weights (exploratory use).
    pub fn new(mu: Vec<u32>) -> Result<Self, GammaError> {
        if mu.is_empty() || mu.contains(&0) {
            return Err(GammaError::InvalidWeights(format!("{mu:?}: entries must be positive")));
        }
        Ok(Self(mu))
    }

    /// Strictly decreasing positive weights.
    pub fn strict(mu: Vec<u32>) -> Result<Self, GammaError> {
        let w = Self::new(mu)?;
        if !w.is_strictly_decreasing() {
            return Err(GammaError::InvalidWeights(format!("{:?} is not strictly decreasing", w.0)));
        }
        Ok(w)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<(), GammaError> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(GammaError::InvalidPermutation(n));
    }
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(GammaError::InvalidPermutation(n));
        }
        seen[s] = true;
    }
    Ok(())
}

/// `b_k = Σ_ℓ α_{ℓ,k} λ_ℓ`, one form per column.
pub fn b_forms(alpha: &ExponentMatrix) -> Vec<LinearForm> {
    (0..alpha.ncols())
        .map(|k| LinearForm::new(alpha.rows.iter().map(|row| i64::from(row[k])).collect()))
        .collect()
}

/// Determinant of rows `0..p`, columns `columns` (fraction-free elimination).
pub fn minor_det(alpha: &ExponentMatrix, columns: &[usize], p: usize) -> Result<i64, GammaError> {
    if p > alpha.nrows() {
        return Err(GammaError::IndexOutOfRange { index: p, bound: alpha.nrows() });
    }
    if columns.len() != p {
        return Err(GammaError::IndexOutOfRange { index: columns.len(), bound: p });
    }
    if let Some(&c) = columns.iter().find(|&&c| c >= alpha.ncols()) {
        return Err(GammaError::IndexOutOfRange { index: c, bound: alpha.ncols() });
    }
    let mut m: Vec<Vec<i128>> =
        (0..p).map(|l| columns.iter().map(|&c| i128::from(alpha.get(l, c))).collect()).collect();
    Ok(bareiss(&mut m) as i64)
}

fn bareiss(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// `γ_I^σ`: `λ_1⋯λ_p / Π_{i∈I} b_i`, arguments permuted by `σ`.
pub fn gamma_fn_on(alpha: &ExponentMatrix, columns: &[usize], sigma: &[usize]) -> Result<RatFn, GammaError> {
    let r = alpha.nrows();
    check_permutation(sigma, r)?;
    let p = columns.len();
    if minor_det(alpha, columns, p)? == 0 {
        return Err(GammaError::SingularMinor { columns: columns.to_vec() });
    }
    let b = b_forms(alpha);
    let num = MPoly::monomial((0..r).map(|l| u32::from(l < p)).collect(), Rational::from_integer(1.into()));
    let g = RatFn::new(num, columns.iter().map(|&c| (b[c].clone(), 1)))?;
    Ok(g.permute(sigma))
}

/// `γ^σ` on the leading columns `I = {1, …, p}`.
pub fn gamma_fn(alpha: &ExponentMatrix, p: usize, sigma: &[usize]) -> Result<RatFn, GammaError> {
    let columns: Vec<usize> = (0..p).collect();
    gamma_fn_on(alpha, &columns, sigma)
}

/// One summand `A_I γ_I Γ_I` of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTerm {
    pub columns: Vec<usize>,
    pub minor: i64,
    pub gamma: RatFn,
    /// `Γ_I` with coefficient: scalar `A_I γ_I`, a `∂̄|x_i|^{2b_i}/b_i`
    /// factor on each `i ∈ I`, and sign `(-1)^{p(p-1)/2}` from reversing
    /// the wedge into canonical order.
    pub tensor: TensorCurrent,
}

pub(crate) fn increasing_subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

fn pole_orders(alpha: &ExponentMatrix, k: &[u32]) -> Vec<i32> {
    (0..alpha.ncols())
        .map(|c| alpha.rows.iter().zip(k).map(|(row, &kl)| (kl * row[c]) as i32).sum())
        .collect()
}

fn check_multipliers(alpha: &ExponentMatrix, k: &[u32], p: usize) -> Result<(), GammaError> {
    if k.len() != alpha.nrows() {
        return Err(GammaError::IndexOutOfRange { index: k.len(), bound: alpha.nrows() });
    }
    if p > alpha.nrows().min(alpha.ncols()) {
        return Err(GammaError::IndexOutOfRange { index: p, bound: alpha.nrows().min(alpha.ncols()) });
    }
    Ok(())
}

/// All summands with `A_I ≠ 0`, in lexicographic order of `I`.
pub fn gamma_decomposition(alpha: &ExponentMatrix, k: &[u32], p: usize) -> Result<Vec<GammaTerm>, GammaError> {
    check_multipliers(alpha, k, p)?;
    let r = alpha.nrows();
    let b = b_forms(alpha);
    let poles = pole_orders(alpha, k);
    let id: Vec<usize> = (0..r).collect();
    let sign = if (p * p.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let mut out = Vec::new();
    for columns in increasing_subsets(alpha.ncols(), p) {
        let minor = minor_det(alpha, &columns, p)?;
        if minor == 0 {
            continue;
        }
        let gamma = gamma_fn_on(alpha, &columns, &id)?;
        let factors = (0..alpha.ncols())
            .map(|c| {
                let d = columns.contains(&c);
                CurrentFactor {
                    s: b[c].clone(),
                    hol_pole: poles[c],
                    anti_pole: i32::from(d),
                    has_dx: false,
                    has_dxbar: d,
                    prefactor: if d { b[c].to_mpoly() } else { MPoly::one(r) },
                }
            })
            .collect();
        let tensor = TensorCurrent {
            factors,
            scalar: gamma.scale(&Rational::from_integer(minor.into())),
            sign,
            tag: Tag::ONE,
            units: Vec::new(),
        };
        out.push(GammaTerm { columns, minor, gamma, tensor });
    }
    Ok(out)
}

/// The same product distributed directly over coordinates, without grouping
/// by column sets: scalar `λ_1⋯λ_p · (signed sum of products of α entries)`
/// and prefactor 1.
pub fn gamma_direct(alpha: &ExponentMatrix, k: &[u32], p: usize) -> Result<Vec<TensorCurrent>, GammaError> {
    check_multipliers(alpha, k, p)?;
    let r = alpha.nrows();
    let num = MPoly::monomial((0..r).map(|l| u32::from(l < p)).collect(), Rational::from_integer(1.into()));
    let wedge = MonomialWedge {
        exponents: b_forms(alpha),
        hol_poles: pole_orders(alpha, k),
        slots: (0..p).rev().map(|l| FormSlot { exponents: alpha.row(l).to_vec(), anti: true }).collect(),
        scalar: RatFn::from_poly(num),
        tag: Tag::ONE,
        units: Vec::new(),
    };
    Ok(wedge.expand(false))
}

/// Record of the τ-substitution argument for one factor
/// `λ_{σ(ℓ)} / b^σ_{π(ℓ)}(λ)` of `γ_I^σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauFactor {
    /// Row `ℓ` (0-based) whose λ is matched to this factor.
    pub row: usize,
    /// Column `π(ℓ)` in `I`; `α_{ℓ,π(ℓ)} ≠ 0`.
    pub column: usize,
    /// Coefficient of `λ_m` in `b^σ_{π(ℓ)}`, i.e. `α_{σ⁻¹(m), π(ℓ)}`.
    pub coefficients: Vec<u32>,
    /// 1-based position `m*` of the last nonzero coefficient; the factoring
    /// out of trailing `τ` variables stops here.
    pub stop: usize,
    /// Number of `τ` variables factored out, `r - m*`.
    pub factored_out: usize,
    /// `c_{m*} > 0`, the value of the reduced denominator at `τ = 0`.
    pub leading: u32,
    /// 1-based index `σ(ℓ)` of the numerator variable; always `≤ stop`.
    pub numerator_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauWitness {
    pub columns: Vec<usize>,
    pub factors: Vec<TauFactor>,
}

impl TauWitness {
    pub fn holds(&self) -> bool {
        self.factors.iter().all(|f| f.leading > 0 && f.numerator_index <= f.stop)
    }
}

fn first_matching(alpha: &ExponentMatrix, columns: &[usize]) -> Option<Vec<usize>> {
    fn rec(alpha: &ExponentMatrix, columns: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>) -> bool {
        let l = cur.len();
        if l == columns.len() {
            return true;
        }
        for (j, &c) in columns.iter().enumerate() {
            if used[j] || alpha.get(l, c) == 0 {
                continue;
            }
            used[j] = true;
            cur.push(c);
            if rec(alpha, columns, used, cur) {
                return true;
            }
            cur.pop();
            used[j] = false;
        }
        false
    }
    let mut cur = Vec::new();
    rec(alpha, columns, &mut vec![false; columns.len()], &mut cur).then_some(cur)
}

/// Certifies holomorphy of `γ_I^σ` at `τ = 0` after `λ_j = λ_r τ_j⋯τ_{r-1}`.
/// Each numerator `λ_{σ(ℓ)}` is paired with a denominator `b^σ_{π(ℓ)}` for
/// the lexicographically first matching `π` with `α_{ℓ,π(ℓ)} ≠ 0`.
pub fn tau_holomorphy_witness(
    alpha: &ExponentMatrix,
    columns: &[usize],
    sigma: &[usize],
) -> Result<TauWitness, GammaError> {
    let r = alpha.nrows();
    check_permutation(sigma, r)?;
    let p = columns.len();
    if minor_det(alpha, columns, p)? == 0 {
        return Err(GammaError::SingularMinor { columns: columns.to_vec() });
    }
    let matching = first_matching(alpha, columns)
        .ok_or_else(|| GammaError::WitnessFails(format!("no nonzero matching on columns {columns:?}")))?;
    let mut inverse = vec![0; r];
    for (l, &s) in sigma.iter().enumerate() {
        inverse[s] = l;
    }
    let mut factors = Vec::with_capacity(p);
    for (row, &column) in matching.iter().enumerate() {
        let coefficients: Vec<u32> = (0..r).map(|m| alpha.get(inverse[m], column)).collect();
        let last = coefficients
            .iter()
            .rposition(|&c| c != 0)
            .ok_or_else(|| GammaError::WitnessFails(format!("column {} vanishes", column + 1)))?;
        let f = TauFactor {
            row,
            column,
            stop: last + 1,
            factored_out: r - 1 - last,
            leading: coefficients[last],
            numerator_index: sigma[row] + 1,
            coefficients,
        };
        if f.numerator_index > f.stop {
            return Err(GammaError::WitnessFails(format!("factor {} has a pole at τ = 0", row + 1)));
        }
        factors.push(f);
    }
    Ok(TauWitness { columns: columns.to_vec(), factors })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaTermReport {
    pub columns: Vec<usize>,
    pub minor: i64,
    pub gamma_sigma: RatFn,
    pub iterated: Result<Rational, RatFnError>,
    pub curve: Result<Rational, RatFnError>,
    pub witness: Result<PositivityWitness, RatFnError>,
    pub tau: Result<TauWitness, GammaError>,
}

impl LemmaTermReport {
    pub fn equal(&self) -> bool {
        matches!((&self.iterated, &self.curve), (Ok(a), Ok(b)) if a == b)
    }

    pub fn witness_holds(&self) -> bool {
        self.witness.as_ref().is_ok_and(PositivityWitness::holds) && self.tau.as_ref().is_ok_and(TauWitness::holds)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub terms: Vec<LemmaTermReport>,
}

impl LemmaReport {
    pub fn equal(&self) -> bool {
        self.terms.iter().all(LemmaTermReport::equal)
    }

    pub fn witnesses_hold(&self) -> bool {
        self.terms.iter().all(LemmaTermReport::witness_holds)
    }
}

/// Compares the iterated limit (`λ_1` first) with the curve limit for every
/// `γ_I^σ` with `A_I ≠ 0`.
pub fn lemma_check(
    alpha: &ExponentMatrix,
    k: &[u32],
    p: usize,
    sigma: &[usize],
    mu: &Weights,
) -> Result<LemmaReport, GammaError> {
    let r = alpha.nrows();
    check_permutation(sigma, r)?;
    if mu.len() != r {
        return Err(GammaError::InvalidWeights(format!("expected {r} weights, got {}", mu.len())));
    }
    if !mu.is_strictly_decreasing() {
        return Err(GammaError::InvalidWeights(format!("{:?} is not strictly decreasing", mu.as_slice())));
    }
    let order: Vec<usize> = (0..r).collect();
    let mut terms = Vec::new();
    for t in gamma_decomposition(alpha, k, p)? {
        let g = t.gamma.permute(sigma);
        terms.push(LemmaTermReport {
            iterated: g.iterated_limit(&order),
            curve: g.curve_value_at_zero(mu.as_slice()),
            witness: g.positivity_witness(mu.as_slice()),
            tau: tau_holomorphy_witness(alpha, &t.columns, sigma),
            columns: t.columns,
            minor: t.minor,
            gamma_sigma: g,
        });
    }
    Ok(LemmaReport { terms })
}
