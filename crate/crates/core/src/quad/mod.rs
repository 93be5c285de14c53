//! Floating-point cross-checks of the exact oracle.
//!
//! Everything here integrates in log-polar coordinates `x_k = e^{ℓ_k/2 + iθ_k}`
//! on the unit polydisc (the support of every split test form). Radial
//! integrals use Gauss-Legendre panels graded toward `ℓ = -∞`; angular
//! integrals use the trapezoid rule with enough nodes to be exact for the
//! trigonometric polynomials that occur.

mod forms;

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::currents::{CurrentError, Differential, TestForm};
use crate::products::{ch_current, evaluate_product, evaluate_sum, FactorKind, FactorSpec, ProductError, ProductSpec};
use forms::{regularized_factor, shell_factor, test_form_at, top_coefficient, Algebra, Point};

pub const CSV_HEADER: &str = "delta,value_re,value_im,abs_err";

/// Radial truncation: contributions from `ℓ < -RADIAL_CUTOFF` are dropped.
const RADIAL_CUTOFF: f64 = 64.0;
const PANEL_ENDS: [f64; 10] = [0.0, -0.25, -0.5, -1.0, -2.0, -4.0, -8.0, -16.0, -32.0, -64.0];
const LEVELS: [usize; 4] = [12, 24, 48, 96];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge: estimated relative error {estimate:e} > {tolerance:e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },
    #[error("exponent matrix is singular; the tube is not a single torus")]
    DegenerateTorus,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Current(#[from] CurrentError),
}

/// Approximation of `1_{[1,∞)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cutoff {
    Characteristic,
    /// `C^m` smoothstep from 0 at `v = 1` to 1 at `v = 2`.
    Smoothstep(u32),
}

impl Default for Cutoff {
    fn default() -> Self {
        Self::Smoothstep(2)
    }
}

impl Cutoff {
    pub fn value(self, v: f64) -> f64 {
        match self {
            Self::Characteristic => f64::from(u8::from(v >= 1.0)),
            Self::Smoothstep(m) => {
                let x = (v - 1.0).clamp(0.0, 1.0);
                let n = 2 * m + 1;
                (m + 1..=n).map(|j| binomial(n, j) * x.powi(j as i32) * (1.0 - x).powi((n - j) as i32)).sum()
            }
        }
    }

    /// `χ'(v)`; zero for the characteristic function (its mass sits at `v = 1`).
    pub fn derivative(self, v: f64) -> f64 {
        match self {
            Self::Characteristic => 0.0,
            Self::Smoothstep(m) => {
                let x = v - 1.0;
                if !(0.0..=1.0).contains(&x) {
                    return 0.0;
                }
                let c = f64::from(2 * m + 1) * binomial(2 * m, m);
                c * (x * (1.0 - x)).powi(m as i32)
            }
        }
    }

    /// Nodes and weights for `∫ χ'(e^u) e^u g(u) du`.
    fn shell_rule(self, m: usize) -> Vec<(f64, f64)> {
        match self {
            Self::Characteristic => vec![(0.0, 1.0)],
            Self::Smoothstep(_) => legendre(m, 0.0, LN_2)
                .into_iter()
                .map(|(u, w)| (u, w * self.derivative(u.exp()) * u.exp()))
                .collect(),
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// `ε_j(δ) = δ^{ν_j}` over a grid of `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonPath {
    nu: Vec<u32>,
    deltas: Vec<f64>,
    ratio_bound: u32,
}

impl EpsilonPath {
    pub fn new(nu: Vec<u32>, deltas: Vec<f64>, ratio_bound: u32) -> Result<Self, QuadError> {
        if nu.is_empty() || nu.contains(&0) {
            return Err(QuadError::InvalidPath("weights must be positive".into()));
        }
        for w in nu.windows(2) {
            if w[0] <= w[1] {
                return Err(QuadError::InvalidPath(format!("{nu:?} not strictly decreasing")));
            }
            if w[0] < ratio_bound * w[1] {
                return Err(QuadError::InvalidPath(format!("{nu:?} violates ratio bound {ratio_bound}")));
            }
        }
        if deltas.is_empty() || deltas.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
            return Err(QuadError::InvalidPath("deltas must lie in (0, 1)".into()));
        }
        Ok(Self { nu, deltas, ratio_bound })
    }

    /// Ratio bound `2 + max pole order` of the spec.
    pub fn for_spec(spec: &ProductSpec, nu: Vec<u32>, deltas: Vec<f64>) -> Result<Self, QuadError> {
        if nu.len() != spec.nfactors() {
            return Err(QuadError::InvalidPath(format!("{} weights for {} factors", nu.len(), spec.nfactors())));
        }
        Self::new(nu, deltas, 2 + spec.max_pole_order())
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn ratio_bound(&self) -> u32 {
        self.ratio_bound
    }

    pub fn eps(&self, delta: f64) -> Vec<f64> {
        self.nu.iter().map(|&v| delta.powi(v as i32)).collect()
    }
}

fn legendre(m: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(m).expect("positive node count"));
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    rule.as_node_weight_pairs().iter().map(|&(x, w)| (mid + half * x, half * w)).collect()
}

/// Graded panels on `[lo, 0]`.
fn radial_rule(m: usize, lo: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in PANEL_ENDS.windows(2) {
        let (b, a) = (w[0], w[1].max(lo));
        if a >= b {
            break;
        }
        out.extend(legendre(m, a, b));
    }
    out
}

fn angular_rule(k: usize) -> Vec<(f64, f64)> {
    (0..k).map(|j| (2.0 * PI * j as f64 / k as f64, 2.0 * PI / k as f64)).collect()
}

/// Trapezoid node counts exact for every angular frequency of the integrand.
fn angular_counts(factors: &[FactorSpec], phi: &TestForm) -> Vec<usize> {
    phi.coords
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let poles: u32 = factors.iter().map(|f| f.pole_order * f.monomial[k] + 2).sum();
            (c.hol.abs_diff(c.anti) + poles + 1) as usize
        })
        .collect()
}

/// Sum over the tensor grid, parallel in the first coordinate and reduced in
/// index order.
fn grid_sum<F>(dims: &[usize], f: F) -> Complex64
where
    F: Fn(&[usize]) -> Complex64 + Sync,
{
    let Some((&first, rest)) = dims.split_first() else {
        return f(&[]);
    };
    let inner: usize = rest.iter().product();
    let partial: Vec<Complex64> = (0..first)
        .into_par_iter()
        .map(|i0| {
            let mut idx = vec![0; dims.len()];
            idx[0] = i0;
            let mut acc = Complex64::new(0.0, 0.0);
            for mut flat in 0..inner {
                for (slot, &d) in idx[1..].iter_mut().zip(rest).rev() {
                    *slot = flat % d;
                    flat /= d;
                }
                acc += f(&idx);
            }
            acc
        })
        .collect();
    partial.into_iter().sum()
}

/// Evaluates `run(m)` at increasing node counts until two successive values
/// agree to `tol` (relative, with an absolute floor).
fn refine<F>(tol: f64, floor: f64, run: F) -> Result<Complex64, QuadError>
where
    F: Fn(usize) -> Result<Complex64, QuadError>,
{
    let mut prev = run(LEVELS[0])?;
    let mut estimate = f64::INFINITY;
    for &m in &LEVELS[1..] {
        let cur = run(m)?;
        estimate = (cur - prev).norm() / cur.norm().max(floor);
        if estimate <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(QuadError::QuadratureNotConverged { estimate, tolerance: tol })
}

fn check_dims(spec: &ProductSpec, phi: &TestForm) -> Result<(), QuadError> {
    if phi.ncoords() != spec.ncoords() {
        return Err(CurrentError::DimensionMismatch { current: spec.ncoords(), test: phi.ncoords() }.into());
    }
    if spec.ncoords() > 2 || spec.nfactors() > 2 {
        return Err(QuadError::Unsupported(format!("{} coordinates, {} factors", spec.ncoords(), spec.nfactors())));
    }
    Ok(())
}

fn unit(f: &FactorSpec) -> f64 {
    f.unit.to_f64().unwrap_or(f64::NAN)
}

/// Numerical `⟨P^λ, φ⟩` next to the exact rational value at the same `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSample {
    pub numeric: Complex64,
    pub exact: Complex64,
    pub rel_err: f64,
}

impl LambdaSample {
    /// Relative agreement; absolute when the exact value vanishes.
    pub fn agrees(&self, tol: f64) -> bool {
        (self.numeric - self.exact).norm() <= tol * self.exact.norm().max(f64::MIN_POSITIVE)
            || (self.exact.norm() == 0.0 && self.numeric.norm() <= tol)
    }
}

/// Integrates `P^q ∧ ⋯ ∧ P^1 ∧ φ` at real `λ ≥ 1`.
pub fn lambda_sample(spec: &ProductSpec, phi: &TestForm, lambda: &[f64]) -> Result<LambdaSample, QuadError> {
    check_dims(spec, phi)?;
    if lambda.len() != spec.nfactors() || lambda.iter().any(|&l| !(l >= 1.0)) {
        return Err(QuadError::Unsupported(format!("λ = {lambda:?}: need one entry ≥ 1 per factor")));
    }
    let exact = evaluate_product(spec, phi)?.value.eval_f64(lambda);
    let numeric = refine(1e-11, 1e-12, |m| Ok(lambda_quadrature(spec, phi, lambda, m)))?;
    let rel_err = (numeric - exact).norm() / exact.norm().max(f64::MIN_POSITIVE);
    Ok(LambdaSample { numeric, exact, rel_err })
}

fn lambda_quadrature(spec: &ProductSpec, phi: &TestForm, lambda: &[f64], m: usize) -> Complex64 {
    let n = spec.ncoords();
    let alg = Algebra::new(n);
    let radial = radial_rule(m, -RADIAL_CUTOFF);
    let angular: Vec<_> = angular_counts(spec.factors(), phi).into_iter().map(angular_rule).collect();
    let mut dims = Vec::with_capacity(2 * n);
    for a in &angular {
        dims.push(radial.len());
        dims.push(a.len());
    }
    grid_sum(&dims, |idx| {
        let mut t = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        let mut weight = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let (l, wl) = radial[idx[2 * k]];
            let (th, wt) = angular[k][idx[2 * k + 1]];
            let tk = l.exp();
            t.push(tk);
            theta.push(th);
            weight *= Complex64::new(0.0, -tk) * wl * wt;
        }
        let p = Point::polar(&t, &theta);
        let current = spec
            .factors()
            .iter()
            .zip(lambda)
            .rev()
            .fold(alg.scalar(Complex64::new(1.0, 0.0)), |acc, (f, &l)| alg.wedge(&acc, &regularized_factor(&alg, &p, f, l)));
        top_coefficient(&alg, &current, test_form_at(phi, &p)) * weight
    })
}

/// `∫ ∂̄χ(|f_q|²/ε_q)/f_q^{k_q} ∧ ⋯ ∧ ∂̄χ(|f_1|²/ε_1)/f_1^{k_1} ∧ φ`.
pub fn passare_integral(spec: &ProductSpec, phi: &TestForm, eps: &[f64], chi: Cutoff) -> Result<Complex64, QuadError> {
    check_dims(spec, phi)?;
    if spec.factors().iter().any(|f| f.kind != FactorKind::R) {
        return Err(QuadError::Unsupported("smooth-cutoff form needs R factors only".into()));
    }
    if eps.len() != spec.nfactors() || eps.iter().any(|&e| !(e > 0.0)) {
        return Err(QuadError::Unsupported(format!("ε = {eps:?}: need one positive entry per factor")));
    }
    let shells = Shells::new(spec, eps)?;
    refine(1e-6, 1e-12, |m| Ok(passare_quadrature(spec, phi, &shells, chi, m)))
}

/// Solves the shell equations `Σ_k α_jk ℓ_k = u_j - b_j` for the pivot
/// coordinates.
struct Shells {
    pivots: Vec<usize>,
    free: Option<usize>,
    /// Inverse of the pivot block, row-major.
    inverse: Vec<f64>,
    offsets: Vec<f64>,
    jacobian: f64,
}

impl Shells {
    fn new(spec: &ProductSpec, eps: &[f64]) -> Result<Self, QuadError> {
        let n = spec.ncoords();
        let fs = spec.factors();
        let offsets = fs.iter().zip(eps).map(|(f, &e)| (unit(f).powi(2) / e).ln()).collect();
        let a = |j: usize, k: usize| f64::from(fs[j].monomial[k]);
        match (fs.len(), n) {
            (1, _) => {
                let p = (0..n).max_by_key(|&k| (fs[0].monomial[k], std::cmp::Reverse(k))).unwrap_or(0);
                let free = (0..n).find(|&k| k != p);
                Ok(Self { pivots: vec![p], free, inverse: vec![1.0 / a(0, p)], offsets, jacobian: 1.0 / a(0, p) })
            }
            (2, 2) => {
                let det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
                if det == 0.0 {
                    return Err(QuadError::Unsupported("shell equations are dependent".into()));
                }
                let inverse = vec![a(1, 1) / det, -a(0, 1) / det, -a(1, 0) / det, a(0, 0) / det];
                Ok(Self { pivots: vec![0, 1], free: None, inverse, offsets, jacobian: 1.0 / det.abs() })
            }
            _ => Err(QuadError::Unsupported("more factors than coordinates".into())),
        }
    }

    /// Log-radii of the pivots given shell variables and the free log-radius.
    fn solve(&self, spec: &ProductSpec, u: &[f64], free: f64) -> Vec<f64> {
        let q = self.pivots.len();
        let rhs: Vec<f64> = (0..q)
            .map(|j| {
                let mut r = u[j] - self.offsets[j];
                if let Some(fk) = self.free {
                    r -= f64::from(spec.factors()[j].monomial[fk]) * free;
                }
                r
            })
            .collect();
        (0..q).map(|i| (0..q).map(|j| self.inverse[i * q + j] * rhs[j]).sum()).collect()
    }

    /// Range of the free log-radius keeping every pivot inside the unit disc.
    fn free_lower(&self, spec: &ProductSpec, u: &[f64]) -> f64 {
        let Some(fk) = self.free else { return 0.0 };
        let af = f64::from(spec.factors()[0].monomial[fk]);
        if af == 0.0 {
            return -RADIAL_CUTOFF;
        }
        ((u[0] - self.offsets[0]) / af).max(-RADIAL_CUTOFF)
    }
}

fn passare_quadrature(spec: &ProductSpec, phi: &TestForm, shells: &Shells, chi: Cutoff, m: usize) -> Complex64 {
    let n = spec.ncoords();
    let q = spec.nfactors();
    let alg = Algebra::new(n);
    let rule = chi.shell_rule(m);
    let angular: Vec<_> = angular_counts(spec.factors(), phi).into_iter().map(angular_rule).collect();
    let mut shell_points: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
    for _ in 0..q {
        shell_points = shell_points
            .into_iter()
            .flat_map(|(u, w)| {
                rule.iter().map(move |&(uj, wj)| {
                    let mut u = u.clone();
                    u.push(uj);
                    (u, w * wj)
                })
            })
            .collect();
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (u, wu) in &shell_points {
        let frees = match shells.free {
            Some(_) => radial_rule(m, shells.free_lower(spec, u)),
            None => vec![(0.0, 1.0)],
        };
        let mut dims = vec![frees.len()];
        dims.extend(angular.iter().map(Vec::len));
        total += grid_sum(&dims, |idx| {
            let (lf, wf) = frees[idx[0]];
            let lp = shells.solve(spec, u, lf);
            let mut logs = vec![0.0; n];
            for (&p, &l) in shells.pivots.iter().zip(&lp) {
                logs[p] = l;
            }
            if let Some(fk) = shells.free {
                logs[fk] = lf;
            }
            if logs.iter().any(|&l| l > 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let t: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
            let theta: Vec<f64> = (0..n).map(|k| angular[k][idx[k + 1]].0).collect();
            let mut weight = Complex64::new(wu * wf * shells.jacobian, 0.0);
            for k in 0..n {
                weight *= Complex64::new(0.0, -t[k]) * angular[k][idx[k + 1]].1;
            }
            let p = Point::polar(&t, &theta);
            let current = spec
                .factors()
                .iter()
                .rev()
                .fold(alg.scalar(Complex64::new(1.0, 0.0)), |acc, f| alg.wedge(&acc, &shell_factor(&alg, &p, f)));
            top_coefficient(&alg, &current, test_form_at(phi, &p)) * weight
        });
    }
    total
}

/// `∫_{T(ε)} φ/(f_1^{k_1} f_2^{k_2})` over `T(ε) = {|f_j|² = ε_j}`, oriented
/// by `d arg f_1 ∧ d arg f_2`. `φ` must be `g dx_1∧dx_2`.
pub fn torus_integral(factors: &[FactorSpec], phi: &TestForm, eps: &[f64]) -> Result<Complex64, QuadError> {
    if factors.len() != 2 || eps.len() != 2 || factors.iter().any(|f| f.monomial.len() != 2) {
        return Err(QuadError::Unsupported("torus integrals need two factors on two coordinates".into()));
    }
    if phi.ncoords() != 2 || phi.coords.iter().any(|c| c.diff != Differential::Dx) {
        return Err(QuadError::Unsupported("test form must be g dx_1∧dx_2".into()));
    }
    let a = |j: usize, k: usize| f64::from(factors[j].monomial[k]);
    let det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if det == 0.0 {
        return Err(QuadError::DegenerateTorus);
    }
    let b: Vec<f64> = factors.iter().zip(eps).map(|(f, &e)| (e / unit(f).powi(2)).ln()).collect();
    let logs = [(a(1, 1) * b[0] - a(0, 1) * b[1]) / det, (a(0, 0) * b[1] - a(1, 0) * b[0]) / det];
    let t = [logs[0].exp(), logs[1].exp()];
    let angular: Vec<_> = angular_counts(factors, phi).into_iter().map(angular_rule).collect();
    let dims = [angular[0].len(), angular[1].len()];
    let sum = grid_sum(&dims, |idx| {
        let theta = [angular[0][idx[0]].0, angular[1][idx[1]].0];
        let p = Point::polar(&t, &theta);
        let (_, g) = test_form_at(phi, &p);
        let den: Complex64 = factors.iter().map(|f| p.power(&f.monomial, unit(f), f.pole_order)).product();
        let w = angular[0][idx[0]].1 * angular[1][idx[1]].1;
        g * Complex64::new(0.0, 1.0) * p.x[0] * Complex64::new(0.0, 1.0) * p.x[1] / den * w
    });
    Ok(sum * det.signum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub value: Complex64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub oracle: Complex64,
    pub ratio_bound: u32,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(out, "{:e},{:e},{:e},{:e}", r.delta, r.value.re, r.value.im, r.abs_err);
        }
        out
    }

    /// Last row within `rel` of the oracle, or within `abs` if the oracle is 0.
    pub fn converged(&self, rel: f64, abs: f64) -> bool {
        self.rows.last().is_some_and(|r| {
            if self.oracle.norm() == 0.0 {
                r.abs_err <= abs
            } else {
                r.abs_err <= rel * self.oracle.norm()
            }
        })
    }
}

/// Smooth-cutoff integrals along `ε(δ)` against the exact Coleff-Herrera value.
pub fn convergence_study(
    spec: &ProductSpec,
    phi: &TestForm,
    path: &EpsilonPath,
    chi: Cutoff,
) -> Result<ConvergenceTable, QuadError> {
    if path.nu().len() != spec.nfactors() {
        return Err(QuadError::InvalidPath(format!("{} weights for {} factors", path.nu().len(), spec.nfactors())));
    }
    if path.ratio_bound() < 2 + spec.max_pole_order() {
        return Err(QuadError::InvalidPath(format!("ratio bound {} below 2 + max pole order", path.ratio_bound())));
    }
    let exact = evaluate_sum(&ch_current(spec), phi, spec.weights())?.iterated.map_err(ProductError::from)?;
    let oracle = exact.to_complex();
    let rows = path
        .deltas()
        .iter()
        .map(|&delta| {
            let value = passare_integral(spec, phi, &path.eps(delta), chi)?;
            Ok(ConvergenceRow { delta, value, abs_err: (value - oracle).norm() })
        })
        .collect::<Result<_, QuadError>>()?;
    Ok(ConvergenceTable { oracle, ratio_bound: path.ratio_bound(), rows })
}
