mod common;

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rand::Rng;

use residua::currents::{Differential, RadialProfile, TestForm};
use residua::gamma::Weights;
use residua::products::{FactorSpec, ProductSpec};
use residua::quad::{convergence_study, lambda_sample, passare_integral, Cutoff, EpsilonPath, QuadError};
use residua::{LinearForm, Rational};

/// `∫₀¹ t^σ ψ(t) dt` with `t = e^ℓ`, on graded panels.
fn moment(p: &RadialProfile, sigma: f64) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(40).unwrap());
    let ends = [0.0, -0.5, -1.0, -2.0, -4.0, -8.0, -16.0, -32.0, -64.0];
    ends.windows(2)
        .map(|w| rule.integrate(w[1], w[0], |l: f64| (l * (sigma + 1.0)).exp() * p.value(l.exp())))
        .sum()
}

#[test]
fn mellin_matches_quadrature() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let order = rng.gen_range(2..=6);
        let coeffs: Vec<Rational> = (0..3).map(|_| Rational::from_integer(rng.gen_range(-3..=3).into())).collect();
        let Ok(p) = RadialProfile::new(order, coeffs) else { continue };
        let sigma: f64 = rng.gen_range(0.0..5.0);
        let exact = p.mellin_f64(sigma);
        let numeric = moment(&p, sigma);
        assert!((exact - numeric).abs() <= 1e-10 * exact.abs().max(1e-300), "{exact} vs {numeric}");
        // rational form agrees with the float form at an integer point
        let r = p.mellin(&LinearForm::var(1, 0)).unwrap().eval_f64(&[2.0]);
        assert!((r - p.mellin_f64(2.0)).abs() < 1e-14);
    }
}

#[test]
fn lambda_samples_random() {
    let p = RadialProfile::standard(4).unwrap();
    let phi = TestForm::uniform(&[1, 0], &[0, 0], &p, &[Differential::Dx, Differential::Dx]);
    let spec = ProductSpec::coleff_herrera(&[vec![1, 0], vec![1, 1]], Weights::strict(vec![2, 1]).unwrap()).unwrap();
    let mut rng = common::rng(12);
    for _ in 0..4 {
        let l = [rng.gen_range(1.5..4.0), rng.gen_range(1.5..4.0)];
        let s = lambda_sample(&spec, &phi, &l).unwrap();
        assert!(s.agrees(1e-8), "{s:?}");
    }
}

#[test]
fn cutoffs_agree_in_the_limit() {
    let p = RadialProfile::standard(4).unwrap();
    let phi = TestForm::uniform(&[0], &[0], &p, &[Differential::Dx]);
    let spec = ProductSpec::coleff_herrera(&[vec![1]], Weights::strict(vec![1]).unwrap()).unwrap();
    let a = passare_integral(&spec, &phi, &[1e-5], Cutoff::Characteristic).unwrap();
    let b = passare_integral(&spec, &phi, &[1e-5], Cutoff::Smoothstep(3)).unwrap();
    assert!((a - b).norm() < 1e-3 * a.norm());
}

#[test]
fn convergence_table_for_vanishing_product() {
    let p = RadialProfile::standard(4).unwrap();
    let phi = TestForm::uniform(&[1, 0], &[0, 0], &p, &[Differential::Dx, Differential::Dx]);
    let spec = ProductSpec::coleff_herrera(&[vec![1, 0], vec![1, 1]], Weights::strict(vec![2, 1]).unwrap()).unwrap();
    let path = EpsilonPath::for_spec(&spec, vec![5, 1], vec![1e-1, 1e-2, 1e-3]).unwrap();
    let t = convergence_study(&spec, &phi, &path, Cutoff::Characteristic).unwrap();
    assert_eq!(t.oracle.norm(), 0.0);
    assert!(t.converged(1e-3, 1e-2));
    assert_eq!(t.to_csv().lines().count(), 4);
    assert!(matches!(EpsilonPath::for_spec(&spec, vec![2, 1], vec![0.1]), Err(QuadError::InvalidPath(_))));
}

#[test]
fn passare_rejects_non_residue_factors() {
    let p = RadialProfile::standard(4).unwrap();
    let phi = TestForm::uniform(&[0], &[0], &p, &[Differential::Dx]);
    let spec = ProductSpec::new(vec![FactorSpec::u(vec![1])], Weights::strict(vec![1]).unwrap()).unwrap();
    assert!(matches!(passare_integral(&spec, &phi, &[1e-3], Cutoff::default()), Err(QuadError::Unsupported(_))));
}
