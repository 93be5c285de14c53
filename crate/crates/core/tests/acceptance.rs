mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use residua::currents::{CurrentSum, Differential, ExactValue, RadialProfile, Tag, TestForm};
use residua::gamma::{lemma_check, LemmaReport, Weights};
use residua::products::{
    annihilation_test, ch_current, ch_product, evaluate_product, expand_product, lelong_oracle, m_product,
    spanning_test_forms, structural_identity, FactorKind, FactorSpec, ProductSpec,
};
use residua::quad::{convergence_study, lambda_sample, Cutoff, EpsilonPath};
use residua::Rational;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn w(mu: &[u32]) -> Weights {
    Weights::strict(mu.to_vec()).unwrap()
}

fn profile(n: u32) -> RadialProfile {
    RadialProfile::standard(n).unwrap()
}

fn lemma_suite() -> Vec<LemmaReport> {
    let mut rng = common::rng(1);
    (0..1000)
        .map(|_| {
            let inst = common::lemma_instance(&mut rng);
            lemma_check(&inst.alpha, &inst.k, inst.p, &inst.sigma, &inst.mu).expect("valid instance")
        })
        .collect()
}

fn criterion_1(reports: &[LemmaReport], elapsed: Duration) -> Outcome {
    let bad = reports.iter().filter(|r| !r.equal()).count();
    let terms: usize = reports.iter().map(|r| r.terms.len()).sum();
    let fast = elapsed < Duration::from_secs(60);
    outcome(bad == 0 && fast, format!("{} instances, {terms} terms, {bad} unequal, {:.1?}", reports.len(), elapsed))
}

fn criterion_2() -> Outcome {
    let phi = TestForm::uniform(&[1, 0], &[0, 0], &profile(4), &[Differential::Dx, Differential::Dx]);
    let mu = w(&[3, 1]);
    let ab = ch_product(&[vec![1, 0], vec![1, 1]], &phi, &mu).unwrap();
    let ba = ch_product(&[vec![1, 1], vec![1, 0]], &phi, &mu).unwrap();
    let target = ch_product(&[vec![0, 1], vec![2, 0]], &phi, &mu).unwrap();
    let (Ok(ab_v), Ok(ba_v), Ok(t_v)) = (&ab.iterated, &ba.iterated, &target.iterated) else {
        return outcome(false, "limit failed");
    };
    let pass = ab.equal() && ba.equal() && ab_v.is_zero() && !ba_v.is_zero() && ba_v == t_v;
    outcome(pass, format!("(z,zw) -> {ab_v}, (zw,z) -> {ba_v}, d(1/z^2)^d(1/w) -> {t_v}"))
}

fn criterion_3() -> Outcome {
    let mut failures = 0;
    let mut cases = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            let spec = ProductSpec::coleff_herrera(&[vec![a, 0], vec![0, b]], w(&[2, 1])).unwrap();
            for i in 0..=4 {
                for j in 0..=4 {
                    cases += 1;
                    let expect = i >= a || j >= b;
                    if annihilation_test(&spec, &[i, j]) != Ok(expect) {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{cases} cases, {failures} failures"))
}

fn criterion_4() -> Outcome {
    let mut failures = 0;
    let mut checked = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            let ab = ProductSpec::coleff_herrera(&[vec![a, 0], vec![0, b]], w(&[2, 1])).unwrap();
            let ba = ProductSpec::coleff_herrera(&[vec![0, b], vec![a, 0]], w(&[2, 1])).unwrap();
            let (cab, cba) = (ch_current(&ab), ch_current(&ba));
            let mut nonzero = false;
            for phi in spanning_test_forms(&cab, 1) {
                let v = residua::products::evaluate_sum(&cab, &phi, ab.weights()).unwrap().iterated.unwrap();
                let u = residua::products::evaluate_sum(&cba, &phi, ba.weights()).unwrap().iterated.unwrap();
                checked += 1;
                nonzero |= !v.is_zero();
                failures += usize::from(v != u.neg());
            }
            failures += usize::from(!nonzero);
        }
    }
    outcome(failures == 0, format!("{checked} pairings, {failures} failures"))
}

fn criterion_5() -> Outcome {
    let p2 = profile(2);
    let phi = TestForm::uniform(&[0, 0], &[0, 0], &p2, &[Differential::One, Differential::Area]);
    let spec = ProductSpec::new(vec![FactorSpec::m(vec![2, 1])], w(&[1])).unwrap();
    let v = m_product(&spec, &phi).unwrap().iterated.unwrap();
    let expect = ExactValue::tagged(Tag { pi: 1, i: 0 }, Rational::new(2.into(), 3.into()));
    let mut pass = v == expect;
    let mut rng = common::rng(5);
    let mut failures = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let alpha = common::monomial(&mut rng, n, 3);
        let spec = ProductSpec::new(vec![FactorSpec::m(alpha.clone())], w(&[1])).unwrap();
        for j in (0..n).filter(|&j| alpha[j] > 0) {
            let diffs: Vec<_> = (0..n).map(|k| if k == j { Differential::One } else { Differential::Area }).collect();
            let prof = profile(rng.gen_range(2..=4));
            let phi = TestForm::uniform(&vec![0; n], &vec![0; n], &prof, &diffs);
            let got = m_product(&spec, &phi).unwrap();
            if !got.equal() || got.iterated.as_ref().ok() != Some(&lelong_oracle(&alpha, &phi)) {
                failures += 1;
            }
        }
    }
    pass &= failures == 0;
    outcome(pass, format!("M(z^2 w) -> {v}; 50 random monomials, {failures} failures"))
}

fn criterion_6() -> Outcome {
    let mut rng = common::rng(6);
    let mut failures = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let unit = Rational::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=3).into());
        let f = FactorSpec::r(common::monomial(&mut rng, n, 3)).with_unit(unit);
        if structural_identity(&f) != Ok(true) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("100 factors, {failures} failures"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let p4 = profile(4);
    let dz_dw = |hol: [u32; 2]| TestForm::uniform(&hol, &[0, 0], &p4, &[Differential::Dx, Differential::Dx]);
    let one = |k| ProductSpec::new(k, w(&[1])).unwrap();
    let two = |k| ProductSpec::new(k, w(&[2, 1])).unwrap();
    let cases: Vec<(ProductSpec, TestForm)> = vec![
        (one(vec![FactorSpec::r(vec![1])]), TestForm::uniform(&[0], &[0], &p4, &[Differential::Dx])),
        (two(vec![FactorSpec::r(vec![1, 0]), FactorSpec::r(vec![0, 1])]), dz_dw([0, 0])),
        (two(vec![FactorSpec::r(vec![1, 0]), FactorSpec::r(vec![1, 1])]), dz_dw([1, 0])),
        (
            two(vec![FactorSpec::u(vec![1, 1]), FactorSpec::r(vec![0, 1])]),
            TestForm::uniform(&[1, 1], &[0, 0], &p4, &[Differential::Area, Differential::Dx]),
        ),
        (
            one(vec![FactorSpec::m(vec![2, 1])]),
            TestForm::uniform(&[0, 0], &[0, 0], &p4, &[Differential::One, Differential::Area]),
        ),
    ];
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    let mut sample_fail = 0;
    for i in 0..20 {
        let (spec, phi) = &cases[i % cases.len()];
        let lambda: Vec<f64> = (0..spec.nfactors()).map(|_| rng.gen_range(1.5..=4.0)).collect();
        match lambda_sample(spec, phi, &lambda) {
            Ok(s) => {
                worst = worst.max(s.rel_err);
                sample_fail += usize::from(!s.agrees(1e-8));
            }
            Err(_) => sample_fail += 1,
        }
    }
    let deltas = vec![1e-1, 1e-2, 1e-3];
    let mut tables = Vec::new();
    for (mono, nu, phi) in [
        (vec![vec![1, 0], vec![0, 1]], vec![6, 2], dz_dw([0, 0])),
        (vec![vec![1, 0], vec![1, 1]], vec![5, 1], dz_dw([1, 0])),
    ] {
        let spec = ProductSpec::coleff_herrera(&mono, w(&[2, 1])).unwrap();
        let path = EpsilonPath::for_spec(&spec, nu, deltas.clone());
        let table = path.and_then(|p| convergence_study(&spec, &phi, &p, Cutoff::default()));
        tables.push(table);
    }
    let conv_ok = tables.iter().all(|t| t.as_ref().is_ok_and(|t| t.converged(1e-3, 1e-2)));
    let last: Vec<String> = tables
        .iter()
        .map(|t| match t {
            Ok(t) => format!("{:.3e}", t.rows.last().map_or(f64::NAN, |r| r.abs_err)),
            Err(e) => e.to_string(),
        })
        .collect();
    let elapsed = start.elapsed();
    let pass = sample_fail == 0 && conv_ok && elapsed < Duration::from_secs(300);
    outcome(
        pass,
        format!("20 samples, worst rel err {worst:.2e}; final abs err {}; {:.1?}", last.join(" / "), elapsed),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = common::rng(8);
    let mut failures = 0;
    let mut pairings = 0;
    for _ in 0..100 {
        let spec = common::product_spec(&mut rng, &[FactorKind::R, FactorKind::U]);
        let q = spec.nfactors();
        let mut mus: Vec<Weights> = Vec::new();
        while mus.len() < 5 {
            let mu = common::strict_weights(&mut rng, q, 9);
            if !mus.contains(&mu) {
                mus.push(mu);
            }
        }
        let sum: CurrentSum = expand_product(&spec);
        for phi in spanning_test_forms(&sum, 0).into_iter().take(4) {
            let values: Vec<_> = mus
                .iter()
                .map(|mu| evaluate_product(&spec.with_weights(mu.clone()).unwrap(), &phi).map(|r| r.curve))
                .collect();
            pairings += 1;
            let first = &values[0];
            if first.as_ref().map_or(true, |c| c.is_err()) || values.iter().any(|v| v != first) {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("100 specs, {pairings} test forms x 5 weights, {failures} failures"))
}

fn criterion_9(reports: &[LemmaReport]) -> Outcome {
    let terms: usize = reports.iter().map(|r| r.terms.len()).sum();
    let bad: usize = reports.iter().flat_map(|r| &r.terms).filter(|t| !t.witness_holds()).count();
    outcome(bad == 0, format!("{terms} terms, {bad} without witness"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = lemma_suite();
    let lemma_time = start.elapsed();
    let results = [
        ("1 lemma equality", criterion_1(&reports, lemma_time)),
        ("2 worked example", criterion_2()),
        ("3 duality", criterion_3()),
        ("4 anticommutativity", criterion_4()),
        ("5 lelong", criterion_5()),
        ("6 structural identity", criterion_6()),
        ("7 quadrature agreement", criterion_7()),
        ("8 weight independence", criterion_8()),
        ("9 holomorphy witnesses", criterion_9(&reports)),
    ];
    let mut all = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
