use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use residua::currents::{Differential, TestForm};
use residua::gamma::{lemma_check, ExponentMatrix, Weights};
use residua::products::{
    annihilation_test, ch_current, evaluate_product, evaluate_sum, lelong_oracle, m_product, FactorKind, FactorSpec,
    ProductReport, ProductSpec,
};
use residua::quad::{convergence_study, lambda_sample, Cutoff, EpsilonPath};

use crate::parse::{
    build_factors, pad, parse_factors, parse_list, parse_monomial, parse_monomials, parse_rationals, parse_test_form,
    ParseError,
};
use crate::report::{encode_exact, encode_rational, Comparison, ReportRecord};
use crate::{
    ChEvalArgs, Command, DualityArgs, GammaCheckArgs, MEvalArgs, ProductEvalArgs, QuadCompareArgs,
};

/// Runs one command. Input errors come back as `Err`; failures of the
/// computation are recorded in the report.
pub fn run_command(cmd: &Command, seed: u64, profile: u32) -> Result<ReportRecord, ParseError> {
    let mut rec = ReportRecord::new(cmd.name(), cmd.echo(), seed);
    rec.input.insert("profile".into(), profile.to_string());
    match cmd {
        Command::GammaCheck(a) => gamma_check(a, &mut rec)?,
        Command::ChEval(a) => ch_eval(a, profile, &mut rec)?,
        Command::ProductEval(a) => product_eval(a, profile, &mut rec)?,
        Command::MEval(a) => m_eval(a, profile, &mut rec)?,
        Command::Duality(a) => duality(a, &mut rec)?,
        Command::QuadCompare(a) => quad_compare(a, seed, profile, &mut rec)?,
    }
    Ok(rec.finish())
}

fn usage(msg: impl Into<String>) -> ParseError {
    ParseError { pos: 0, msg: msg.into() }
}

fn weights(text: &str) -> Result<Weights, ParseError> {
    Weights::new(parse_list(text)?).map_err(|e| usage(e.to_string()))
}

fn default_weights(q: usize) -> Weights {
    Weights::new((1..=q as u32).rev().collect()).expect("positive weights")
}

fn gamma_check(a: &GammaCheckArgs, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let rows: Vec<Vec<u32>> = serde_json::from_str(&a.alpha).map_err(|e| usage(format!("alpha: {e}")))?;
    let alpha = match ExponentMatrix::new(rows) {
        Ok(m) => m,
        Err(e) => return Err(usage(e.to_string())),
    };
    let r = alpha.nrows();
    let sigma: Vec<usize> = if a.sigma == "id" {
        (0..r).collect()
    } else {
        parse_list::<usize>(&a.sigma)?.into_iter().map(|s| s.wrapping_sub(1)).collect()
    };
    let k = match &a.k {
        Some(t) => parse_list(t)?,
        None => vec![1; r],
    };
    let mu = weights(&a.mu)?;
    match lemma_check(&alpha, &k, a.p, &sigma, &mu) {
        Ok(rep) => {
            for t in &rep.terms {
                let cols: Vec<String> = t.columns.iter().map(|c| (c + 1).to_string()).collect();
                let key = format!("I=[{}]", cols.join(","));
                if let Ok(v) = &t.iterated {
                    rec.values.insert(format!("{key}.iterated"), encode_rational(v));
                }
                if let Ok(v) = &t.curve {
                    rec.values.insert(format!("{key}.curve"), encode_rational(v));
                }
                rec.witnesses.insert(key, t.witness_holds());
            }
            rec.check("equal", rep.equal());
            rec.check("witnesses", rep.witnesses_hold());
        }
        Err(e) => rec.fail("GammaError", e.to_string()),
    }
    Ok(())
}

fn record_product(rec: &mut ReportRecord, rep: &ProductReport) {
    match &rep.iterated {
        Ok(v) => {
            rec.values.insert("iterated".into(), encode_exact(v));
        }
        Err(e) => rec.notes.push(format!("iterated limit: {e}")),
    }
    match &rep.curve {
        Ok(v) => {
            rec.values.insert("curve".into(), encode_exact(v));
            rec.values.insert("value".into(), encode_exact(v));
        }
        Err(e) => rec.notes.push(format!("curve limit: {e}")),
    }
    for (j, w) in rep.witnesses.iter().enumerate() {
        rec.witnesses.insert(format!("term{j}"), w.as_ref().is_ok_and(|w| w.holds()));
    }
    rec.notes.extend(rep.notes.iter().cloned());
    rec.check("equal", rep.equal());
    rec.check("witnesses", rep.witnesses_hold());
}

fn test_form(text: &str, n_min: usize, profile: u32) -> Result<(TestForm, usize), ParseError> {
    let t = parse_test_form(text)?;
    let n = t.ncoords().max(n_min);
    Ok((t.build(n, profile)?, n))
}

fn ch_eval(a: &ChEvalArgs, profile: u32, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let monos = parse_monomials(&a.factors)?;
    let n0 = monos.iter().map(Vec::len).max().unwrap_or(0);
    let (phi, n) = test_form(&a.testform, n0, profile)?;
    let monos: Vec<Vec<u32>> = monos.iter().map(|m| pad(m, n)).collect();
    let w = match &a.weights {
        Some(t) => weights(t)?,
        None => default_weights(monos.len()),
    };
    match ProductSpec::coleff_herrera(&monos, w).and_then(|s| evaluate_sum(&ch_current(&s), &phi, s.weights())) {
        Ok(rep) => record_product(rec, &rep),
        Err(e) => rec.fail("ProductError", e.to_string()),
    }
    Ok(())
}

fn product_eval(a: &ProductEvalArgs, profile: u32, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let parsed = parse_factors(&a.factors)?;
    let n0 = parsed.iter().map(|(_, m)| m.len()).max().unwrap_or(0);
    let (phi, n) = test_form(&a.testform, n0, profile)?;
    let units = a.units.as_deref().map(parse_rationals).transpose()?;
    let poles = a.poles.as_deref().map(parse_list::<u32>).transpose()?;
    let factors = build_factors(&parsed, n, units.as_deref(), poles.as_deref());
    let w = match &a.weights {
        Some(t) => weights(t)?,
        None => default_weights(factors.len()),
    };
    let spec = if a.exploratory { ProductSpec::exploratory(factors, w) } else { ProductSpec::new(factors, w) };
    match spec.and_then(|s| evaluate_product(&s, &phi)) {
        Ok(rep) => record_product(rec, &rep),
        Err(e) => rec.fail("ProductError", e.to_string()),
    }
    Ok(())
}

fn m_eval(a: &MEvalArgs, profile: u32, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let m = parse_monomial(&a.factor)?;
    let (phi, n) = test_form(&a.testform, m.len(), profile)?;
    let alpha = pad(&m, n);
    let spec = ProductSpec::new(vec![FactorSpec::m(alpha.clone())], default_weights(1));
    match spec.and_then(|s| m_product(&s, &phi)) {
        Ok(rep) => {
            record_product(rec, &rep);
            if lelong_shape(&phi) {
                let oracle = lelong_oracle(&alpha, &phi);
                rec.values.insert("lelong".into(), encode_exact(&oracle));
                rec.check("lelong", rep.iterated.as_ref().ok() == Some(&oracle));
            }
        }
        Err(e) => rec.fail("ProductError", e.to_string()),
    }
    Ok(())
}

/// One coordinate without differential or monomial, area on the rest.
fn lelong_shape(phi: &TestForm) -> bool {
    let ones: Vec<_> = phi.coords.iter().filter(|c| c.diff == Differential::One).collect();
    ones.len() == 1
        && ones[0].hol == 0
        && ones[0].anti == 0
        && phi.coords.iter().filter(|c| c.diff == Differential::Area).count() + 1 == phi.ncoords()
}

fn duality(a: &DualityArgs, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let monos = parse_monomials(&a.ci)?;
    let g = parse_monomial(&a.g)?;
    let n = monos.iter().map(Vec::len).chain([g.len()]).max().unwrap_or(0);
    let monos: Vec<Vec<u32>> = monos.iter().map(|m| pad(m, n)).collect();
    let g = pad(&g, n);
    let member = monos.iter().any(|f| f.iter().zip(&g).all(|(a, b)| a <= b));
    rec.notes.push(format!("g in ideal: {member}"));
    match ProductSpec::coleff_herrera(&monos, default_weights(monos.len())).and_then(|s| annihilation_test(&s, &g)) {
        Ok(ann) => {
            rec.check("annihilated", ann);
            if ann != member {
                rec.notes.push("annihilation disagrees with ideal membership".into());
            }
        }
        Err(e) => rec.fail("ProductError", e.to_string()),
    }
    Ok(())
}

fn parse_cutoff(text: &str) -> Result<Cutoff, ParseError> {
    match text.split_once(':') {
        None if text == "characteristic" => Ok(Cutoff::Characteristic),
        None if text == "smoothstep" => Ok(Cutoff::default()),
        Some(("smoothstep", m)) => m.parse().map(Cutoff::Smoothstep).map_err(|_| usage(format!("cutoff order '{m}'"))),
        _ => Err(usage(format!("unknown cutoff '{text}'"))),
    }
}

fn quad_compare(a: &QuadCompareArgs, seed: u64, profile: u32, rec: &mut ReportRecord) -> Result<(), ParseError> {
    let parsed = parse_factors(&a.factors)?;
    let n0 = parsed.iter().map(|(_, m)| m.len()).max().unwrap_or(0);
    let (phi, n) = test_form(&a.testform, n0, profile)?;
    let factors = build_factors(&parsed, n, None, None);
    let q = factors.len();
    let w = match &a.weights {
        Some(t) => weights(t)?,
        None => default_weights(q),
    };
    let chi = parse_cutoff(&a.cutoff)?;
    let deltas: Vec<f64> = parse_list(&a.deltas)?;
    let nu: Vec<u32> = match &a.nu {
        Some(t) => parse_list(t)?,
        None => w.as_slice().to_vec(),
    };
    let spec = match ProductSpec::new(factors, w) {
        Ok(s) => s,
        Err(e) => {
            rec.fail("ProductError", e.to_string());
            return Ok(());
        }
    };
    if spec.factors().iter().all(|f| f.kind == FactorKind::R) {
        let path = EpsilonPath::for_spec(&spec, nu, deltas);
        match path.and_then(|p| convergence_study(&spec, &phi, &p, chi)) {
            Ok(t) => {
                rec.set_table(&t);
                rec.notes.push(format!("ratio bound {}", t.ratio_bound));
                if let Ok(rep) = evaluate_sum(&ch_current(&spec), &phi, spec.weights()) {
                    if let Ok(v) = rep.iterated {
                        rec.values.insert("oracle".into(), encode_exact(&v));
                    }
                }
                rec.check("convergence", t.converged(a.tolerance, a.zero_tolerance));
            }
            Err(e) => rec.fail("QuadError", e.to_string()),
        }
    } else {
        rec.notes.push("convergence study skipped: smooth cutoffs need R factors".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..a.samples {
        let lambda: Vec<f64> = (0..q).map(|_| rng.gen_range(1.5..=4.0)).collect();
        match lambda_sample(&spec, &phi, &lambda) {
            Ok(s) => {
                let label = format!("lambda={lambda:?}");
                rec.comparisons.push(Comparison {
                    label,
                    numeric: s.numeric.into(),
                    exact: s.exact.into(),
                    rel_err: s.rel_err,
                });
                rec.check(format!("sample{i}"), s.agrees(1e-8));
            }
            Err(e) => {
                rec.fail("QuadError", e.to_string());
                break;
            }
        }
    }
    Ok(())
}

pub(crate) fn echo<T: serde::Serialize>(args: &T) -> BTreeMap<String, String> {
    let Ok(serde_json::Value::Object(map)) = serde_json::to_value(args) else {
        return BTreeMap::new();
    };
    map.into_iter()
        .filter(|(_, v)| !v.is_null())
        .map(|(k, v)| {
            let s = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            (k, s)
        })
        .collect()
}
