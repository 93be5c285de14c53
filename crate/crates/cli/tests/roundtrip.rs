use proptest::prelude::*;

use residua::currents::{ExactValue, Tag};
use residua::Rational;
use residua_cli::parse::parse_monomial;
use residua_cli::report::{decode_exact, encode_exact, ReportRecord};

fn exact() -> impl Strategy<Value = ExactValue> {
    prop::collection::vec((-3i32..=3, 0u8..=1, any::<i64>(), 1i64..=i64::MAX), 0..4).prop_map(|parts| {
        parts.into_iter().fold(ExactValue::zero(), |acc, (pi, i, n, d)| {
            acc.add(&ExactValue::tagged(Tag { pi, i }, Rational::new(n.into(), d.into())))
        })
    })
}

proptest! {
    #[test]
    fn exact_values_survive_the_report(v in exact()) {
        let mut r = ReportRecord::new("ch-eval", Default::default(), 0);
        r.values.insert("value".into(), encode_exact(&v));
        let back = ReportRecord::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(decode_exact(&back.values["value"]).unwrap(), v);
    }

    #[test]
    fn monomials_print_and_parse(exps in prop::collection::vec(0u32..5, 1..5)) {
        prop_assume!(exps.iter().any(|&e| e > 0));
        let text: Vec<String> = exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, e)| format!("x{}^{e}", k + 1)).collect();
        let mut got = parse_monomial(&text.join("*")).unwrap();
        got.resize(exps.len(), 0);
        prop_assert_eq!(got, exps);
    }
}
