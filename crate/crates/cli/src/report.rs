//! Report records and their JSON/CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use residua::currents::{ExactValue, Tag};
use residua::quad::{ConvergenceTable, CSV_HEADER};
use residua::ratfun::{format_rational, parse_rational};
use residua::Rational;

pub const SCHEMA: &str = "residua-report/1";

#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct IoError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

/// `q · π^pi · i^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactScalar {
    pub q: String,
    pub pi: i32,
    pub i: u8,
}

impl ExactScalar {
    pub fn rational(&self) -> Option<Rational> {
        parse_rational(&self.q)
    }
}

/// Parts of an exact value, one per `(π, i)` tag; zero is a single `0/1`.
pub fn encode_exact(v: &ExactValue) -> Vec<ExactScalar> {
    let mut out: Vec<ExactScalar> = v
        .parts()
        .map(|(t, q)| ExactScalar { q: format_rational(q), pi: t.pi, i: t.i })
        .collect();
    if out.is_empty() {
        out.push(ExactScalar { q: "0/1".into(), pi: 0, i: 0 });
    }
    out
}

pub fn encode_rational(q: &Rational) -> Vec<ExactScalar> {
    encode_exact(&ExactValue::tagged(Tag::ONE, q.clone()))
}

pub fn decode_exact(parts: &[ExactScalar]) -> Option<ExactValue> {
    parts.iter().try_fold(ExactValue::zero(), |acc, p| {
        Some(acc.add(&ExactValue::tagged(Tag { pi: p.pi, i: p.i }, p.rational()?)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Numeric {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Numeric {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub numeric: Numeric,
    pub exact: Numeric,
    pub rel_err: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub delta: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub input: BTreeMap<String, String>,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Vec<ExactScalar>>,
    pub comparisons: Vec<Comparison>,
    pub table: Vec<TableRow>,
    pub witnesses: BTreeMap<String, bool>,
    pub notes: Vec<String>,
    pub error: Option<Failure>,
}

impl ReportRecord {
    pub fn new(command: &str, input: BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input,
            seed,
            ..Self::default()
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn fail(&mut self, kind: &str, message: impl Into<String>) {
        self.error = Some(Failure { kind: kind.into(), message: message.into() });
    }

    pub fn set_table(&mut self, t: &ConvergenceTable) {
        self.table = t
            .rows
            .iter()
            .map(|r| TableRow { delta: r.delta, value_re: r.value.re, value_im: r.value.im, abs_err: r.abs_err })
            .collect();
    }

    /// All checks pass and no error was recorded.
    pub fn finish(mut self) -> Self {
        self.pass = self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.table {
            out.push_str(&format!("{:e},{:e},{:e},{:e}\n", r.delta, r.value_re, r.value_im, r.abs_err));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Writes to `path`, or stdout when absent.
pub fn emit_report(record: &ReportRecord, format: Format, path: Option<&Path>) -> Result<(), IoError> {
    let text = match format {
        Format::Json => record.to_json(),
        Format::Csv => record.to_csv(),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| IoError { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| IoError { path: "<stdout>".into(), source }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        let v = ExactValue::tagged(Tag { pi: 2, i: 0 }, Rational::new((-4).into(), 3.into()))
            .add(&ExactValue::tagged(Tag { pi: 1, i: 1 }, Rational::new(1.into(), 2.into())));
        let enc = encode_exact(&v);
        assert_eq!(enc[0].q, "1/2");
        assert_eq!(decode_exact(&enc), Some(v));
        assert_eq!(encode_exact(&ExactValue::zero())[0].q, "0/1");
        assert!(decode_exact(&encode_exact(&ExactValue::zero())).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let mut r = ReportRecord::new("ch-eval", BTreeMap::from([("factors".into(), "z,w".into())]), 7);
        r.check("equal", true);
        r.values.insert("iterated".into(), encode_rational(&Rational::new(1.into(), 3.into())));
        r.comparisons.push(Comparison {
            label: "λ".into(),
            numeric: Numeric { re: 0.1 + 0.2, im: -1e-300 },
            exact: Numeric { re: 0.3, im: 0.0 },
            rel_err: 1.0 / 3.0,
        });
        r.table.push(TableRow { delta: 1e-3, value_re: -39.47, value_im: 0.0, abs_err: 2.3e-4 });
        let r = r.finish();
        assert!(r.pass);
        assert_eq!(ReportRecord::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_header() {
        let r = ReportRecord::new("quad-compare", BTreeMap::new(), 0);
        assert_eq!(r.to_csv().lines().next(), Some("delta,value_re,value_im,abs_err"));
    }
}
