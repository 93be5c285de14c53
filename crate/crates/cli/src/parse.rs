//! Text formats for monomials, factor lists and split test forms.

use thiserror::Error;

use residua::currents::{CoordinateTest, Differential, RadialProfile, TestForm};
use residua::products::{FactorKind, FactorSpec};
use residua::ratfun::parse_rational;
use residua::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str, base: usize) -> Self {
        Self { s: s.as_bytes(), pos: 0, base }
    }

    fn at(&self) -> usize {
        self.base + self.pos
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return err(self.base + start, "expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .map_or_else(|| err(self.base + start, "number out of range"), Ok)
    }

    /// `'x' nat | 'z' | 'w'`, as a 0-based coordinate index.
    fn var(&mut self) -> Result<usize, ParseError> {
        let at = self.at();
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                Ok(0)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(1)
            }
            Some(b'x') => {
                self.pos += 1;
                match self.nat()? {
                    0 => err(at, "variables are numbered from x1"),
                    k => Ok(k as usize - 1),
                }
            }
            _ => err(at, "expected a variable (x<n>, z or w)"),
        }
    }

    fn done(&self) -> bool {
        self.pos == self.s.len()
    }
}

fn bump(v: &mut Vec<u32>, k: usize, e: u32) {
    if v.len() <= k {
        v.resize(k + 1, 0);
    }
    v[k] += e;
}

/// `monomial := term ('*' term)*`, `term := var ('^' nat)?`; `z = x1`,
/// `w = x2`. The vector has the length of the largest variable index.
pub fn parse_monomial(text: &str) -> Result<Vec<u32>, ParseError> {
    let (hol, anti) = parse_mixed(text, 0, false)?;
    debug_assert!(anti.is_empty());
    Ok(hol)
}

/// Monomial in `x` and `x̄` (conjugates written `zb`, `x3b`). `"1"` is the
/// constant.
fn parse_mixed(text: &str, base: usize, conjugates: bool) -> Result<(Vec<u32>, Vec<u32>), ParseError> {
    let mut hol = Vec::new();
    let mut anti = Vec::new();
    if text.trim() == "1" {
        return Ok((hol, anti));
    }
    let mut c = Cursor::new(text, base);
    loop {
        let k = c.var()?;
        let bar = conjugates && c.eat(b'b');
        let e = if c.eat(b'^') {
            let at = c.at();
            match c.nat()? {
                0 => return err(at, "zero exponent; write constants through the unit field"),
                e => e,
            }
        } else {
            1
        };
        bump(if bar { &mut anti } else { &mut hol }, k, e);
        if c.done() {
            break;
        }
        if !c.eat(b'*') {
            return err(c.at(), "expected '*'");
        }
    }
    Ok((hol, anti))
}

/// Comma-separated monomials.
pub fn parse_monomials(text: &str) -> Result<Vec<Vec<u32>>, ParseError> {
    let mut base = 0;
    let mut out = Vec::new();
    for part in text.split(',') {
        let (hol, anti) = parse_mixed(part, base, false)?;
        debug_assert!(anti.is_empty());
        if hol.iter().all(|&a| a == 0) {
            return err(base, "constant section");
        }
        out.push(hol);
        base += part.len() + 1;
    }
    Ok(out)
}

/// Comma-separated `[R|U|M:]monomial`, kind `R` by default.
pub fn parse_factors(text: &str) -> Result<Vec<(FactorKind, Vec<u32>)>, ParseError> {
    let mut base = 0;
    let mut out = Vec::new();
    for part in text.split(',') {
        let (kind, body, skip) = match part.split_once(':') {
            Some((k, body)) => {
                let kind = match k {
                    "R" | "r" => FactorKind::R,
                    "U" | "u" => FactorKind::U,
                    "M" | "m" => FactorKind::M,
                    _ => return err(base, format!("unknown factor kind '{k}'")),
                };
                (kind, body, k.len() + 1)
            }
            None => (FactorKind::R, part, 0),
        };
        let m = parse_monomials(body).map_err(|e| ParseError { pos: e.pos + base + skip, ..e })?;
        out.push((kind, m.into_iter().next().unwrap_or_default()));
        base += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, ParseError> {
    let mut base = 0;
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.trim().parse() {
            Ok(v) => out.push(v),
            Err(_) => return err(base, format!("cannot read '{part}'")),
        }
        base += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_rationals(text: &str) -> Result<Vec<Rational>, ParseError> {
    let mut base = 0;
    let mut out = Vec::new();
    for part in text.split(',') {
        match parse_rational(part.trim()) {
            Some(v) => out.push(v),
            None => return err(base, format!("cannot read rational '{part}'")),
        }
        base += part.len() + 1;
    }
    Ok(out)
}

/// Pads every exponent vector to `n` coordinates.
pub fn pad(v: &[u32], n: usize) -> Vec<u32> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

pub fn build_factors(
    parsed: &[(FactorKind, Vec<u32>)],
    n: usize,
    units: Option<&[Rational]>,
    poles: Option<&[u32]>,
) -> Vec<FactorSpec> {
    parsed
        .iter()
        .enumerate()
        .map(|(j, (kind, m))| {
            let mut f = FactorSpec::new(*kind, pad(m, n));
            if let Some(u) = units.and_then(|u| u.get(j)) {
                f = f.with_unit(u.clone());
            }
            if let Some(&k) = poles.and_then(|p| p.get(j)) {
                f = f.with_pole_order(k);
            }
            f
        })
        .collect()
}

/// A parsed `"<monomial>|<diff>"` before the number of coordinates is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFormText {
    pub hol: Vec<u32>,
    pub anti: Vec<u32>,
    /// `(coordinate, anti)` in written order; `vol` entries are expanded.
    pub slots: Vec<(usize, bool)>,
    /// Coordinates carrying the area element.
    pub areas: Vec<usize>,
    /// `vol` without a variable: area on every coordinate.
    pub full_volume: bool,
}

impl TestFormText {
    pub fn ncoords(&self) -> usize {
        let mut n = self.hol.len().max(self.anti.len());
        for &(k, _) in &self.slots {
            n = n.max(k + 1);
        }
        for &k in &self.areas {
            n = n.max(k + 1);
        }
        n
    }

    /// Test form on `n` coordinates with profile `(1-t)^order`; a written
    /// order of differentials other than the canonical one flips the sign.
    pub fn build(&self, n: usize, order: u32) -> Result<TestForm, ParseError> {
        let mut bits: Vec<usize> = Vec::new();
        let mut diff = vec![Differential::One; n];
        let mut seen = vec![(false, false, false); n];
        let areas: Vec<usize> = if self.full_volume { (0..n).collect() } else { self.areas.clone() };
        for &k in &areas {
            if seen[k].0 || seen[k].1 || seen[k].2 {
                return err(0, format!("repeated differential in coordinate {}", k + 1));
            }
            seen[k].2 = true;
            diff[k] = Differential::Area;
            bits.extend([2 * k, 2 * k + 1]);
        }
        for &(k, bar) in &self.slots {
            let s = &mut seen[k];
            if s.2 || (bar && s.1) || (!bar && s.0) {
                return err(0, format!("repeated differential in coordinate {}", k + 1));
            }
            if bar {
                s.1 = true;
            } else {
                s.0 = true;
            }
            bits.push(2 * k + usize::from(bar));
        }
        for (k, s) in seen.iter().enumerate() {
            if !s.2 {
                diff[k] = match (s.0, s.1) {
                    (true, true) => Differential::DxDxbar,
                    (true, false) => Differential::Dx,
                    (false, true) => Differential::Dxbar,
                    (false, false) => Differential::One,
                };
            }
        }
        let inversions: usize =
            (0..bits.len()).map(|i| bits[i + 1..].iter().filter(|&&b| b < bits[i]).count()).sum();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        let hol = pad(&self.hol, n);
        let anti = pad(&self.anti, n);
        let coords = (0..n)
            .map(|k| {
                let coeff = Rational::from_integer(if k == 0 { sign } else { 1 }.into());
                let profile = RadialProfile::new(order, vec![coeff]).map_err(|e| ParseError { pos: 0, msg: e.to_string() })?;
                Ok(CoordinateTest::new(hol[k], anti[k], profile, diff[k]))
            })
            .collect::<Result<_, ParseError>>()?;
        Ok(TestForm::new(coords))
    }
}

/// `"<monomial>|<diff>"`: the monomial may contain conjugates (`zb`); the
/// differential is `1` or tokens `d<var>`, `d<var>b`, `vol`, `vol<var>`
/// joined by `^`.
pub fn parse_test_form(text: &str) -> Result<TestFormText, ParseError> {
    let Some((mono, diff)) = text.split_once('|') else {
        return err(text.len(), "expected '<monomial>|<differential>'");
    };
    let (hol, anti) = parse_mixed(mono, 0, true)?;
    let mut out = TestFormText { hol, anti, slots: Vec::new(), areas: Vec::new(), full_volume: false };
    let mut base = mono.len() + 1;
    if diff.trim() == "1" {
        return Ok(out);
    }
    for tok in diff.split('^') {
        if let Some(rest) = tok.strip_prefix("vol") {
            if rest.is_empty() {
                out.full_volume = true;
            } else {
                let mut c = Cursor::new(rest, base + 3);
                let k = c.var()?;
                if !c.done() {
                    return err(c.at(), "trailing characters");
                }
                out.areas.push(k);
            }
        } else if let Some(rest) = tok.strip_prefix('d') {
            let mut c = Cursor::new(rest, base + 1);
            let k = c.var()?;
            let bar = c.eat(b'b');
            if !c.done() {
                return err(c.at(), "trailing characters");
            }
            out.slots.push((k, bar));
        } else {
            return err(base, format!("unknown differential '{tok}'"));
        }
        base += tok.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials() {
        assert_eq!(parse_monomial("x1^2*x2").unwrap(), vec![2, 1]);
        assert_eq!(parse_monomial("z*w").unwrap(), vec![1, 1]);
        assert_eq!(parse_monomial("w").unwrap(), vec![0, 1]);
        assert_eq!(parse_monomial("x3").unwrap(), vec![0, 0, 1]);
        assert_eq!(parse_monomial("z*z^2").unwrap(), vec![3]);
        assert_eq!(parse_monomial("x1^0").unwrap_err().pos, 3);
        assert_eq!(parse_monomial("z*q").unwrap_err().pos, 2);
        assert!(parse_monomial("x0").is_err());
        assert!(parse_monomial("z w").is_err());
        assert!(parse_monomial("zb").is_err());
    }

    #[test]
    fn factor_lists() {
        let f = parse_factors("z,U:z*w,M:w^2").unwrap();
        assert_eq!(f[0], (FactorKind::R, vec![1]));
        assert_eq!(f[1], (FactorKind::U, vec![1, 1]));
        assert_eq!(f[2], (FactorKind::M, vec![0, 2]));
        assert_eq!(parse_factors("z,Q:w").unwrap_err().pos, 2);
        assert_eq!(parse_monomials("z,w^0").unwrap_err().pos, 4);
    }

    #[test]
    fn test_forms() {
        let t = parse_test_form("z|dz^dw").unwrap();
        let phi = t.build(t.ncoords(), 4).unwrap();
        assert_eq!(phi.coords[0].hol, 1);
        assert_eq!(phi.coords[0].diff, Differential::Dx);
        assert_eq!(phi.coords[1].diff, Differential::Dx);
        assert_eq!(phi.coords[0].profile.coeffs()[0], Rational::from_integer(1.into()));
        let t = parse_test_form("1|dw^dz").unwrap();
        let phi = t.build(2, 4).unwrap();
        assert_eq!(phi.coords[0].profile.coeffs()[0], Rational::from_integer((-1).into()));
        let t = parse_test_form("zb*w|volw").unwrap();
        let phi = t.build(2, 2).unwrap();
        assert_eq!((phi.coords[0].anti, phi.coords[0].diff), (1, Differential::One));
        assert_eq!(phi.coords[1].diff, Differential::Area);
        let t = parse_test_form("1|dzb^dz").unwrap();
        let phi = t.build(1, 4).unwrap();
        assert_eq!(phi.coords[0].diff, Differential::DxDxbar);
        assert_eq!(phi.coords[0].profile.coeffs()[0], Rational::from_integer((-1).into()));
        assert!(parse_test_form("z").is_err());
        assert!(parse_test_form("z|dq").is_err());
        assert!(parse_test_form("1|dz^dz").unwrap().build(1, 4).is_err());
    }
}
