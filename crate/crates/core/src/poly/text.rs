//! Plain-text serialization of polynomial tuples.
//!
//! ```text
//! vars z0 z1 z2
//! f0: (1, 2 1 0)
//! f1: (1, 0 3 0) (-1/2+3i, 1 1 1)
//! f2: 0
//! ```
//!
//! Coefficients are exact Gaussian rationals and exponents are decimal
//! integers of any size, so the round trip is bit-exact. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use super::{Exponents, GaussianRational, PolyTuple, SparsePoly};
use crate::error::{Error, Result};

pub fn tuple_to_text(t: &PolyTuple) -> String {
    let names: Vec<String> = (0..t.nvars()).map(|i| format!("z{i}")).collect();
    tuple_to_text_named(t, &names)
}

pub fn tuple_to_text_named(t: &PolyTuple, names: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "vars {}", names.join(" ")).unwrap();
    for (j, p) in t.components().iter().enumerate() {
        write!(out, "f{j}:").unwrap();
        if p.is_zero() {
            out.push_str(" 0");
        }
        for (e, c) in p.terms().rev() {
            write!(out, " ({c}, {e})").unwrap();
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the text form; returns the variable names and the tuple.
pub fn tuple_from_text(s: &str) -> Result<(Vec<String>, PolyTuple)> {
    let mut vars: Option<Vec<String>> = None;
    let mut comps = Vec::new();
    for (idx, raw) in s.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars") {
            if vars.is_some() {
                return Err(perr(lineno, "duplicate vars line"));
            }
            vars = Some(rest.split_whitespace().map(str::to_owned).collect());
            continue;
        }
        let nvars = vars
            .as_ref()
            .ok_or_else(|| perr(lineno, "expected `vars` line first"))?
            .len();
        let (label, body) = line
            .split_once(':')
            .ok_or_else(|| perr(lineno, "expected `fJ: terms`"))?;
        if label.trim() != format!("f{}", comps.len()) {
            return Err(perr(lineno, format!("expected label f{}", comps.len())));
        }
        comps.push(parse_poly(body.trim(), nvars, lineno)?);
    }
    let vars = vars.ok_or_else(|| perr(0, "missing vars line"))?;
    if vars.is_empty() {
        return Err(perr(0, "no variables declared"));
    }
    let t = PolyTuple::new(comps).map_err(|e| perr(0, e.to_string()))?;
    Ok((vars, t))
}

fn parse_poly(body: &str, nvars: usize, line: usize) -> Result<SparsePoly> {
    if body == "0" {
        return Ok(SparsePoly::zero(nvars));
    }
    let mut terms = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| perr(line, format!("expected `(` at `{rest}`")))?;
        let close = open
            .find(')')
            .ok_or_else(|| perr(line, "unterminated term"))?;
        let inner = &open[..close];
        let (c, e) = inner
            .split_once(',')
            .ok_or_else(|| perr(line, "term must be `(coefficient, exponents)`"))?;
        let coef = GaussianRational::from_str(c).map_err(|m| perr(line, m))?;
        let exps = e
            .split_whitespace()
            .map(BigUint::from_str)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|m| perr(line, m.to_string()))?;
        if exps.len() != nvars {
            return Err(perr(
                line,
                format!("exponent vector has {} entries, expected {nvars}", exps.len()),
            ));
        }
        terms.push((coef, Exponents::from_vec(exps)));
        rest = open[close + 1..].trim_start();
    }
    Ok(SparsePoly::from_terms(nvars, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_big_exponents() {
        let big = (BigUint::from(1u32) << 100u32) - 1u32;
        let p = SparsePoly::from_terms(
            2,
            [
                (GaussianRational::from_parts((-1, 2), (3, 1)), Exponents::from_vec(vec![big.clone(), 1u32.into()])),
                (GaussianRational::from_integer(7), Exponents::from_u64s(&[0, 0])),
            ],
        );
        let t = PolyTuple::new(vec![p, SparsePoly::zero(2)]).unwrap();
        let s = tuple_to_text(&t);
        let (vars, back) = tuple_from_text(&s).unwrap();
        assert_eq!(vars, vec!["z0", "z1"]);
        assert_eq!(back, t);
        assert_eq!(tuple_to_text(&back), s);
    }

    #[test]
    fn bad_input_reports_line() {
        let err = tuple_from_text("vars x y\nf0: (1, 2)\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
