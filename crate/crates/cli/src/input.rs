//! Parsing of command-line operands.

use serde_json::Value;
use wronski::polyring::parse_poly;
use wronski::rational::parse_rat;
use wronski::{Error, Polynomial, Rat, Result, WordSet};

fn json(src: &str) -> Result<Value> {
    serde_json::from_str(src).map_err(|e| Error::Invalid(format!("malformed JSON `{src}`: {e}")))
}

fn as_uint(v: &Value) -> Result<u64> {
    v.as_u64().ok_or_else(|| Error::Invalid(format!("expected a non-negative integer, found {v}")))
}

fn as_array(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Invalid(format!("expected an array, found {v}")))
}

/// Letter lists, `[[1],[2],[1,2]]`.
pub fn letter_lists(src: &str) -> Result<Vec<Vec<usize>>> {
    as_array(&json(src)?)?
        .iter()
        .map(|w| as_array(w)?.iter().map(|l| as_uint(l).map(|x| x as usize)).collect())
        .collect()
}

/// A word set in letter-list form. The alphabet is `p` when given, otherwise the
/// largest letter used.
pub fn word_set(src: &str, p: Option<usize>) -> Result<WordSet> {
    let lists = letter_lists(src)?;
    let used = lists.iter().flatten().copied().max().unwrap_or(0);
    let p = match p {
        Some(p) => p,
        None if used > 0 => used,
        None => return Err(Error::Invalid("cannot infer the alphabet of an empty set; pass --p".into())),
    };
    WordSet::from_letter_lists(p, &lists)
}

fn rational(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().expect("checked").into())),
        other => Err(Error::Invalid(format!("expected an integer or a fraction string, found {other}"))),
    }
}

/// Rows of rationals, `[[1, "1/2"], [0, 3]]`.
pub fn rational_rows(src: &str) -> Result<Vec<Vec<Rat>>> {
    as_array(&json(src)?)?
        .iter()
        .map(|row| as_array(row)?.iter().map(rational).collect())
        .collect()
}

/// Rows of non-negative integers, `[[0, 1], [2, 0]]`.
pub fn exponent_rows(src: &str) -> Result<Vec<Vec<u32>>> {
    as_array(&json(src)?)?
        .iter()
        .map(|row| {
            as_array(row)?
                .iter()
                .map(|x| {
                    let v = as_uint(x)?;
                    u32::try_from(v).map_err(|_| Error::Invalid(format!("exponent {v} too large")))
                })
                .collect()
        })
        .collect()
}

pub fn polynomials(exprs: &[String], p: usize) -> Result<Vec<Polynomial>> {
    exprs.iter().map(|e| parse_poly(e, p)).collect()
}
