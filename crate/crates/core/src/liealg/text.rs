//! Line-oriented text format for structure constants.
//!
//! ```text
//! modlie-lie 1
//! p 3
//! dim 3
//! labels
//! e1
//! e2
//! e3
//! brackets
//! 0 1 : 2 1
//! end
//! ```
//!
//! Bracket lines list `[e_i, e_j]` for `i < j` as `k c` pairs, sorted by `k`,
//! with coefficients in `1..p`. Zero brackets are omitted.

use std::fmt::Write as _;

use super::algebra::{LieAlgebraFp, StructureBuilder};
use crate::error::{Error, Result};
use crate::linalg::PrimeField;

pub const MAGIC: &str = "modlie-lie 1";

pub fn to_text(l: &LieAlgebraFp) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "p {}", l.p()).unwrap();
    writeln!(out, "dim {}", l.dim()).unwrap();
    out.push_str("labels\n");
    for label in l.labels() {
        if label.contains(['\n', '\r']) || label.is_empty() {
            return Err(Error::InvalidParameters(format!(
                "label {label:?} cannot be written on one line"
            )));
        }
        out.push_str(label);
        out.push('\n');
    }
    out.push_str("brackets\n");
    for (i, j, terms) in l.nonzero_brackets() {
        write!(out, "{i} {j} :").unwrap();
        for (n, (k, c)) in terms.iter().enumerate() {
            let sep = if n == 0 { " " } else { ", " };
            write!(out, "{sep}{k} {c}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    Ok(out)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn keyed(line: &str, key: &str, no: usize) -> Result<u64> {
    line.strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| parse_err(no, format!("expected `{key} <number>`")))
}

pub fn from_text(text: &str) -> Result<LieAlgebraFp> {
    let mut lines = text.split('\n').enumerate().map(|(n, l)| (n + 1, l));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| parse_err(0, format!("unexpected end of input, expected {what}")))
    };
    let (no, l) = next("header")?;
    if l != MAGIC {
        return Err(parse_err(no, format!("expected `{MAGIC}`")));
    }
    let (no, l) = next("p")?;
    let p = keyed(l, "p", no)?;
    let field = PrimeField::new(u32::try_from(p).map_err(|_| parse_err(no, "p too large"))?)
        .map_err(|e| parse_err(no, e.to_string()))?;
    let (no, l) = next("dim")?;
    let dim = keyed(l, "dim", no)? as usize;
    let (no, l) = next("labels")?;
    if l != "labels" {
        return Err(parse_err(no, "expected `labels`"));
    }
    let mut labels = Vec::with_capacity(dim);
    for _ in 0..dim {
        let (no, l) = next("label")?;
        if l.is_empty() {
            return Err(parse_err(no, "empty label"));
        }
        labels.push(l.to_string());
    }
    let (no, l) = next("brackets")?;
    if l != "brackets" {
        return Err(parse_err(no, "expected `brackets`"));
    }
    let mut b = StructureBuilder::new(field, labels);
    let mut last_pair: Option<(usize, usize)> = None;
    loop {
        let (no, l) = next("bracket line or `end`")?;
        if l == "end" {
            break;
        }
        let (lhs, rhs) = l
            .split_once(" : ")
            .ok_or_else(|| parse_err(no, "expected `i j : k c, ...`"))?;
        let mut ij = lhs.split(' ').map(str::parse::<usize>);
        let (Some(Ok(i)), Some(Ok(j)), None) = (ij.next(), ij.next(), ij.next()) else {
            return Err(parse_err(no, "malformed index pair"));
        };
        if i >= j || j >= dim {
            return Err(parse_err(no, "index pair must satisfy i < j < dim"));
        }
        // (j, i) order matches the storage order
        if last_pair.is_some_and(|(pi, pj)| (pj, pi) >= (j, i)) {
            return Err(parse_err(no, "bracket lines out of order or repeated"));
        }
        last_pair = Some((i, j));
        let mut last_k = None;
        for term in rhs.split(", ") {
            let mut kc = term.split(' ').map(str::parse::<usize>);
            let (Some(Ok(k)), Some(Ok(c)), None) = (kc.next(), kc.next(), kc.next()) else {
                return Err(parse_err(no, format!("malformed term {term:?}")));
            };
            if k >= dim || c == 0 || c >= usize::from(field.p()) {
                return Err(parse_err(no, format!("term {term:?} out of range")));
            }
            if last_k.is_some_and(|lk| lk >= k) {
                return Err(parse_err(no, "terms must be sorted by basis index"));
            }
            last_k = Some(k);
            b.add(i, j, k, c as u8);
        }
    }
    match lines.next() {
        Some((_, "")) if lines.next().is_none() => {}
        Some((no, _)) => return Err(parse_err(no, "trailing content after `end`")),
        None => return Err(parse_err(0, "missing final newline")),
    }
    b.build()
}
