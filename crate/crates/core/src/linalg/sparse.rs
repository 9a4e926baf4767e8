//! Sorted sparse vectors of residues.

use super::field::{PrimeField, Residue};

/// `(coordinate, nonzero value)` pair.
pub type Entry = (usize, Residue);

/// Sparse vector with strictly increasing coordinates and no stored zeros.
pub type SparseVec = Vec<Entry>;

/// `a + f*b`, both sorted.
pub fn axpy(field: PrimeField, a: &[Entry], f: Residue, b: &[Entry]) -> SparseVec {
    if f == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = field.mul(f, b[j].1);
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(f, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(field: PrimeField, a: &[Entry], f: Residue) -> SparseVec {
    if f == 0 {
        return Vec::new();
    }
    a.iter().map(|&(c, v)| (c, field.mul(f, v))).collect()
}

/// Value at coordinate `c`.
pub fn get(a: &[Entry], c: usize) -> Residue {
    match a.binary_search_by_key(&c, |e| e.0) {
        Ok(pos) => a[pos].1,
        Err(_) => 0,
    }
}

/// Sorts, merges duplicates and drops zeros.
pub fn normalize(field: PrimeField, mut terms: Vec<Entry>) -> SparseVec {
    terms.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        let v = v % field.p();
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = field.add(last.1, v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

pub fn to_dense(a: &[Entry], len: usize) -> Vec<Residue> {
    let mut v = vec![0; len];
    for &(c, x) in a {
        v[c] = x;
    }
    v
}

pub fn from_dense(v: &[Residue]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(c, &x)| (c, x))
        .collect()
}
