//! Divided power algebras O(m;n) and the Witt algebras W(m;n).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraFp, StructureBuilder};
use crate::linalg::{PrimeField, Residue};

/// Largest `p^{|n|}` accepted by [`DividedPowers::new`].
pub const MAX_DP_DIM: usize = 1 << 22;

/// Exponent tuple of a divided power monomial `x^(a)`, carrying its bounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    exps: Vec<u32>,
    tau: Arc<[u32]>,
}

impl MultiIndex {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn bounds(&self) -> &[u32] {
        &self.tau
    }

    pub fn m(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_top(&self) -> bool {
        self.exps[..] == self.tau[..]
    }

    fn same_bounds(&self, other: &MultiIndex) -> Result<()> {
        if Arc::ptr_eq(&self.tau, &other.tau) || self.tau == other.tau {
            Ok(())
        } else {
            Err(Error::BoundsMismatch)
        }
    }

    /// `self + delta` if it stays within bounds.
    pub fn shifted(&self, delta: &[i64]) -> Option<MultiIndex> {
        let exps = shift_exps(&self.exps, delta, &self.tau)?;
        Some(MultiIndex {
            exps,
            tau: self.tau.clone(),
        })
    }
}

fn shift_exps(exps: &[u32], delta: &[i64], tau: &[u32]) -> Option<Vec<u32>> {
    exps.iter()
        .zip(delta)
        .zip(tau)
        .map(|((&e, &d), &t)| {
            let v = i64::from(e) + d;
            (0..=i64::from(t)).contains(&v).then_some(v as u32)
        })
        .collect()
}

impl fmt::Display for MultiIndex {
    /// Monomial notation, `x1^2 x2`; the unit is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Divided power coefficient `prod C(a_l + b_l, b_l)`; zero outside `tau`.
pub fn dp_coeff(field: PrimeField, a: &[u32], b: &[u32], tau: &[u32]) -> Residue {
    let mut c: Residue = 1;
    for ((&x, &y), &t) in a.iter().zip(b).zip(tau) {
        if x + y > t {
            return 0;
        }
        c = field.mul(c, field.binom(u64::from(x + y), u64::from(y)));
        if c == 0 {
            return 0;
        }
    }
    c
}

/// The divided power algebra `O(m;n)` over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedPowers {
    field: PrimeField,
    n: Vec<u32>,
    tau: Arc<[u32]>,
    dim: usize,
}

impl DividedPowers {
    pub fn new(p: u32, n: &[u32]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if n.is_empty() || n.contains(&0) {
            return Err(Error::InvalidParameters(
                "need at least one variable and every n_i >= 1".into(),
            ));
        }
        let mut dim: usize = 1;
        let mut tau = Vec::with_capacity(n.len());
        for &k in n {
            let side = (p as usize)
                .checked_pow(k)
                .filter(|s| *s <= MAX_DP_DIM)
                .ok_or_else(|| Error::InvalidParameters("divided power algebra too large".into()))?;
            dim = dim
                .checked_mul(side)
                .filter(|d| *d <= MAX_DP_DIM)
                .ok_or_else(|| Error::InvalidParameters("divided power algebra too large".into()))?;
            tau.push(side as u32 - 1);
        }
        Ok(Self {
            field,
            n: n.to_vec(),
            tau: tau.into(),
            dim,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u8 {
        self.field.p()
    }

    pub fn m(&self) -> usize {
        self.n.len()
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn tau(&self) -> &[u32] {
        &self.tau
    }

    /// `p^{|n|}`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, exps: &[u32]) -> Result<MultiIndex> {
        if exps.len() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: exps.len(),
            });
        }
        if exps.iter().zip(self.tau.iter()).any(|(e, t)| e > t) {
            return Err(Error::InvalidParameters(format!(
                "exponent {exps:?} exceeds bounds {:?}",
                self.tau
            )));
        }
        Ok(MultiIndex {
            exps: exps.to_vec(),
            tau: self.tau.clone(),
        })
    }

    /// Index from signed exponents; `None` when any coordinate leaves `0..=tau`.
    pub fn try_index(&self, exps: &[i64]) -> Option<MultiIndex> {
        let zero = vec![0u32; self.m()];
        let exps = shift_exps(&zero, exps, &self.tau)?;
        Some(MultiIndex {
            exps,
            tau: self.tau.clone(),
        })
    }

    pub fn unit(&self) -> MultiIndex {
        MultiIndex {
            exps: vec![0; self.m()],
            tau: self.tau.clone(),
        }
    }

    pub fn top(&self) -> MultiIndex {
        MultiIndex {
            exps: self.tau.to_vec(),
            tau: self.tau.clone(),
        }
    }

    /// Mixed-radix position with the first coordinate varying fastest.
    pub fn rank(&self, a: &MultiIndex) -> usize {
        rank_exps(&a.exps, &self.tau)
    }

    /// Every monomial in reversed-index lexicographic order (last exponent
    /// most significant), which is also the order of [`Self::rank`].
    pub fn indices(&self) -> Vec<MultiIndex> {
        let m = self.m();
        let mut out = Vec::with_capacity(self.dim);
        let mut cur = vec![0u32; m];
        loop {
            out.push(MultiIndex {
                exps: cur.clone(),
                tau: self.tau.clone(),
            });
            let mut i = 0;
            while i < m && cur[i] == self.tau[i] {
                cur[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            cur[i] += 1;
        }
        out
    }

    /// `x^(a) x^(b) = C(a+b, b) x^(a+b)`, or `None` when the product vanishes.
    pub fn multiply(&self, a: &MultiIndex, b: &MultiIndex) -> Result<Option<(Residue, MultiIndex)>> {
        a.same_bounds(b)?;
        self.check_own(a)?;
        let c = dp_coeff(self.field, &a.exps, &b.exps, &self.tau);
        if c == 0 {
            return Ok(None);
        }
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        Ok(Some((
            c,
            MultiIndex {
                exps,
                tau: self.tau.clone(),
            },
        )))
    }

    /// `d_i x^(a) = x^(a - e_i)`, or `None` when `a_i = 0`.
    pub fn partial(&self, i: usize, a: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_own(a)?;
        if i >= self.m() {
            return Err(Error::InvalidParameters(format!("no variable x{}", i + 1)));
        }
        if a.exps[i] == 0 {
            return Ok(None);
        }
        let mut exps = a.exps.clone();
        exps[i] -= 1;
        Ok(Some(MultiIndex {
            exps,
            tau: self.tau.clone(),
        }))
    }

    fn check_own(&self, a: &MultiIndex) -> Result<()> {
        if Arc::ptr_eq(&a.tau, &self.tau) || a.tau == self.tau {
            Ok(())
        } else {
            Err(Error::BoundsMismatch)
        }
    }
}

pub(crate) fn rank_exps(exps: &[u32], tau: &[u32]) -> usize {
    let mut pos = 0usize;
    for (&e, &t) in exps.iter().zip(tau).rev() {
        pos = pos * (t as usize + 1) + e as usize;
    }
    pos
}

/// An element of `O(m;n)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DpPoly {
    terms: BTreeMap<MultiIndex, Residue>,
}

impl DpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: MultiIndex) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, 1);
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Residue> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &MultiIndex) -> Residue {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, field: PrimeField, a: MultiIndex, c: Residue) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert(0);
        *e = field.add(*e, c);
        if *e == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, o: &DpPoly, field: PrimeField) -> DpPoly {
        let mut out = self.clone();
        for (a, &c) in &o.terms {
            out.add_term(field, a.clone(), c);
        }
        out
    }

    pub fn mul(&self, o: &DpPoly, alg: &DividedPowers) -> Result<DpPoly> {
        let f = alg.field();
        let mut out = DpPoly::zero();
        for (a, &x) in &self.terms {
            for (b, &y) in &o.terms {
                if let Some((c, ab)) = alg.multiply(a, b)? {
                    out.add_term(f, ab, f.mul(c, f.mul(x, y)));
                }
            }
        }
        Ok(out)
    }

    pub fn partial(&self, i: usize, alg: &DividedPowers) -> Result<DpPoly> {
        let mut out = DpPoly::zero();
        for (a, &x) in &self.terms {
            if let Some(b) = alg.partial(i, a)? {
                out.add_term(alg.field(), b, x);
            }
        }
        Ok(out)
    }
}

/// An element `sum c x^(a) d_i` of `W(m;n)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WittElement {
    terms: BTreeMap<(MultiIndex, usize), Residue>,
}

impl WittElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: MultiIndex, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((a, i), 1);
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, usize), Residue> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &MultiIndex, i: usize) -> Residue {
        self.terms.get(&(a.clone(), i)).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, field: PrimeField, a: MultiIndex, i: usize, c: Residue) {
        if c == 0 {
            return;
        }
        let key = (a, i);
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e = field.add(*e, c);
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    /// Action on `O(m;n)` as a derivation.
    pub fn apply(&self, g: &DpPoly, alg: &DividedPowers) -> Result<DpPoly> {
        let f = alg.field();
        let mut out = DpPoly::zero();
        for ((a, i), &c) in &self.terms {
            for (b, &y) in g.terms() {
                let Some(db) = alg.partial(*i, b)? else { continue };
                if let Some((k, ab)) = alg.multiply(a, &db)? {
                    out.add_term(f, ab, f.mul(k, f.mul(c, y)));
                }
            }
        }
        Ok(out)
    }

    /// `[x^(a) d_i, x^(b) d_j] = x^(a) d_i(x^(b)) d_j - x^(b) d_j(x^(a)) d_i`,
    /// extended bilinearly.
    pub fn bracket(&self, other: &WittElement, alg: &DividedPowers) -> Result<WittElement> {
        let f = alg.field();
        let mut out = WittElement::zero();
        for ((a, i), &x) in &self.terms {
            for ((b, j), &y) in &other.terms {
                let xy = f.mul(x, y);
                if let Some(db) = alg.partial(*i, b)? {
                    if let Some((c, t)) = alg.multiply(a, &db)? {
                        out.add_term(f, t, *j, f.mul(c, xy));
                    }
                }
                if let Some(da) = alg.partial(*j, a)? {
                    if let Some((c, t)) = alg.multiply(b, &da)? {
                        out.add_term(f, t, *i, f.neg(f.mul(c, xy)));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Basis of `W(m;n)` ordered by degree, then reversed-index lex, then direction.
pub fn witt_basis(alg: &DividedPowers) -> Vec<(MultiIndex, usize)> {
    let mut idx = alg.indices();
    idx.sort_by_key(|a| a.degree());
    idx.into_iter()
        .flat_map(|a| (0..alg.m()).map(move |i| (a.clone(), i)))
        .collect()
}

/// Label such as `x1^2 x2 d1`; the constant field `d1` has no monomial part.
pub fn witt_label(a: &MultiIndex, i: usize) -> String {
    if a.is_zero() {
        format!("d{}", i + 1)
    } else {
        format!("{a} d{}", i + 1)
    }
}

/// `W(m;n)` over GF(p) with `dim = m p^{|n|}`.
pub fn witt_algebra(m: usize, n: &[u32], p: u32) -> Result<LieAlgebraFp> {
    if m == 0 || n.len() != m {
        return Err(Error::InvalidParameters(format!(
            "W(m;n) needs m >= 1 and n of length m (got m={m}, n={n:?})"
        )));
    }
    let alg = DividedPowers::new(p, n)?;
    let basis = witt_basis(&alg);
    let f = alg.field();
    let position: BTreeMap<(Vec<u32>, usize), usize> = basis
        .iter()
        .enumerate()
        .map(|(k, (a, i))| ((a.exps().to_vec(), *i), k))
        .collect();
    let labels = basis.iter().map(|(a, i)| witt_label(a, *i)).collect();
    let mut b = StructureBuilder::new(f, labels);
    for (s, (a, i)) in basis.iter().enumerate() {
        let x = WittElement::monomial(a.clone(), *i);
        for (t, (c, j)) in basis.iter().enumerate().skip(s + 1) {
            let y = WittElement::monomial(c.clone(), *j);
            for ((d, k), &v) in x.bracket(&y, &alg)?.terms() {
                b.add(s, t, position[&(d.exps().to_vec(), *k)], v);
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(p: u32, n: &[u32]) -> DividedPowers {
        DividedPowers::new(p, n).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let a = o(3, &[2]);
        let x1 = a.index(&[1]).unwrap();
        assert_eq!(a.multiply(&x1, &x1).unwrap(), Some((2, a.index(&[2]).unwrap())));
        let u = a.unit();
        let x5 = a.index(&[5]).unwrap();
        assert_eq!(a.multiply(&x5, &u).unwrap(), Some((1, x5.clone())));
        let b = o(3, &[1]);
        let y2 = b.index(&[2]).unwrap();
        assert_eq!(b.multiply(&y2, &y2).unwrap(), None);
        assert_eq!(a.multiply(&x1, &y2), Err(Error::BoundsMismatch));
    }

    #[test]
    fn partial_examples() {
        let a = o(3, &[1, 1]);
        let x = a.index(&[2, 0]).unwrap();
        assert_eq!(a.partial(0, &x).unwrap(), Some(a.index(&[1, 0]).unwrap()));
        assert_eq!(a.partial(1, &x).unwrap(), None);
        assert_eq!(a.partial(0, &a.unit()).unwrap(), None);
    }

    #[test]
    fn indices_follow_rank() {
        let a = o(3, &[1, 2]);
        let idx = a.indices();
        assert_eq!(idx.len(), 27);
        for (k, i) in idx.iter().enumerate() {
            assert_eq!(a.rank(i), k);
        }
        assert_eq!(idx[1].exps(), &[1, 0]);
        assert_eq!(idx[3].exps(), &[0, 1]);
        assert_eq!(idx[26], a.top());
        assert!(a.try_index(&[-1, 0]).is_none());
        assert!(a.try_index(&[0, 9]).is_none());
    }

    #[test]
    fn witt_dimensions() {
        assert_eq!(witt_algebra(1, &[1], 3).unwrap().dim(), 3);
        assert_eq!(witt_algebra(2, &[1, 1], 3).unwrap().dim(), 18);
        assert!(witt_algebra(2, &[1], 3).is_err());
        assert!(witt_algebra(1, &[0], 3).is_err());
    }

    #[test]
    fn witt_small_bracket() {
        let w = witt_algebra(1, &[1], 3).unwrap();
        // basis: d1, x1 d1, x1^2 d1
        assert_eq!(w.labels(), &["d1", "x1 d1", "x1^2 d1"]);
        assert_eq!(w.bracket_basis(0, 1), vec![(0, 1)]);
        assert!(w.validate_lie().is_ok());
    }

    #[test]
    fn monomial_display() {
        let a = o(3, &[2, 2]);
        assert_eq!(a.index(&[2, 1]).unwrap().to_string(), "x1^2 x2");
        assert_eq!(a.unit().to_string(), "1");
    }
}
