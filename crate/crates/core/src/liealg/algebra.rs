use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{sparse, Entry, FpMatrix, PrimeField, Residue, SparseVec, Subspace};

/// Dense coefficient vector of a Lie algebra element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieVector(Vec<Residue>);

impl LieVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Self(v)
    }

    pub fn from_coeffs(coeffs: Vec<Residue>) -> Self {
        Self(coeffs)
    }

    pub fn from_sparse(dim: usize, v: &[Entry]) -> Self {
        Self(sparse::to_dense(v, dim))
    }

    pub fn coeffs(&self) -> &[Residue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn to_sparse(&self) -> SparseVec {
        sparse::from_dense(&self.0)
    }
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// A Lie algebra over GF(p) given by structure constants in a fixed basis.
///
/// Only `[e_i, e_j]` with `i < j` is stored; `[e_j, e_i]` and `[e_i, e_i] = 0`
/// follow from antisymmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraFp {
    field: PrimeField,
    labels: Vec<String>,
    table: Vec<SparseVec>,
}

/// Collects structure constants before building a [`LieAlgebraFp`].
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    field: PrimeField,
    labels: Vec<String>,
    terms: Vec<Vec<Entry>>,
}

impl StructureBuilder {
    pub fn new(field: PrimeField, labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            field,
            labels,
            terms: vec![Vec::new(); n * n.saturating_sub(1) / 2],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Adds `c * e_k` to `[e_i, e_j]` (and the antisymmetric partner).
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: Residue) {
        let n = self.dim();
        assert!(i < n && j < n && k < n, "basis index out of range");
        let c = c % self.field.p();
        if i == j || c == 0 {
            return;
        }
        if i < j {
            self.terms[pair_index(i, j)].push((k, c));
        } else {
            self.terms[pair_index(j, i)].push((k, self.field.neg(c)));
        }
    }

    pub fn add_signed(&mut self, i: usize, j: usize, k: usize, c: i64) {
        let c = self.field.from_i64(c);
        self.add(i, j, k, c);
    }

    pub fn build(self) -> Result<LieAlgebraFp> {
        if self.labels.is_empty() {
            return Err(Error::InvalidParameters("a Lie algebra must have dimension at least 1".into()));
        }
        let mut seen = HashSet::new();
        for l in &self.labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidParameters(format!("duplicate basis label {l:?}")));
            }
        }
        let field = self.field;
        let table = self.terms.into_iter().map(|t| sparse::normalize(field, t)).collect();
        Ok(LieAlgebraFp {
            field,
            labels: self.labels,
            table,
        })
    }
}

/// A basis triple on which the Jacobi identity fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub residual: SparseVec,
}

impl LieAlgebraFp {
    pub fn builder(field: PrimeField, labels: Vec<String>) -> StructureBuilder {
        StructureBuilder::new(field, labels)
    }

    /// The abelian algebra `F^dim`.
    pub fn abelian(field: PrimeField, dim: usize) -> Result<Self> {
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        StructureBuilder::new(field, labels).build()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u8 {
        self.field.p()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[e_i, e_j]` as a stored slice and a sign flag (`true` = negate).
    #[inline]
    pub fn bracket_terms(&self, i: usize, j: usize) -> (bool, &[Entry]) {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => (false, &self.table[pair_index(i, j)]),
            Greater => (true, &self.table[pair_index(j, i)]),
            Equal => (false, &[]),
        }
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        let (neg, terms) = self.bracket_terms(i, j);
        if neg {
            terms.iter().map(|&(k, c)| (k, self.field.neg(c))).collect()
        } else {
            terms.to_vec()
        }
    }

    /// Stored brackets with `i < j` that are nonzero.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &[Entry])> + '_ {
        (1..self.dim()).flat_map(move |j| {
            (0..j).filter_map(move |i| {
                let t = &self.table[pair_index(i, j)];
                (!t.is_empty()).then_some((i, j, t.as_slice()))
            })
        })
    }

    /// Equal structure constants over the same field, ignoring labels.
    pub fn same_structure(&self, other: &LieAlgebraFp) -> bool {
        self.field == other.field && self.table == other.table && self.dim() == other.dim()
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(Vec::is_empty)
    }

    /// Bilinear bracket of sparse vectors.
    pub fn bracket_sparse(&self, x: &[Entry], y: &[Entry]) -> SparseVec {
        let f = self.field;
        let mut terms = Vec::new();
        for &(i, a) in x {
            for &(j, b) in y {
                let (neg, t) = self.bracket_terms(i, j);
                if t.is_empty() {
                    continue;
                }
                let ab = f.mul(a, b);
                let ab = if neg { f.neg(ab) } else { ab };
                terms.extend(t.iter().map(|&(k, c)| (k, f.mul(ab, c))));
            }
        }
        sparse::normalize(f, terms)
    }

    fn check_len(&self, v: &LieVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &LieVector, y: &LieVector) -> Result<LieVector> {
        self.check_len(x)?;
        self.check_len(y)?;
        let v = self.bracket_sparse(&x.to_sparse(), &y.to_sparse());
        Ok(LieVector::from_sparse(self.dim(), &v))
    }

    /// Matrix of `y -> [x, y]`; column `k` is `[x, e_k]`.
    pub fn adjoint_matrix(&self, x: &LieVector) -> Result<FpMatrix> {
        self.check_len(x)?;
        Ok(self.adjoint_sparse(&x.to_sparse()))
    }

    pub fn adjoint_sparse(&self, x: &[Entry]) -> FpMatrix {
        let cols: Vec<SparseVec> = (0..self.dim())
            .map(|k| self.bracket_sparse(x, &[(k, 1)]))
            .collect();
        FpMatrix::from_columns(self.field, self.dim(), &cols)
    }

    /// `ad(e_i)`.
    pub fn ad_basis(&self, i: usize) -> FpMatrix {
        self.adjoint_sparse(&[(i, 1)])
    }

    /// For every `j`, the list of `(t, k, c)` with `[e_t, e_j] = ... + c e_k + ...`.
    pub fn right_multiplication_lists(&self) -> Vec<Vec<(u32, u32, Residue)>> {
        let f = self.field;
        let mut lists = vec![Vec::new(); self.dim()];
        for (i, j, terms) in self.nonzero_brackets() {
            for &(k, c) in terms {
                // [e_i, e_j] = c e_k ; [e_j, e_i] = -c e_k
                lists[j].push((i as u32, k as u32, c));
                lists[i].push((j as u32, k as u32, f.neg(c)));
            }
        }
        lists
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k`.
    pub fn validate_lie(&self) -> std::result::Result<(), Vec<JacobiViolation>> {
        let v = self.jacobi_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub fn jacobi_violations(&self) -> Vec<JacobiViolation> {
        let n = self.dim();
        let f = self.field;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket_basis(i, j);
                for k in j + 1..n {
                    let jk = self.bracket_basis(j, k);
                    let ki = self.bracket_basis(k, i);
                    let mut terms = self.bracket_sparse(&ij, &[(k, 1)]);
                    terms.extend(self.bracket_sparse(&jk, &[(i, 1)]));
                    terms.extend(self.bracket_sparse(&ki, &[(j, 1)]));
                    let residual = sparse::normalize(f, terms);
                    if !residual.is_empty() {
                        out.push(JacobiViolation {
                            triple: (i, j, k),
                            residual,
                        });
                    }
                }
            }
        }
        out
    }

    /// Fails with the first violating triple if the Jacobi identity does not hold.
    pub fn ensure_lie(&self) -> Result<()> {
        let v = self.jacobi_violations();
        match v.first() {
            None => Ok(()),
            Some(first) => {
                let (i, j, k) = first.triple;
                Err(Error::JacobiViolation {
                    count: v.len(),
                    i,
                    j,
                    k,
                })
            }
        }
    }

    /// Algebra in the reordered basis `f_a = e_{perm[a]}`.
    pub fn permuted(&self, perm: &[usize]) -> Result<LieAlgebraFp> {
        let n = self.dim();
        let mut inv = vec![usize::MAX; n];
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        for (a, &old) in perm.iter().enumerate() {
            if old >= n || inv[old] != usize::MAX {
                return Err(Error::InvalidParameters("not a permutation".into()));
            }
            inv[old] = a;
        }
        let labels = perm.iter().map(|&o| self.labels[o].clone()).collect();
        let mut b = StructureBuilder::new(self.field, labels);
        for (i, j, terms) in self.nonzero_brackets() {
            for &(k, c) in terms {
                b.add(inv[i], inv[j], inv[k], c);
            }
        }
        b.build()
    }

    /// Algebra in the basis `f_a = sum_k g[k][a] e_k` for invertible `g`.
    pub fn change_basis(&self, g: &FpMatrix) -> Result<LieAlgebraFp> {
        let n = self.dim();
        let ginv = g.inverse()?;
        let cols = g.columns();
        let labels = (0..n).map(|a| format!("f{}", a + 1)).collect();
        let mut b = StructureBuilder::new(self.field, labels);
        for a in 0..n {
            for c in a + 1..n {
                let br = self.bracket_sparse(&cols[a], &cols[c]);
                let dense = sparse::to_dense(&br, n);
                let coords = ginv.mul_vec(&dense)?;
                for (k, &v) in coords.iter().enumerate() {
                    b.add(a, c, k, v);
                }
            }
        }
        b.build()
    }

    /// Quotient by an ideal, on the basis vectors that are not pivot columns of
    /// the ideal. Returns the quotient and the retained original indices.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebraFp, Vec<usize>)> {
        if ideal.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: ideal.ambient_dim(),
            });
        }
        let pivots: HashSet<usize> = ideal.pivots().iter().copied().collect();
        let kept: Vec<usize> = (0..self.dim()).filter(|c| !pivots.contains(c)).collect();
        if kept.is_empty() {
            return Err(Error::DegenerateQuotient);
        }
        let mut new_index = vec![usize::MAX; self.dim()];
        for (a, &c) in kept.iter().enumerate() {
            new_index[c] = a;
        }
        let labels = kept.iter().map(|&c| self.labels[c].clone()).collect();
        let mut b = StructureBuilder::new(self.field, labels);
        for (a, &ca) in kept.iter().enumerate() {
            for (bb, &cb) in kept.iter().enumerate().skip(a + 1) {
                let v = ideal.reduce(&self.bracket_basis(ca, cb));
                for (k, c) in v {
                    b.add(a, bb, new_index[k], c);
                }
            }
        }
        Ok((b.build()?, kept))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heisenberg(p: u32) -> LieAlgebraFp {
        let f = PrimeField::new(p).unwrap();
        let mut b = StructureBuilder::new(f, vec!["e1".into(), "e2".into(), "e3".into()]);
        b.add(0, 1, 2, 1);
        b.build().unwrap()
    }

    #[test]
    fn antisymmetry_is_synthesized() {
        let h = heisenberg(3);
        assert_eq!(h.bracket_basis(0, 1), vec![(2, 1)]);
        assert_eq!(h.bracket_basis(1, 0), vec![(2, 2)]);
        assert!(h.bracket_basis(1, 1).is_empty());
        let x = LieVector::from_coeffs(vec![1, 2, 0]);
        assert!(h.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn zero_dimension_rejected() {
        let f = PrimeField::new(3).unwrap();
        assert!(StructureBuilder::new(f, vec![]).build().is_err());
        let dup = StructureBuilder::new(f, vec!["a".into(), "a".into()]);
        assert!(dup.build().is_err());
    }

    #[test]
    fn adjoint_of_zero_is_zero() {
        let h = heisenberg(5);
        assert!(h.adjoint_matrix(&LieVector::zero(3)).unwrap().is_zero());
        assert!(h.adjoint_matrix(&LieVector::zero(2)).is_err());
    }

    #[test]
    fn quotient_of_heisenberg_by_center() {
        let h = heisenberg(3);
        let z = Subspace::span_dense(h.field(), 3, &[vec![0, 0, 1]]);
        let (q, kept) = h.quotient(&z).unwrap();
        assert_eq!(kept, vec![0, 1]);
        assert!(q.is_abelian());
        let all = Subspace::full(h.field(), 3);
        assert_eq!(h.quotient(&all).unwrap_err(), Error::DegenerateQuotient);
    }

    #[test]
    fn permutation_preserves_brackets() {
        let h = heisenberg(3);
        let q = h.permuted(&[2, 0, 1]).unwrap();
        // f0 = e3, f1 = e1, f2 = e2: [f1, f2] = f0
        assert_eq!(q.bracket_basis(1, 2), vec![(0, 1)]);
        assert!(h.permuted(&[0, 0, 1]).is_err());
    }
}
