//! Subspaces of GF(p)^n held in reduced row-echelon form.

use std::collections::HashMap;

use super::echelon::{partition_from, Echelon, ResourceGuard, Scratch, StreamingNullspace};
use super::field::{PrimeField, Residue};
use super::sparse::{self, Entry, SparseVec};
use crate::error::{Error, Result};

/// A subspace of `GF(p)^ambient`.
///
/// The basis is the reduced row-echelon form of the span: rows are sorted by
/// pivot column, every pivot is 1, and pivot columns are zero in all other rows.
/// Two subspaces are equal exactly when their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Self {
            field,
            ambient,
            rows: (0..ambient).map(|c| vec![(c, 1)]).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    /// Trusts the caller that `rows` is already a reduced echelon basis.
    pub(crate) fn from_rref_rows(field: PrimeField, ambient: usize, rows: Vec<SparseVec>) -> Self {
        let pivots = rows.iter().map(|r| r[0].0).collect();
        let s = Self {
            field,
            ambient,
            rows,
            pivots,
        };
        debug_assert!(s.check_invariants());
        s
    }

    /// Span of arbitrary (sparse) vectors.
    pub fn span<I>(field: PrimeField, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator,
        I::Item: AsRef<[Entry]>,
    {
        let mut ech = Echelon::new(field, ambient);
        let mut scratch = Scratch::new(ambient);
        for v in vectors {
            if ech.rank() == ambient {
                break;
            }
            ech.push(v.as_ref(), &mut scratch);
        }
        Self::from_rref_rows(field, ambient, ech.rref_rows())
    }

    /// Span of dense vectors.
    pub fn span_dense(field: PrimeField, ambient: usize, vectors: &[Vec<Residue>]) -> Self {
        Self::span(field, ambient, vectors.iter().map(|v| sparse::from_dense(v)))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_invariants(&self) -> bool {
        self.rows.iter().zip(&self.pivots).enumerate().all(|(r, (row, &p))| {
            !row.is_empty()
                && row[0] == (p, 1)
                && row.windows(2).all(|w| w[0].0 < w[1].0)
                && row.iter().all(|e| e.1 != 0 && e.0 < self.ambient)
                && self
                    .pivots
                    .iter()
                    .enumerate()
                    .all(|(r2, &q)| r2 == r || sparse::get(row, q) == 0)
        }) && self.pivots.windows(2).all(|w| w[0] < w[1])
    }

    /// `v - sum v[pivot_r] * row_r`: the representative of `v` that vanishes on
    /// every pivot column.
    pub fn reduce(&self, v: &[Entry]) -> SparseVec {
        let f = self.field;
        let mut terms: Vec<Entry> = v.to_vec();
        for &(c, x) in v {
            if let Ok(r) = self.pivots.binary_search(&c) {
                let g = f.neg(x);
                terms.extend(self.rows[r].iter().map(|&(cc, y)| (cc, f.mul(g, y))));
            }
        }
        sparse::normalize(f, terms)
    }

    pub fn contains(&self, v: &[Entry]) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_dense(&self, v: &[Residue]) -> bool {
        self.contains(&sparse::from_dense(v))
    }

    /// Coordinates of `v` with respect to the echelon basis.
    pub fn coordinates(&self, v: &[Entry]) -> Result<Vec<Residue>> {
        if !self.contains(v) {
            return Err(Error::NotInSubspace);
        }
        Ok(self.coordinates_unchecked(v))
    }

    /// Coordinates read off the pivot columns, without a membership check.
    pub fn coordinates_unchecked(&self, v: &[Entry]) -> Vec<Residue> {
        let mut out = vec![0; self.dim()];
        for &(c, x) in v {
            if let Ok(r) = self.pivots.binary_search(&c) {
                out[r] = x;
            }
        }
        out
    }

    /// `sum coeffs[r] * row_r`.
    pub fn combine(&self, coeffs: &[Residue]) -> SparseVec {
        let f = self.field;
        let mut terms = Vec::new();
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c != 0 {
                terms.extend(row.iter().map(|&(cc, y)| (cc, f.mul(c, y))));
            }
        }
        sparse::normalize(f, terms)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Self::span(
            self.field,
            self.ambient,
            self.rows.iter().chain(other.rows.iter()),
        ))
    }

    /// Intersection via the nullspace of `[U^T | -V^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let f = self.field;
        let du = self.dim();
        let mut by_coord: HashMap<usize, Vec<Entry>> = HashMap::new();
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, x) in row {
                by_coord.entry(c).or_default().push((r, x));
            }
        }
        for (s, row) in other.rows.iter().enumerate() {
            for &(c, x) in row {
                by_coord.entry(c).or_default().push((du + s, f.neg(x)));
            }
        }
        let mut coords: Vec<usize> = by_coord.keys().copied().collect();
        coords.sort_unstable();
        let eqs: Vec<&Vec<Entry>> = coords.iter().map(|c| &by_coord[c]).collect();
        let unknowns = du + other.dim();
        let part = partition_from(unknowns, |sink| eqs.iter().for_each(|e| sink(e)));
        let mut solver = StreamingNullspace::new(f, &part, ResourceGuard::default());
        for e in &eqs {
            solver.push(e).expect("no resource guard");
        }
        let null = solver.finish();
        let vectors = null.rows().iter().map(|n| {
            let coeffs: Vec<Residue> = (0..du).map(|r| sparse::get(n, r)).collect();
            self.combine(&coeffs)
        });
        Ok(Self::span(f, self.ambient, vectors.collect::<Vec<_>>()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// Complement of `self` inside `outer`: the vectors of `outer` that vanish
    /// on the pivot columns of `self`. This is the unique such complement, so the
    /// choice is deterministic.
    pub fn complement_in(&self, outer: &Subspace) -> Result<Subspace> {
        self.check_ambient(outer)?;
        if !self.is_subspace_of(outer) {
            return Err(Error::NotContained);
        }
        let reduced: Vec<SparseVec> = outer.rows.iter().map(|r| self.reduce(r)).collect();
        let w = Self::span(self.field, self.ambient, reduced.iter().filter(|r| !r.is_empty()));
        debug_assert_eq!(w.dim() + self.dim(), outer.dim());
        Ok(w)
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Residue>> {
        self.rows
            .iter()
            .map(|r| sparse::to_dense(r, self.ambient))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn intersect_of_axes_is_zero() {
        let f = f3();
        let u = Subspace::span_dense(f, 2, &[vec![1, 0]]);
        let v = Subspace::span_dense(f, 2, &[vec![0, 1]]);
        assert!(u.intersect(&v).unwrap().is_zero());
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn complement_follows_pivot_free_rule() {
        let f = f3();
        let u = Subspace::span_dense(f, 2, &[vec![1, 0]]);
        let full = Subspace::full(f, 2);
        let w = u.complement_in(&full).unwrap();
        assert_eq!(w, Subspace::span_dense(f, 2, &[vec![0, 1]]));
        // the line through (1,1) also gets the second axis
        let u = Subspace::span_dense(f, 2, &[vec![1, 1]]);
        assert_eq!(u.complement_in(&full).unwrap(), w);
    }

    #[test]
    fn complement_requires_containment() {
        let f = f3();
        let u = Subspace::span_dense(f, 3, &[vec![1, 0, 0]]);
        let v = Subspace::span_dense(f, 3, &[vec![0, 1, 0]]);
        assert_eq!(u.complement_in(&v), Err(Error::NotContained));
        let w = Subspace::zero(f, 2);
        assert!(matches!(u.sum(&w), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn coordinates_round_trip() {
        let f = PrimeField::new(5).unwrap();
        let s = Subspace::span_dense(f, 4, &[vec![1, 2, 0, 3], vec![0, 1, 1, 1]]);
        let v = s.combine(&[3, 4]);
        assert_eq!(s.coordinates(&v).unwrap(), vec![3, 4]);
        assert_eq!(s.coordinates(&[(3, 1)]), Err(Error::NotInSubspace));
    }
}
