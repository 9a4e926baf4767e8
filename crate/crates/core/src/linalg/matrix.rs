//! Row-sparse matrices over GF(p).

use std::fmt;

use super::echelon::{partition_from, BlockPartition, ResourceGuard, StreamingNullspace};
use super::field::{PrimeField, Residue};
use super::sparse::{self, Entry, SparseVec};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// A `rows x cols` matrix stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    cols: usize,
    rows: Vec<SparseVec>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        Self {
            field,
            cols: n,
            rows: (0..n).map(|i| vec![(i, 1 % field.p())]).collect(),
        }
    }

    pub fn from_dense(field: PrimeField, data: &[Vec<Residue>]) -> Result<Self> {
        let cols = data.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(data.len());
        for r in data {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            let reduced: Vec<Residue> = r.iter().map(|&x| x % field.p()).collect();
            rows.push(sparse::from_dense(&reduced));
        }
        Ok(Self { field, cols, rows })
    }

    /// Accumulates `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets<I>(field: PrimeField, nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Residue)>,
    {
        let mut rows: Vec<Vec<Entry>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of range");
            rows[i].push((j, v));
        }
        let rows = rows.into_iter().map(|r| sparse::normalize(field, r)).collect();
        Self {
            field,
            cols: ncols,
            rows,
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(field: PrimeField, nrows: usize, columns: &[SparseVec]) -> Self {
        let triplets = columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)));
        Self::from_triplets(field, nrows, columns.len(), triplets)
    }

    /// Inverse of [`FpMatrix::flatten`].
    pub fn from_flat(field: PrimeField, nrows: usize, ncols: usize, flat: &[Entry]) -> Self {
        Self::from_triplets(field, nrows, ncols, flat.iter().map(|&(x, v)| (x / ncols, x % ncols, v)))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Entry] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Residue {
        sparse::get(&self.rows[i], j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Residue) {
        let v = v % self.field.p();
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(pos) if v == 0 => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = v,
            Err(pos) if v != 0 => row.insert(pos, (j, v)),
            Err(_) => {}
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn trace(&self) -> Residue {
        (0..self.nrows().min(self.cols)).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    /// Entries flattened to `row * ncols + col`, sorted.
    pub fn flatten(&self) -> SparseVec {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i * self.cols + j, v)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Residue>> {
        self.rows.iter().map(|r| sparse::to_dense(r, self.cols)).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (j, i, v)));
        Self::from_triplets(self.field, self.cols, self.nrows(), triplets)
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let v = sparse::get(r, j);
                (v != 0).then_some((i, v))
            })
            .collect()
    }

    /// All columns, computed in one pass.
    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                cols[j].push((i, v));
            }
        }
        cols
    }

    fn check_same_shape(&self, other: &FpMatrix) -> Result<()> {
        if self.nrows() != other.nrows() || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows() * self.cols,
                found: other.nrows() * other.cols,
            });
        }
        Ok(())
    }

    /// `self + f * other`.
    pub fn axpy(&self, f: Residue, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| sparse::axpy(self.field, a, f, b))
            .collect();
        Ok(Self {
            field: self.field,
            cols: self.cols,
            rows,
        })
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.axpy(1, other)
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.axpy(self.field.neg(1), other)
    }

    pub fn scale(&self, f: Residue) -> FpMatrix {
        Self {
            field: self.field,
            cols: self.cols,
            rows: self.rows.iter().map(|r| sparse::scale(self.field, r, f)).collect(),
        }
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let f = self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut terms = Vec::new();
                for &(k, a) in r {
                    terms.extend(other.rows[k].iter().map(|&(j, b)| (j, f.mul(a, b))));
                }
                sparse::normalize(f, terms)
            })
            .collect();
        Ok(Self {
            field: f,
            cols: other.cols,
            rows,
        })
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn mul_vec(&self, v: &[Residue]) -> Result<Vec<Residue>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = self.field;
        Ok(self
            .rows
            .iter()
            .map(|r| r.iter().fold(0, |acc, &(j, a)| f.add(acc, f.mul(a, v[j]))))
            .collect())
    }

    /// Reduced row-echelon form of the row space, and the rank.
    pub fn rref(&self) -> (Subspace, usize) {
        let s = Subspace::span(self.field, self.cols, &self.rows);
        let rank = s.dim();
        (s, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Right nullspace `{v : M v = 0}`.
    pub fn nullspace(&self) -> Subspace {
        let part = partition_from(self.cols, |sink| self.rows.iter().for_each(|r| sink(r)));
        self.nullspace_with(&part)
    }

    fn nullspace_with(&self, part: &BlockPartition) -> Subspace {
        let mut solver = StreamingNullspace::new(self.field, part, ResourceGuard::default());
        for r in &self.rows {
            solver.push(r).expect("unguarded solver");
        }
        solver.finish()
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        // rref of [M | I]; invertible iff the left block becomes I
        let aug: Vec<SparseVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.push((n + i, 1));
                row
            })
            .collect();
        let s = Subspace::span(self.field, 2 * n, &aug);
        if s.pivots().iter().copied().take(n).ne(0..n) || s.dim() != n {
            return Err(Error::Singular);
        }
        let rows = s
            .rows()
            .iter()
            .map(|r| r.iter().filter(|e| e.0 >= n).map(|&(c, v)| (c - n, v)).collect())
            .collect();
        Ok(Self {
            field: self.field,
            cols: n,
            rows,
        })
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = f3();
        assert_eq!(FpMatrix::zeros(f, 2, 2).rank(), 0);
        assert_eq!(FpMatrix::identity(f, 3).rank(), 3);
        let m = FpMatrix::from_dense(f, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        let f = f3();
        assert_eq!(FpMatrix::zeros(f, 2, 2).nullspace().dim(), 2);
        assert_eq!(FpMatrix::identity(f, 2).nullspace().dim(), 0);
        let m = FpMatrix::from_dense(f, &[vec![1, 2], vec![2, 1]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.to_dense_rows(), vec![vec![1, 1]]);
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(7).unwrap();
        let m = FpMatrix::from_dense(f, &[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 5]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(f, 3));
        let sing = FpMatrix::from_dense(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn set_and_get() {
        let f = f3();
        let mut m = FpMatrix::zeros(f, 2, 3);
        m.set(1, 2, 5);
        assert_eq!(m.get(1, 2), 2);
        m.set(1, 2, 0);
        assert!(m.is_zero());
    }

    #[test]
    fn flatten_round_trip() {
        let f = f3();
        let m = FpMatrix::from_dense(f, &[vec![0, 1, 2], vec![2, 0, 1]]).unwrap();
        assert_eq!(FpMatrix::from_flat(f, 2, 3, &m.flatten()), m);
        assert_eq!(m.transpose().transpose(), m);
    }
}
