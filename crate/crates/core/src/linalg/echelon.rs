//! Incremental reduced row-echelon forms and the block-streaming nullspace solver.
//!
//! Equations are pushed one at a time and folded into a running reduced
//! echelon form, so the full coefficient matrix never exists in memory.
//! Unknowns are first split into connected blocks (two unknowns are linked when
//! they occur in a common equation); every block is eliminated on its own.
//! A reduced echelon form is unique for its row space, so the result does not
//! depend on the order in which equations arrive or on how the stream is
//! sharded across threads.

use std::time::Instant;

use super::field::{PrimeField, Residue};
use super::sparse::{Entry, SparseVec};
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// Blocks at most this wide keep dense rows; wider ones use sparse rows.
pub const DENSE_WIDTH_LIMIT: usize = 512;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
enum Rows {
    Dense(Vec<Vec<Residue>>),
    Sparse(Vec<Vec<(u32, Residue)>>),
}

/// Work buffers shared by all blocks of one solver.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    buf: Vec<Residue>,
    touched: Vec<u32>,
    mark: Vec<bool>,
}

impl Scratch {
    pub fn new(width: usize) -> Self {
        Self {
            buf: vec![0; width],
            touched: Vec::new(),
            mark: vec![false; width],
        }
    }

    fn ensure(&mut self, width: usize) {
        if self.buf.len() < width {
            self.buf.resize(width, 0);
            self.mark.resize(width, false);
        }
    }
}

/// A reduced row-echelon form that grows one row at a time.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Rows,
    row_pivot: Vec<u32>,
    pivot_row: Vec<u32>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        let rows = if width <= DENSE_WIDTH_LIMIT {
            Rows::Dense(Vec::new())
        } else {
            Rows::Sparse(Vec::new())
        };
        Self {
            field,
            width,
            rows,
            row_pivot: Vec::new(),
            pivot_row: vec![NONE; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.row_pivot.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    /// Approximate heap footprint in bytes.
    pub fn bytes(&self) -> usize {
        let rows = match &self.rows {
            Rows::Dense(r) => r.len() * self.width,
            Rows::Sparse(r) => r.iter().map(|x| x.len() * 8).sum(),
        };
        rows + self.pivot_row.len() * 4 + self.row_pivot.len() * 4
    }

    /// Folds one equation (local coordinates, duplicates allowed) into the form.
    /// Returns whether the rank grew.
    pub fn push(&mut self, terms: &[Entry], scratch: &mut Scratch) -> bool {
        scratch.ensure(self.width);
        match self.rows {
            Rows::Dense(_) => self.push_dense(terms, scratch),
            Rows::Sparse(_) => self.push_sparse(terms, scratch),
        }
    }

    fn push_dense(&mut self, terms: &[Entry], scratch: &mut Scratch) -> bool {
        let f = self.field;
        let w = self.width;
        let Rows::Dense(rows) = &mut self.rows else {
            unreachable!()
        };
        let buf = &mut scratch.buf[..w];
        for &(c, v) in terms {
            buf[c] = f.add(buf[c], v % f.p());
        }
        // Rows vanish on every other pivot, so only the pivots hit by the
        // original terms need eliminating.
        for &(c, _) in terms {
            let r = self.pivot_row[c];
            if r == NONE || buf[c] == 0 {
                continue;
            }
            let t = f.scale_table(f.neg(buf[c]));
            for (x, &y) in buf.iter_mut().zip(rows[r as usize].iter()) {
                if y != 0 {
                    *x = f.add(*x, t[y as usize]);
                }
            }
        }
        let Some(lead) = buf.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(buf[lead]).expect("nonzero lead");
        let t = f.scale_table(inv);
        let new_row: Vec<Residue> = buf.iter().map(|&x| t[x as usize]).collect();
        buf.fill(0);
        for row in rows.iter_mut() {
            let g = row[lead];
            if g == 0 {
                continue;
            }
            let t = f.scale_table(f.neg(g));
            for (x, &y) in row.iter_mut().zip(new_row.iter()) {
                if y != 0 {
                    *x = f.add(*x, t[y as usize]);
                }
            }
        }
        self.pivot_row[lead] = rows.len() as u32;
        self.row_pivot.push(lead as u32);
        rows.push(new_row);
        true
    }

    fn push_sparse(&mut self, terms: &[Entry], scratch: &mut Scratch) -> bool {
        let f = self.field;
        let Rows::Sparse(rows) = &mut self.rows else {
            unreachable!()
        };
        let Scratch { buf, touched, mark } = scratch;
        touched.clear();
        for &(c, v) in terms {
            if !mark[c] {
                mark[c] = true;
                touched.push(c as u32);
            }
            buf[c] = f.add(buf[c], v % f.p());
        }
        let n_orig = touched.len();
        for idx in 0..n_orig {
            let c = touched[idx] as usize;
            let r = self.pivot_row[c];
            if r == NONE || buf[c] == 0 {
                continue;
            }
            let g = f.neg(buf[c]);
            for &(x, y) in &rows[r as usize] {
                let x = x as usize;
                if !mark[x] {
                    mark[x] = true;
                    touched.push(x as u32);
                }
                buf[x] = f.add(buf[x], f.mul(g, y));
            }
        }
        touched.sort_unstable();
        let mut new_row: Vec<(u32, Residue)> = Vec::new();
        for &c in touched.iter() {
            let c = c as usize;
            if buf[c] != 0 {
                new_row.push((c as u32, buf[c]));
            }
            buf[c] = 0;
            mark[c] = false;
        }
        if new_row.is_empty() {
            return false;
        }
        let lead = new_row[0].0;
        let inv = f.inv(new_row[0].1).expect("nonzero lead");
        for e in new_row.iter_mut() {
            e.1 = f.mul(e.1, inv);
        }
        for row in rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&lead, |e| e.0) {
                let g = f.neg(row[pos].1);
                *row = sparse_axpy_u32(f, row, g, &new_row);
            }
        }
        self.pivot_row[lead as usize] = rows.len() as u32;
        self.row_pivot.push(lead);
        rows.push(new_row);
        true
    }

    /// Rows sorted by pivot column, as sparse vectors.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<usize> = (0..self.rank()).collect();
        order.sort_unstable_by_key(|&r| self.row_pivot[r]);
        order.into_iter().map(|r| self.row_sparse(r)).collect()
    }

    fn row_sparse(&self, r: usize) -> SparseVec {
        match &self.rows {
            Rows::Dense(rows) => rows[r]
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(c, &v)| (c, v))
                .collect(),
            Rows::Sparse(rows) => rows[r].iter().map(|&(c, v)| (c as usize, v)).collect(),
        }
    }

    /// Reduced echelon basis of the solution space `{x : row . x = 0}`.
    pub fn nullspace_rows(&self, scratch: &mut Scratch) -> Vec<SparseVec> {
        let f = self.field;
        let mut out = Echelon::new(f, self.width);
        // column view of the non-pivot part
        let mut by_free: Vec<Vec<Entry>> = vec![Vec::new(); self.width];
        for r in 0..self.rank() {
            let pivot = self.row_pivot[r] as usize;
            for (c, v) in self.row_sparse(r) {
                if c != pivot {
                    by_free[c].push((pivot, f.neg(v)));
                }
            }
        }
        for (c, mut terms) in by_free.into_iter().enumerate() {
            if self.is_pivot(c) {
                continue;
            }
            terms.push((c, 1));
            out.push(&terms, scratch);
        }
        debug_assert_eq!(out.rank() + self.rank(), self.width);
        out.rref_rows()
    }
}

fn sparse_axpy_u32(
    f: PrimeField,
    a: &[(u32, Residue)],
    g: Residue,
    b: &[(u32, Residue)],
) -> Vec<(u32, Residue)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(g, b[j].1)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(g, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Union-find over unknowns, fed with equation supports.
#[derive(Debug, Clone)]
pub struct PartitionBuilder {
    parent: Vec<u32>,
}

impl PartitionBuilder {
    pub fn new(unknowns: usize) -> Self {
        Self {
            parent: (0..unknowns as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn link(&mut self, terms: &[Entry]) {
        let Some(&(first, _)) = terms.first() else {
            return;
        };
        let mut root = self.find(first as u32);
        for &(c, _) in &terms[1..] {
            let other = self.find(c as u32);
            if other != root {
                // keep the smaller index as root
                let (lo, hi) = if other < root { (other, root) } else { (root, other) };
                self.parent[hi as usize] = lo;
                root = lo;
            }
        }
    }

    pub fn finish(mut self) -> BlockPartition {
        let n = self.parent.len();
        let mut block_of = vec![NONE; n];
        let mut local = vec![0u32; n];
        let mut members: Vec<Vec<u32>> = Vec::new();
        let mut block_of_root = vec![NONE; n];
        for x in 0..n as u32 {
            let root = self.find(x) as usize;
            if block_of_root[root] == NONE {
                block_of_root[root] = members.len() as u32;
                members.push(Vec::new());
            }
            let b = block_of_root[root];
            block_of[x as usize] = b;
            local[x as usize] = members[b as usize].len() as u32;
            members[b as usize].push(x);
        }
        BlockPartition {
            block_of,
            local,
            members,
        }
    }
}

/// Assignment of unknowns to independent elimination blocks.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    block_of: Vec<u32>,
    local: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl BlockPartition {
    /// A single block holding every unknown.
    pub fn single(unknowns: usize) -> Self {
        Self {
            block_of: vec![0; unknowns],
            local: (0..unknowns as u32).collect(),
            members: vec![(0..unknowns as u32).collect()],
        }
    }

    pub fn unknowns(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.members.len()
    }

    pub fn largest_block(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Memory and wall-clock ceilings for long eliminations.
#[derive(Debug, Clone, Copy, Default)]
pub struct ResourceGuard {
    pub max_bytes: Option<usize>,
    pub deadline: Option<Instant>,
}

/// Nullspace solver fed with a stream of equations.
#[derive(Debug, Clone)]
pub struct StreamingNullspace<'a> {
    field: PrimeField,
    partition: &'a BlockPartition,
    blocks: Vec<Option<Echelon>>,
    scratch: Scratch,
    local_terms: Vec<Entry>,
    bytes: usize,
    peak_bytes: usize,
    pushes: u64,
    guard: ResourceGuard,
}

impl<'a> StreamingNullspace<'a> {
    pub fn new(field: PrimeField, partition: &'a BlockPartition, guard: ResourceGuard) -> Self {
        Self {
            field,
            partition,
            blocks: vec![None; partition.block_count()],
            scratch: Scratch::new(partition.largest_block().max(1)),
            local_terms: Vec::new(),
            bytes: 0,
            peak_bytes: 0,
            pushes: 0,
            guard,
        }
    }

    /// Rank of the equations seen so far.
    pub fn rank(&self) -> usize {
        self.blocks.iter().flatten().map(Echelon::rank).sum()
    }

    pub fn bytes(&self) -> usize {
        self.bytes
    }

    pub fn peak_bytes(&self) -> usize {
        self.peak_bytes
    }

    /// Adds one equation `sum c_i x_i = 0` over global unknown indices.
    pub fn push(&mut self, terms: &[Entry]) -> Result<()> {
        let Some(&(first, _)) = terms.first() else {
            return Ok(());
        };
        let block = self.partition.block_of[first] as usize;
        self.local_terms.clear();
        for &(c, v) in terms {
            debug_assert_eq!(self.partition.block_of[c] as usize, block);
            self.local_terms.push((self.partition.local[c] as usize, v));
        }
        self.push_local(block)?;
        self.pushes += 1;
        if self.pushes.is_multiple_of(8192) {
            if let Some(deadline) = self.guard.deadline {
                if Instant::now() > deadline {
                    return Err(Error::ResourceLimit("time ceiling reached".into()));
                }
            }
        }
        Ok(())
    }

    fn push_local(&mut self, block: usize) -> Result<()> {
        let width = self.partition.members[block].len();
        let ech = self.blocks[block].get_or_insert_with(|| Echelon::new(self.field, width));
        let before = ech.bytes();
        if ech.push(&self.local_terms, &mut self.scratch) {
            self.bytes = self.bytes + ech.bytes() - before;
            self.peak_bytes = self.peak_bytes.max(self.bytes);
            if let Some(limit) = self.guard.max_bytes {
                if self.bytes > limit {
                    return Err(Error::ResourceLimit(format!(
                        "memory ceiling of {limit} bytes reached"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Folds the rows gathered by another shard into this one.
    pub fn merge(&mut self, other: StreamingNullspace<'_>) -> Result<()> {
        for (block, ech) in other.blocks.into_iter().enumerate() {
            let Some(ech) = ech else { continue };
            if self.blocks[block].is_none() {
                self.bytes += ech.bytes();
                self.peak_bytes = self.peak_bytes.max(self.bytes);
                self.blocks[block] = Some(ech);
                continue;
            }
            for row in ech.rref_rows() {
                self.local_terms = row;
                self.push_local(block)?;
            }
        }
        self.peak_bytes = self.peak_bytes.max(other.peak_bytes);
        Ok(())
    }

    /// Reduced echelon basis of the common solution space, in global coordinates.
    pub fn finish(mut self) -> Subspace {
        let mut rows: Vec<SparseVec> = Vec::new();
        for (block, members) in self.partition.members.iter().enumerate() {
            let local_rows = match &self.blocks[block] {
                Some(ech) => ech.nullspace_rows(&mut self.scratch),
                None => (0..members.len()).map(|c| vec![(c, 1)]).collect(),
            };
            for r in local_rows {
                rows.push(r.into_iter().map(|(c, v)| (members[c] as usize, v)).collect());
            }
        }
        // blocks have disjoint supports, so sorting by leading column keeps RREF
        rows.sort_unstable_by_key(|r| r[0].0);
        Subspace::from_rref_rows(self.field, self.partition.unknowns(), rows)
    }
}

/// Builds the block partition for a replayable equation stream.
pub fn partition_from<F>(unknowns: usize, mut stream: F) -> BlockPartition
where
    F: FnMut(&mut dyn FnMut(&[Entry])),
{
    let mut builder = PartitionBuilder::new(unknowns);
    stream(&mut |eq: &[Entry]| builder.link(eq));
    builder.finish()
}

/// Solution space of a replayable equation stream: one pass to partition the
/// unknowns, one pass to eliminate.
pub fn solve_stream<F>(
    field: PrimeField,
    unknowns: usize,
    guard: ResourceGuard,
    mut stream: F,
) -> Result<Subspace>
where
    F: FnMut(&mut dyn FnMut(&[Entry])),
{
    let part = partition_from(unknowns, &mut stream);
    let mut solver = StreamingNullspace::new(field, &part, guard);
    let mut failure = None;
    stream(&mut |eq: &[Entry]| {
        if failure.is_none() {
            if let Err(e) = solver.push(eq) {
                failure = Some(e);
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(solver.finish()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn dense_and_sparse_agree() {
        let f = PrimeField::new(5).unwrap();
        let eqs: Vec<Vec<Entry>> = vec![
            vec![(0, 1), (3, 2)],
            vec![(1, 4), (3, 1), (0, 2)],
            vec![(2, 3)],
            vec![(0, 3), (1, 1), (3, 1)],
        ];
        let mut dense = Echelon::new(f, 4);
        let mut sparse = Echelon::new(f, 4);
        sparse.rows = Rows::Sparse(Vec::new());
        let mut s = Scratch::new(4);
        for e in &eqs {
            assert_eq!(dense.push(e, &mut s), sparse.push(e, &mut s));
        }
        assert_eq!(dense.rref_rows(), sparse.rref_rows());
        assert_eq!(dense.nullspace_rows(&mut s), sparse.nullspace_rows(&mut s));
    }

    #[test]
    fn streaming_matches_single_block() {
        let f = f3();
        let eqs: Vec<Vec<Entry>> = vec![vec![(0, 1), (1, 1)], vec![(2, 1), (3, 2)], vec![(4, 2)]];
        let part = partition_from(6, |sink| eqs.iter().for_each(|e| sink(e)));
        assert_eq!(part.block_count(), 4);
        let mut s = StreamingNullspace::new(f, &part, ResourceGuard::default());
        for e in &eqs {
            s.push(e).unwrap();
        }
        let ns = s.finish();
        let single = BlockPartition::single(6);
        let mut t = StreamingNullspace::new(f, &single, ResourceGuard::default());
        for e in &eqs {
            t.push(e).unwrap();
        }
        assert_eq!(ns, t.finish());
        assert_eq!(ns.dim(), 3);
    }

    #[test]
    fn memory_ceiling_is_reported() {
        let f = f3();
        let single = BlockPartition::single(600);
        let guard = ResourceGuard {
            max_bytes: Some(1000),
            deadline: None,
        };
        let mut s = StreamingNullspace::new(f, &single, guard);
        let mut hit = false;
        for i in 0..600 {
            if s.push(&[(i, 1), ((i + 1) % 600, 1)]).is_err() {
                hit = true;
                break;
            }
        }
        assert!(hit);
    }
}
