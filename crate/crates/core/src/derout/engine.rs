use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraFp, StructureBuilder};
use crate::linalg::{
    partition_from, sparse, BlockPartition, Entry, FpMatrix, PrimeField, Residue, ResourceGuard,
    SparseVec, StreamingNullspace, Subspace,
};

/// Knobs for [`derivation_algebra_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub mem_limit: Option<usize>,
    pub time_limit: Option<Duration>,
}

/// Counters gathered while solving the Leibniz system.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub unknowns: usize,
    pub equations: u64,
    pub blocks: usize,
    pub largest_block: usize,
    pub peak_bytes: usize,
}

/// Right multiplication lists grouped by output index: for each `j`, entries
/// `(k, t, c)` with `[e_t, e_j] = ... + c e_k`, sorted by `k`.
fn sorted_lists(l: &LieAlgebraFp) -> Vec<Vec<(u32, u32, Residue)>> {
    l.right_multiplication_lists()
        .into_iter()
        .map(|v| {
            let mut v: Vec<_> = v.into_iter().map(|(t, k, c)| (k, t, c)).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

/// Emits the Leibniz equations of pair `(i, j)`, `i < j`. Unknown `M_{k,l}`
/// has index `k * dim + l`, and `D e_l = sum_k M_{k,l} e_k`.
fn pair_equations(
    l: &LieAlgebraFp,
    lists: &[Vec<(u32, u32, Residue)>],
    i: usize,
    j: usize,
    buf: &mut Vec<Entry>,
    sink: &mut dyn FnMut(&[Entry]),
) {
    let f = l.field();
    let n = l.dim();
    let (_, br) = l.bracket_terms(i, j);
    let (li, lj) = (&lists[i], &lists[j]);
    let (mut pi, mut pj) = (0, 0);
    let mut emit = |k: usize, si: &[(u32, u32, Residue)], sj: &[(u32, u32, Residue)], buf: &mut Vec<Entry>| {
        buf.clear();
        // D[e_i, e_j]
        buf.extend(br.iter().map(|&(s, c)| (k * n + s, c)));
        // - [D e_i, e_j]
        buf.extend(sj.iter().map(|&(_, t, c)| (t as usize * n + i, f.neg(c))));
        // - [e_i, D e_j] = + [D e_j, e_i]
        buf.extend(si.iter().map(|&(_, t, c)| (t as usize * n + j, c)));
        let eq = sparse::normalize(f, std::mem::take(buf));
        if !eq.is_empty() {
            sink(&eq);
        }
        *buf = eq;
    };
    let run = |v: &[(u32, u32, Residue)], p: usize| {
        let k = v[p].0;
        let mut e = p;
        while e < v.len() && v[e].0 == k {
            e += 1;
        }
        e
    };
    if br.is_empty() {
        while pi < li.len() || pj < lj.len() {
            let ki = li.get(pi).map_or(u32::MAX, |x| x.0);
            let kj = lj.get(pj).map_or(u32::MAX, |x| x.0);
            let k = ki.min(kj);
            let ei = if ki == k { run(li, pi) } else { pi };
            let ej = if kj == k { run(lj, pj) } else { pj };
            emit(k as usize, &li[pi..ei], &lj[pj..ej], buf);
            pi = ei;
            pj = ej;
        }
    } else {
        for k in 0..n {
            let ei = if li.get(pi).is_some_and(|x| x.0 as usize == k) { run(li, pi) } else { pi };
            let ej = if lj.get(pj).is_some_and(|x| x.0 as usize == k) { run(lj, pj) } else { pj };
            emit(k, &li[pi..ei], &lj[pj..ej], buf);
            pi = ei;
            pj = ej;
        }
    }
}

/// Splits pairs `(i, j)`, `i < j`, into contiguous ranges of `j` with similar
/// pair counts.
fn shard_ranges(dim: usize, shards: usize) -> Vec<std::ops::Range<usize>> {
    let total = dim * dim.saturating_sub(1) / 2;
    let per = total.div_ceil(shards.max(1)).max(1);
    let mut out = Vec::new();
    let mut start = 1;
    let mut acc = 0;
    for j in 1..dim {
        acc += j;
        if acc >= per {
            out.push(start..j + 1);
            start = j + 1;
            acc = 0;
        }
    }
    if start < dim {
        out.push(start..dim);
    }
    out
}

fn for_pairs_in(
    l: &LieAlgebraFp,
    lists: &[Vec<(u32, u32, Residue)>],
    js: std::ops::Range<usize>,
    sink: &mut dyn FnMut(&[Entry]),
) {
    let mut buf = Vec::new();
    for j in js {
        for i in 0..j {
            pair_equations(l, lists, i, j, &mut buf, sink);
        }
    }
}

/// Nullspace of the Leibniz system, as a subspace of `F^{dim^2}` in flattened
/// matrix coordinates.
pub(crate) fn solve_leibniz(l: &LieAlgebraFp, opts: &SolveOptions) -> Result<(Subspace, SolveStats)> {
    let n = l.dim();
    let unknowns = n * n;
    let lists = sorted_lists(l);
    let guard = ResourceGuard {
        max_bytes: opts.mem_limit,
        deadline: opts.time_limit.map(|t| Instant::now() + t),
    };
    let mut equations = 0u64;
    let part = partition_from(unknowns, |sink| {
        for_pairs_in(l, &lists, 1..n.max(1), &mut |eq| {
            equations += 1;
            sink(eq)
        })
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let ranges = if threads <= 1 {
        vec![1..n.max(1)]
    } else {
        shard_ranges(n, threads * 4)
    };
    let solved = pool.install(|| -> Result<StreamingNullspace<'_>> {
        let shards: Vec<Result<StreamingNullspace<'_>>> = ranges
            .into_par_iter()
            .map(|r| shard(l.field(), &part, guard, |sink| for_pairs_in(l, &lists, r.clone(), sink)))
            .collect();
        let mut it = shards.into_iter();
        let mut acc = match it.next() {
            Some(s) => s?,
            None => StreamingNullspace::new(l.field(), &part, guard),
        };
        for s in it {
            acc.merge(s?)?;
        }
        Ok(acc)
    })?;
    let stats = SolveStats {
        unknowns,
        equations,
        blocks: part.block_count(),
        largest_block: part.largest_block(),
        peak_bytes: solved.peak_bytes(),
    };
    Ok((solved.finish(), stats))
}

fn shard<'a, F>(
    field: PrimeField,
    part: &'a BlockPartition,
    guard: ResourceGuard,
    stream: F,
) -> Result<StreamingNullspace<'a>>
where
    F: FnOnce(&mut dyn FnMut(&[Entry])),
{
    let mut s = StreamingNullspace::new(field, part, guard);
    let mut failure = None;
    stream(&mut |eq| {
        if failure.is_none() {
            if let Err(e) = s.push(eq) {
                failure = Some(e);
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(s),
    }
}

/// Result of checking the Leibniz rule for a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeibnizCheck {
    Holds,
    /// First basis pair `(i, j)`, `i < j`, where the rule fails.
    FailsAt(usize, usize),
}

impl LeibnizCheck {
    pub fn holds(&self) -> bool {
        matches!(self, LeibnizCheck::Holds)
    }
}

/// Checks `M[e_i, e_j] = [M e_i, e_j] + [e_i, M e_j]` for all `i < j`.
pub fn is_derivation(l: &LieAlgebraFp, m: &FpMatrix) -> Result<LeibnizCheck> {
    let n = l.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    let f = l.field();
    let cols = m.columns();
    let apply = |v: &[Entry]| -> SparseVec {
        let mut terms = Vec::new();
        for &(s, c) in v {
            terms.extend(cols[s].iter().map(|&(k, x)| (k, f.mul(c, x))));
        }
        sparse::normalize(f, terms)
    };
    for j in 1..n {
        for i in 0..j {
            let lhs = apply(&l.bracket_basis(i, j));
            let mut rhs = l.bracket_sparse(&cols[i], &[(j, 1)]);
            rhs.extend(l.bracket_sparse(&[(i, 1)], &cols[j]));
            let rhs = sparse::normalize(f, rhs);
            if lhs != rhs {
                return Ok(LeibnizCheck::FailsAt(i, j));
            }
        }
    }
    Ok(LeibnizCheck::Holds)
}

/// `Der(L)` with `Inn(L)` inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationAlgebra {
    base: LieAlgebraFp,
    der: Subspace,
    inn_ambient: Subspace,
    inn: Subspace,
    stats: SolveStats,
}

pub fn derivation_algebra(l: &LieAlgebraFp) -> Result<DerivationAlgebra> {
    derivation_algebra_with(l, &SolveOptions::default())
}

pub fn derivation_algebra_with(l: &LieAlgebraFp, opts: &SolveOptions) -> Result<DerivationAlgebra> {
    let (der, stats) = solve_leibniz(l, opts)?;
    DerivationAlgebra::from_parts(l.clone(), der, stats)
}

impl DerivationAlgebra {
    /// Assembles the algebra from a precomputed basis (e.g. from the cache).
    pub fn from_parts(base: LieAlgebraFp, der: Subspace, stats: SolveStats) -> Result<Self> {
        let n = base.dim();
        if der.ambient_dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: der.ambient_dim(),
            });
        }
        let ads: Vec<_> = (0..n).map(|i| base.ad_basis(i).flatten()).collect();
        let inn_ambient = Subspace::span(base.field(), n * n, &ads);
        let mut coords = Vec::with_capacity(inn_ambient.dim());
        for r in inn_ambient.rows() {
            coords.push(sparse::from_dense(&der.coordinates(r)?));
        }
        let inn = Subspace::span(base.field(), der.dim(), &coords);
        Ok(Self {
            base,
            der,
            inn_ambient,
            inn,
            stats,
        })
    }

    pub fn base(&self) -> &LieAlgebraFp {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.der.dim()
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    /// Basis of `Der` in flattened matrix coordinates (`k * dim + l`).
    pub fn subspace(&self) -> &Subspace {
        &self.der
    }

    pub fn basis_map(&self, a: usize) -> FpMatrix {
        let n = self.base.dim();
        FpMatrix::from_flat(self.base.field(), n, n, &self.der.rows()[a])
    }

    pub fn basis_maps(&self) -> Vec<FpMatrix> {
        (0..self.dim()).map(|a| self.basis_map(a)).collect()
    }

    /// `Inn` in coordinates with respect to the `Der` basis.
    pub fn inner(&self) -> &Subspace {
        &self.inn
    }

    /// `Inn` in flattened matrix coordinates.
    pub fn inner_ambient(&self) -> &Subspace {
        &self.inn_ambient
    }

    /// Coordinates of a derivation in the `Der` basis.
    pub fn coordinates(&self, m: &FpMatrix) -> Result<Vec<Residue>> {
        self.der.coordinates(&m.flatten())
    }

    fn bracket_coords(&self, a: &FpMatrix, b: &FpMatrix) -> Result<Vec<Residue>> {
        self.coordinates(&a.commutator(b)?)
    }

    /// `Der` as a Lie algebra under the commutator, labelled `D1, D2, ...`.
    pub fn as_lie(&self) -> Result<LieAlgebraFp> {
        let maps = self.basis_maps();
        let labels = (1..=self.dim()).map(|a| format!("D{a}")).collect();
        let mut b = StructureBuilder::new(self.base.field(), labels);
        for x in 0..maps.len() {
            for y in x + 1..maps.len() {
                for (k, &c) in self.bracket_coords(&maps[x], &maps[y])?.iter().enumerate() {
                    b.add(x, y, k, c);
                }
            }
        }
        b.build()
    }

    /// `Out = Der / Inn` on the `Der` basis vectors that are not pivots of `Inn`.
    pub fn outer_algebra(&self) -> Result<OutAlgebra> {
        let full = Subspace::full(self.base.field(), self.dim());
        let complement = self.inn.complement_in(&full)?;
        let kept: Vec<usize> = complement.pivots().to_vec();
        let out = OutAlgebra {
            field: self.base.field(),
            der: self.der.clone(),
            inn: self.inn.clone(),
            kept,
            base_dim: self.base.dim(),
            as_lie: None,
        };
        out.with_structure()
    }
}

/// `Der(L) / Inn(L)` with induced brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutAlgebra {
    field: PrimeField,
    der: Subspace,
    inn: Subspace,
    kept: Vec<usize>,
    base_dim: usize,
    as_lie: Option<LieAlgebraFp>,
}

/// Complement choice recorded in reports.
pub const COMPLEMENT_RULE: &str = "der-basis-vectors-off-inn-pivots/1";

impl OutAlgebra {
    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Indices of the `Der` basis vectors representing the `Out` basis.
    pub fn representatives(&self) -> &[usize] {
        &self.kept
    }

    pub fn representative(&self, a: usize) -> FpMatrix {
        let n = self.base_dim;
        FpMatrix::from_flat(self.field, n, n, &self.der.rows()[self.kept[a]])
    }

    /// `Out` coordinates of a derivation; fails if `m` is not a derivation.
    pub fn project(&self, m: &FpMatrix) -> Result<Vec<Residue>> {
        let c = self.der.coordinates(&m.flatten())?;
        let reduced = sparse::to_dense(&self.inn.reduce(&sparse::from_dense(&c)), c.len());
        Ok(self.kept.iter().map(|&k| reduced[k]).collect())
    }

    pub fn is_inner(&self, m: &FpMatrix) -> Result<bool> {
        Ok(self.project(m)?.iter().all(|&x| x == 0))
    }

    /// Structure constants of `Out`, labelled `O1, O2, ...`. Empty when `Out = 0`.
    pub fn as_lie(&self) -> Option<&LieAlgebraFp> {
        self.as_lie.as_ref()
    }

    fn with_structure(mut self) -> Result<Self> {
        let q = self.dim();
        if q == 0 {
            return Ok(self);
        }
        let reps: Vec<FpMatrix> = (0..q).map(|a| self.representative(a)).collect();
        let labels = (1..=q).map(|a| format!("O{a}")).collect();
        let mut b = StructureBuilder::new(self.field, labels);
        for x in 0..q {
            for y in x + 1..q {
                let proj = self.project(&reps[x].commutator(&reps[y])?)?;
                for (k, &c) in proj.iter().enumerate() {
                    b.add(x, y, k, c);
                }
            }
        }
        self.as_lie = Some(b.build()?);
        Ok(self)
    }

    /// Structure constants of `Out` in the basis given by the images of
    /// `gens`, which must project onto a basis of `Out`.
    pub fn structure_in(&self, gens: &[(String, FpMatrix)]) -> Result<LieAlgebraFp> {
        let q = self.dim();
        if gens.len() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                found: gens.len(),
            });
        }
        let proj: Vec<Vec<Residue>> = gens.iter().map(|(_, m)| self.project(m)).collect::<Result<_>>()?;
        // columns of p are the generator images
        let p = FpMatrix::from_dense(self.field, &transpose(&proj, q))?;
        let pinv = p.inverse()?;
        let labels = gens.iter().map(|(n, _)| n.clone()).collect();
        let mut b = StructureBuilder::new(self.field, labels);
        for x in 0..q {
            for y in x + 1..q {
                let img = self.project(&gens[x].1.commutator(&gens[y].1)?)?;
                for (k, &c) in pinv.mul_vec(&img)?.iter().enumerate() {
                    b.add(x, y, k, c);
                }
            }
        }
        b.build()
    }
}

fn transpose(rows: &[Vec<Residue>], width: usize) -> Vec<Vec<Residue>> {
    (0..width).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::StructureBuilder;

    fn heisenberg() -> LieAlgebraFp {
        let f = PrimeField::new(3).unwrap();
        let mut b = StructureBuilder::new(f, vec!["e1".into(), "e2".into(), "e3".into()]);
        b.add(0, 1, 2, 1);
        b.build().unwrap()
    }

    fn sl2(p: u32) -> LieAlgebraFp {
        let f = PrimeField::new(p).unwrap();
        let mut b = StructureBuilder::new(f, vec!["e".into(), "f".into(), "h".into()]);
        b.add(0, 1, 2, 1);
        b.add_signed(2, 0, 0, 2);
        b.add_signed(2, 1, 1, -2);
        b.build().unwrap()
    }

    #[test]
    fn abelian_derivations_are_gl() {
        let f = PrimeField::new(3).unwrap();
        let a = LieAlgebraFp::abelian(f, 3).unwrap();
        let d = derivation_algebra(&a).unwrap();
        assert_eq!(d.dim(), 9);
        assert!(d.inner().is_zero());
        assert_eq!(d.outer_algebra().unwrap().dim(), 9);
    }

    #[test]
    fn heisenberg_derivations() {
        // Der(h3) has dimension 6 in every characteristic
        let h = heisenberg();
        let d = derivation_algebra(&h).unwrap();
        assert_eq!(d.dim(), 6);
        assert_eq!(d.inner().dim(), 2);
        for m in d.basis_maps() {
            assert!(is_derivation(&h, &m).unwrap().holds());
        }
    }

    #[test]
    fn sl2_has_no_outer_derivations() {
        let l = sl2(5);
        let d = derivation_algebra(&l).unwrap();
        assert_eq!(d.dim(), 3);
        assert_eq!(d.outer_algebra().unwrap().dim(), 0);
    }

    #[test]
    fn non_derivation_is_caught() {
        let h = heisenberg();
        let f = h.field();
        let m = FpMatrix::from_triplets(f, 3, 3, [(0, 0, 1)]);
        assert_eq!(is_derivation(&h, &m).unwrap(), LeibnizCheck::FailsAt(0, 1));
        assert!(is_derivation(&h, &FpMatrix::zeros(f, 2, 2)).is_err());
        assert!(is_derivation(&h, &FpMatrix::zeros(f, 3, 3)).unwrap().holds());
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let l = sl2(3);
        let one = derivation_algebra_with(&l, &SolveOptions { threads: 1, ..Default::default() }).unwrap();
        let four = derivation_algebra_with(&l, &SolveOptions { threads: 4, ..Default::default() }).unwrap();
        assert_eq!(one.subspace(), four.subspace());
    }

    #[test]
    fn shards_cover_all_pairs() {
        for dim in [1, 2, 5, 17] {
            for shards in [1, 3, 8] {
                let r = shard_ranges(dim, shards);
                let covered: Vec<usize> = r.into_iter().flatten().collect();
                assert_eq!(covered, (1..dim).collect::<Vec<_>>());
            }
        }
    }
}
