use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::algebra::LieAlgebraFp;
use crate::linalg::{solve_stream, sparse, Echelon, Entry, ResourceGuard, Scratch, SparseVec, Subspace};

/// Seed used by [`simplicity_probe`] callers that do not pick their own.
pub const DEFAULT_PROBE_SEED: u64 = 0x0005_EED0_F11E;
pub const DEFAULT_PROBE_TRIALS: usize = 32;

/// A descending chain of subspaces.
///
/// The chain stops at zero or at the first repetition; a repeated term is kept,
/// so a perfect algebra of dimension 7 has dims `[7, 7]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    pub terms: Vec<Subspace>,
}

impl Series {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// Whether the chain reaches zero.
    pub fn reaches_zero(&self) -> bool {
        self.terms.last().is_some_and(Subspace::is_zero)
    }

    /// Number of strict steps down to zero, if it gets there.
    pub fn length(&self) -> Option<usize> {
        self.reaches_zero().then(|| self.terms.len() - 1)
    }
}

/// `span{[a, b] : a in A, b in B}`.
pub fn bracket_span(l: &LieAlgebraFp, a: &Subspace, b: &Subspace) -> Subspace {
    let n = l.dim();
    let mut ech = Echelon::new(l.field(), n);
    let mut scratch = Scratch::new(n);
    let same = a == b;
    'outer: for (r, x) in a.rows().iter().enumerate() {
        let start = if same { r + 1 } else { 0 };
        for y in &b.rows()[start..] {
            let v = l.bracket_sparse(x, y);
            if !v.is_empty() {
                ech.push(&v, &mut scratch);
                if ech.rank() == n {
                    break 'outer;
                }
            }
        }
    }
    Subspace::span(l.field(), n, ech.rref_rows())
}

fn descend(l: &LieAlgebraFp, mut next: impl FnMut(&Subspace) -> Subspace) -> Series {
    let mut terms = vec![Subspace::full(l.field(), l.dim())];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let t = next(last);
        let stable = &t == last;
        terms.push(t);
        if stable {
            break;
        }
    }
    Series { terms }
}

/// `L ⊇ [L,L] ⊇ [L',L'] ⊇ ...`
pub fn derived_series(l: &LieAlgebraFp) -> Series {
    descend(l, |s| bracket_span(l, s, s))
}

/// `L ⊇ [L,L] ⊇ [L,[L,L]] ⊇ ...`
pub fn lower_central_series(l: &LieAlgebraFp) -> Series {
    let full = Subspace::full(l.field(), l.dim());
    descend(l, |s| bracket_span(l, &full, s))
}

/// Elements commuting with every basis vector.
pub fn center(l: &LieAlgebraFp) -> Subspace {
    let lists = l.right_multiplication_lists();
    let stream = |sink: &mut dyn FnMut(&[Entry])| {
        // for each j and k: sum_t z_t c_{tj}^k = 0
        let mut eq: Vec<(u32, u32, u8)> = Vec::new();
        let mut buf: Vec<Entry> = Vec::new();
        for list in &lists {
            eq.clear();
            eq.extend(list.iter().map(|&(t, k, c)| (k, t, c)));
            eq.sort_unstable();
            for group in eq.chunk_by(|a, b| a.0 == b.0) {
                buf.clear();
                buf.extend(group.iter().map(|&(_, t, c)| (t as usize, c)));
                sink(&buf);
            }
        }
    };
    solve_stream(l.field(), l.dim(), ResourceGuard::default(), stream)
        .expect("no resource guard")
}

pub fn center_and_lcs(l: &LieAlgebraFp) -> (Subspace, Series) {
    (center(l), lower_central_series(l))
}

/// Smallest ideal containing `s`.
pub fn ideal_closure(l: &LieAlgebraFp, s: &Subspace) -> Subspace {
    let n = l.dim();
    let mut ech = Echelon::new(l.field(), n);
    let mut scratch = Scratch::new(n);
    let mut queue: Vec<SparseVec> = Vec::new();
    for r in s.rows() {
        if ech.push(r, &mut scratch) {
            queue.push(r.clone());
        }
    }
    let mut head = 0;
    while head < queue.len() && ech.rank() < n {
        let v = queue[head].clone();
        head += 1;
        for i in 0..n {
            let w = l.bracket_sparse(&[(i, 1)], &v);
            if !w.is_empty() && ech.push(&w, &mut scratch) {
                queue.push(w);
            }
        }
    }
    Subspace::span(l.field(), n, ech.rref_rows())
}

/// Outcome of [`simplicity_probe`]. Verdicts are over GF(p) itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplicity {
    /// A proper nonzero ideal was found; this is certain.
    NotSimple { witness: Subspace },
    /// Every spun-up vector generated the whole algebra.
    ProbablySimple { trials: usize },
    /// One-dimensional abelian algebra.
    Abelian,
}

impl Simplicity {
    pub fn tag(&self) -> &'static str {
        match self {
            Simplicity::NotSimple { .. } => "not_simple",
            Simplicity::ProbablySimple { .. } => "probably_simple",
            Simplicity::Abelian => "abelian",
        }
    }
}

/// Monte Carlo simplicity test. `NotSimple` answers carry a witness ideal.
pub fn simplicity_probe(l: &LieAlgebraFp, trials: usize, seed: u64) -> Simplicity {
    let f = l.field();
    let n = l.dim();
    if l.is_abelian() {
        return if n == 1 {
            Simplicity::Abelian
        } else {
            Simplicity::NotSimple {
                witness: Subspace::span(f, n, [vec![(0, 1)]]),
            }
        };
    }
    let z = center(l);
    if !z.is_zero() {
        return Simplicity::NotSimple { witness: z };
    }
    let full = Subspace::full(f, n);
    let derived = bracket_span(l, &full, &full);
    if derived.dim() < n {
        return Simplicity::NotSimple { witness: derived };
    }
    let proper = |v: SparseVec| {
        let i = ideal_closure(l, &Subspace::span(f, n, [v]));
        (i.dim() < n).then_some(i)
    };
    for i in 0..n {
        if let Some(witness) = proper(vec![(i, 1)]) {
            return Simplicity::NotSimple { witness };
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let dense: Vec<u8> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
        let v = sparse::from_dense(&dense);
        if v.is_empty() {
            continue;
        }
        if let Some(witness) = proper(v) {
            return Simplicity::NotSimple { witness };
        }
    }
    Simplicity::ProbablySimple { trials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::StructureBuilder;
    use crate::linalg::PrimeField;

    fn heisenberg() -> LieAlgebraFp {
        let f = PrimeField::new(3).unwrap();
        let mut b = StructureBuilder::new(f, vec!["e1".into(), "e2".into(), "e3".into()]);
        b.add(0, 1, 2, 1);
        b.build().unwrap()
    }

    fn sl2(p: u32) -> LieAlgebraFp {
        // e, f, h with [e,f]=h, [h,e]=2e, [h,f]=-2f
        let f = PrimeField::new(p).unwrap();
        let mut b = StructureBuilder::new(f, vec!["e".into(), "f".into(), "h".into()]);
        b.add(0, 1, 2, 1);
        b.add_signed(2, 0, 0, 2);
        b.add_signed(2, 1, 1, -2);
        b.build().unwrap()
    }

    #[test]
    fn heisenberg_series() {
        let h = heisenberg();
        assert_eq!(derived_series(&h).dims(), vec![3, 1, 0]);
        assert_eq!(derived_series(&h).length(), Some(2));
        assert_eq!(center(&h).dim(), 1);
        assert_eq!(lower_central_series(&h).dims(), vec![3, 1, 0]);
    }

    #[test]
    fn abelian_series_and_probe() {
        let f = PrimeField::new(3).unwrap();
        let a = LieAlgebraFp::abelian(f, 4).unwrap();
        assert_eq!(derived_series(&a).dims(), vec![4, 0]);
        assert_eq!(center(&a).dim(), 4);
        assert_eq!(simplicity_probe(&a, 4, 1).tag(), "not_simple");
        let line = LieAlgebraFp::abelian(f, 1).unwrap();
        assert_eq!(simplicity_probe(&line, 4, 1), Simplicity::Abelian);
    }

    #[test]
    fn sl2_perfect_for_odd_p() {
        let l = sl2(5);
        assert_eq!(derived_series(&l).dims(), vec![3, 3]);
        assert!(center(&l).is_zero());
        assert_eq!(simplicity_probe(&l, 8, 7).tag(), "probably_simple");
        assert!(derived_series(&l).length().is_none());
    }

    #[test]
    fn closure_examples() {
        let h = heisenberg();
        let z = center(&h);
        assert_eq!(ideal_closure(&h, &z), z);
        let full = Subspace::full(h.field(), 3);
        assert_eq!(ideal_closure(&h, &full), full);
        let e1 = Subspace::span(h.field(), 3, [vec![(0, 1)]]);
        assert_eq!(ideal_closure(&h, &e1).dim(), 2);
    }
}
