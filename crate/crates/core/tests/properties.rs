use modlie::catalog::{brown8, heisenberg, model_out_algebra, sl_psl, Diagonal, ModelKind};
use modlie::derout::{derivation_algebra, is_derivation};
use modlie::divpow::{dp_coeff, witt_algebra, witt_basis, DividedPowers, DpPoly, WittElement};
use modlie::hamiltonian::{hamiltonian_algebra, Method};
use modlie::liealg::{derived_series, lower_central_series, LieAlgebraFp};
use modlie::linalg::{lucas_binom, FpMatrix, PrimeField, Residue, Subspace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pascal(rows: usize, p: u32) -> Vec<Vec<u8>> {
    let mut t: Vec<Vec<u8>> = Vec::with_capacity(rows + 1);
    for a in 0..=rows {
        let mut row = vec![0u8; a + 1];
        row[0] = 1;
        row[a] = 1;
        for b in 1..a {
            row[b] = ((u32::from(t[a - 1][b - 1]) + u32::from(t[a - 1][b])) % p) as u8;
        }
        t.push(row);
    }
    t
}

#[test]
fn lucas_matches_pascal_exhaustively() {
    for (p, limit) in [(3u32, 729usize), (5, 625), (7, 343)] {
        let t = pascal(limit, p);
        for a in 0..=limit {
            for b in 0..=limit {
                let want = if b <= a { t[a][b] } else { 0 };
                assert_eq!(lucas_binom(a as u64, b as u64, p as u8), want, "C({a},{b}) mod {p}");
            }
        }
    }
}

#[test]
fn divided_power_coefficients_match_pascal() {
    let t = pascal(2 * 26, 3);
    let f = PrimeField::new(3).unwrap();
    let tau = [26u32, 8];
    for a0 in 0..=26u32 {
        for b0 in 0..=26u32 {
            for (a1, b1) in [(0u32, 0u32), (1, 2), (3, 5), (4, 4)] {
                let inside = a0 + b0 <= tau[0] && a1 + b1 <= tau[1];
                let want = if inside {
                    f.mul(t[(a0 + b0) as usize][b0 as usize], t[(a1 + b1) as usize][b1 as usize])
                } else {
                    0
                };
                assert_eq!(dp_coeff(f, &[a0, a1], &[b0, b1], &tau), want);
            }
        }
    }
}

/// Rank by plain dense elimination, independent of the library's echelon code.
fn dense_rank(mut m: Vec<Vec<u32>>, p: u32) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let inv = |a: u32| (1..p).find(|x| a * x % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, r);
        let s = inv(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rank_nullity_on_seeded_sparse_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0BAD_5EED);
    for case in 0..1000 {
        let p = [2u32, 3, 5, 7, 251][case % 5];
        let f = PrimeField::new(p).unwrap();
        let (rows, cols) = (rng.gen_range(1..24), rng.gen_range(1..24));
        let density = rng.gen_range(0.05..0.5);
        let mut dense = vec![vec![0u32; cols]; rows];
        for row in dense.iter_mut() {
            for x in row.iter_mut() {
                if rng.gen_bool(density) {
                    *x = rng.gen_range(1..p);
                }
            }
        }
        let as_u8: Vec<Vec<Residue>> = dense.iter().map(|r| r.iter().map(|&x| x as u8).collect()).collect();
        let m = FpMatrix::from_dense(f, &as_u8).unwrap();
        let rank = dense_rank(dense, p);
        assert_eq!(m.rank(), rank, "case {case}");
        let null = m.nullspace();
        assert_eq!(null.dim() + rank, cols, "case {case}");
        for v in null.to_dense_rows() {
            assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0), "case {case}");
        }
    }
}

fn vectors(p: u32, ambient: usize, count: usize) -> impl Strategy<Value = Vec<Vec<Residue>>> {
    let p = p as u8;
    prop::collection::vec(
        prop::collection::vec(prop_oneof![3 => Just(0u8), 1 => 1..p], ambient),
        0..=count,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subspace_dimension_formula(u in vectors(3, 9, 7), v in vectors(3, 9, 7)) {
        let f = PrimeField::new(3).unwrap();
        let su = Subspace::span_dense(f, 9, &u);
        let sv = Subspace::span_dense(f, 9, &v);
        let sum = su.sum(&sv).unwrap();
        let cap = su.intersect(&sv).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), su.dim() + sv.dim());
        prop_assert!(cap.is_subspace_of(&su) && cap.is_subspace_of(&sv));
        prop_assert!(su.is_subspace_of(&sum) && sv.is_subspace_of(&sum));
    }

    #[test]
    fn rref_is_idempotent(u in vectors(5, 8, 10)) {
        let f = PrimeField::new(5).unwrap();
        let s = Subspace::span_dense(f, 8, &u);
        let again = Subspace::span(f, 8, s.rows());
        prop_assert_eq!(&again, &s);
        let m = FpMatrix::from_dense(f, &s.to_dense_rows()).unwrap_or_else(|_| FpMatrix::zeros(f, 0, 8));
        prop_assert_eq!(m.rank(), s.dim());
    }

    #[test]
    fn coordinates_recombine(u in vectors(7, 6, 6), pick in prop::collection::vec(0u8..7, 6)) {
        let f = PrimeField::new(7).unwrap();
        let s = Subspace::span_dense(f, 6, &u);
        let coeffs: Vec<Residue> = pick.into_iter().take(s.dim()).collect();
        if coeffs.len() == s.dim() {
            let v = s.combine(&coeffs);
            prop_assert_eq!(s.coordinates(&v).unwrap(), coeffs);
        }
    }

    #[test]
    fn divided_powers_are_associative(a in prop::collection::vec(0u32..9, 2), b in prop::collection::vec(0u32..3, 2), c in prop::collection::vec(0u32..9, 2)) {
        let o = DividedPowers::new(3, &[2, 1]).unwrap();
        let clamp = |v: Vec<u32>| vec![v[0].min(8), v[1].min(2)];
        let x = DpPoly::monomial(o.index(&clamp(a)).unwrap());
        let y = DpPoly::monomial(o.index(&clamp(b)).unwrap());
        let z = DpPoly::monomial(o.index(&clamp(c)).unwrap());
        let left = x.mul(&y, &o).unwrap().mul(&z, &o).unwrap();
        let right = x.mul(&y.mul(&z, &o).unwrap(), &o).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn witt_fields_satisfy_leibniz(i in 0usize..18, f in 0usize..9, g in 0usize..9) {
        let o = DividedPowers::new(3, &[1, 1]).unwrap();
        let basis = witt_basis(&o);
        let (a, dir) = basis[i].clone();
        let d = WittElement::monomial(a, dir);
        let idx = o.indices();
        let (x, y) = (DpPoly::monomial(idx[f].clone()), DpPoly::monomial(idx[g].clone()));
        let lhs = d.apply(&x.mul(&y, &o).unwrap(), &o).unwrap();
        let rhs = d
            .apply(&x, &o)
            .unwrap()
            .mul(&y, &o)
            .unwrap()
            .add(&x.mul(&d.apply(&y, &o).unwrap(), &o).unwrap(), o.field());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn witt_bracket_is_the_commutator(i in 0usize..18, j in 0usize..18, g in 0usize..9) {
        let o = DividedPowers::new(3, &[1, 1]).unwrap();
        let basis = witt_basis(&o);
        let d = WittElement::monomial(basis[i].0.clone(), basis[i].1);
        let e = WittElement::monomial(basis[j].0.clone(), basis[j].1);
        let y = DpPoly::monomial(o.indices()[g].clone());
        let lhs = d.bracket(&e, &o).unwrap().apply(&y, &o).unwrap();
        let de = d.apply(&e.apply(&y, &o).unwrap(), &o).unwrap();
        let ed = e.apply(&d.apply(&y, &o).unwrap(), &o).unwrap();
        let minus_one = o.field().neg(1);
        let mut neg = DpPoly::zero();
        for (m, &c) in ed.terms() {
            neg.add_term(o.field(), m.clone(), o.field().mul(c, minus_one));
        }
        prop_assert_eq!(lhs, de.add(&neg, o.field()));
    }
}

fn catalog() -> Vec<(String, LieAlgebraFp)> {
    let mut v: Vec<(String, LieAlgebraFp)> = vec![
        ("psl3".into(), sl_psl(3, 3, true).unwrap().algebra),
        ("sl3".into(), sl_psl(3, 3, false).unwrap().algebra),
        ("psl6".into(), sl_psl(6, 3, true).unwrap().algebra),
        ("sl2 p=5".into(), sl_psl(2, 5, false).unwrap().algebra),
        ("br8".into(), brown8()),
        ("heisenberg".into(), heisenberg(3).unwrap()),
        ("W(1;(1))".into(), witt_algebra(1, &[1], 3).unwrap()),
        ("W(2;(1,1))".into(), witt_algebra(2, &[1, 1], 3).unwrap()),
        ("H(2;(1,1))".into(), hamiltonian_algebra(1, &[1, 1], 3, Method::Oracle).unwrap()),
        ("H(2;(1,2))".into(), hamiltonian_algebra(1, &[1, 2], 3, Method::Oracle).unwrap()),
        ("H(2;(1,1)) p=5".into(), hamiltonian_algebra(1, &[1, 1], 5, Method::Oracle).unwrap()),
    ];
    for k in [
        ModelKind::Sl2SemiV2 { k: 1 },
        ModelKind::H3RtimesLine { k: 2 },
        ModelKind::AlmostAbelian { d: 4, diag: Diagonal::Identity, k: 1 },
        ModelKind::AlmostAbelian { d: 5, diag: Diagonal::LastNegated, k: 0 },
    ] {
        v.push((k.to_string(), model_out_algebra(k).unwrap()));
    }
    v
}

#[test]
fn catalog_constructors_satisfy_jacobi() {
    for (name, l) in catalog() {
        assert!(l.validate_lie().is_ok(), "{name}");
    }
}

#[test]
fn series_are_invariant_under_seeded_shuffles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, l) in catalog() {
        let d = derived_series(&l).dims();
        let c = lower_central_series(&l).dims();
        for _ in 0..4 {
            let mut perm: Vec<usize> = (0..l.dim()).collect();
            perm.shuffle(&mut rng);
            let q = l.permuted(&perm).unwrap();
            assert!(q.validate_lie().is_ok(), "{name}");
            assert_eq!(derived_series(&q).dims(), d, "{name}");
            assert_eq!(lower_central_series(&q).dims(), c, "{name}");
        }
    }
}

#[test]
fn series_are_invariant_under_random_base_change() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, l) in catalog().into_iter().filter(|(_, l)| l.dim() <= 25) {
        let f = l.field();
        let n = l.dim();
        let g = loop {
            let rows: Vec<Vec<Residue>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0..f.p())).collect())
                .collect();
            let g = FpMatrix::from_dense(f, &rows).unwrap();
            if g.rank() == n {
                break g;
            }
        };
        let q = l.change_basis(&g).unwrap();
        assert!(q.validate_lie().is_ok(), "{name}");
        assert_eq!(derived_series(&q).dims(), derived_series(&l).dims(), "{name}");
    }
}

#[test]
fn out_series_is_invariant_under_shuffles() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, l) in catalog().into_iter().filter(|(_, l)| l.dim() <= 25) {
        let series = |l: &LieAlgebraFp| {
            let o = derivation_algebra(l).unwrap().outer_algebra().unwrap();
            o.as_lie().map_or(vec![0], |o| derived_series(o).dims())
        };
        let base = series(&l);
        let mut perm: Vec<usize> = (0..l.dim()).collect();
        perm.shuffle(&mut rng);
        assert_eq!(series(&l.permuted(&perm).unwrap()), base, "{name}");
    }
}

#[test]
fn der_basis_is_derivations_and_inn_is_an_ideal() {
    for (name, l) in catalog().into_iter().filter(|(_, l)| l.dim() <= 25) {
        let d = derivation_algebra(&l).unwrap();
        let maps = d.basis_maps();
        for m in &maps {
            assert!(is_derivation(&l, m).unwrap().holds(), "{name}");
        }
        for m in &maps {
            for i in 0..l.dim() {
                let ad = l.ad_basis(i);
                let c = m.commutator(&ad).unwrap();
                // [D, ad x] = ad(D x)
                let dx = m.column(i);
                assert_eq!(c, l.adjoint_sparse(&dx), "{name}");
                assert!(d.inner_ambient().contains(&c.flatten()), "{name}");
            }
        }
    }
}
