//! The derivations E, F, H of H(2;(1,n))^(2), p = 3, span a copy of sl2 in Out,
//! so Out is not solvable.

use modlie::derout::{derivation_algebra, is_derivation};
use modlie::hamiltonian::{sl2_triple, HamiltonianBasis, Method};
use modlie::liealg::derived_series;

fn main() -> modlie::Result<()> {
    for n in 1..=3 {
        let h = HamiltonianBasis::new(1, &[1, n], 3)?;
        let l = h.algebra(Method::Oracle)?;
        let t = sl2_triple(&h)?;
        for m in [&t.e, &t.f, &t.h] {
            assert!(is_derivation(&l, m)?.holds());
        }
        assert_eq!(t.e.commutator(&t.f)?, t.h);
        let d = derivation_algebra(&l)?;
        let out = d.outer_algebra()?;
        let inner = [&t.e, &t.f, &t.h].iter().map(|m| out.is_inner(m)).collect::<Result<Vec<_>, _>>()?;
        let series = derived_series(out.as_lie().expect("Out is nonzero")).dims();
        println!(
            "H(2;(1,{n})): dim {}, Out {}, E/F/H inner? {:?}, Out series {series:?}",
            l.dim(),
            out.dim(),
            inner
        );
    }
    Ok(())
}
