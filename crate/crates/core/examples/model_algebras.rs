//! The small model algebras that Out turns out to be.

use modlie::catalog::{hamiltonian_out_model, invariant_profile, model_out_algebra};

fn main() -> modlie::Result<()> {
    let cases: [(usize, &[u32]); 5] = [
        (1, &[1, 2]),
        (1, &[1, 3]),
        (1, &[2, 2]),
        (1, &[2, 3]),
        (2, &[1, 1, 1, 1]),
    ];
    for (r, n) in cases {
        let kind = hamiltonian_out_model(r, n)?;
        let m = model_out_algebra(kind)?;
        m.ensure_lie()?;
        let p = invariant_profile(&m)?;
        println!("H({};{n:?}) -> {kind}: dim {}, derived {:?}", 2 * r, p.dim, p.derived);
    }
    Ok(())
}
