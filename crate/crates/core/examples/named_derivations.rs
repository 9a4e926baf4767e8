//! Runs every named-derivation check on the Hamiltonian algebras that have one.

use modlie::derout::derivation_algebra;
use modlie::hamiltonian::{HamiltonianBasis, Method};
use modlie::verify::hamiltonian_checks;

fn main() -> modlie::Result<()> {
    let cases: [(usize, &[u32]); 5] = [
        (1, &[1, 1]),
        (1, &[1, 2]),
        (1, &[1, 3]),
        (1, &[2, 2]),
        (2, &[1, 1, 1, 1]),
    ];
    for (r, n) in cases {
        let h = HamiltonianBasis::new(r, n, 3)?;
        let l = h.algebra(Method::Oracle)?;
        let d = derivation_algebra(&l)?;
        let out = d.outer_algebra()?;
        let checks = hamiltonian_checks(&h, &l, &d, &out)?;
        println!("H({};{n:?}): {} checks", 2 * r, checks.len());
        for c in checks {
            println!("  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
    }
    Ok(())
}
