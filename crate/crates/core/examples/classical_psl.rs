//! Classical cross-checks: psl_3 and psl_6 over GF(3), sl_2 over GF(5).

use modlie::catalog::sl_psl;
use modlie::derout::derivation_algebra;
use modlie::liealg::{derived_series, simplicity_probe, DEFAULT_PROBE_SEED};

fn main() -> modlie::Result<()> {
    for (n, p) in [(3, 3), (6, 3), (2, 5)] {
        let g = sl_psl(n, p, true)?;
        let d = derivation_algebra(&g.algebra)?;
        let out = d.outer_algebra()?;
        print!(
            "psl_{n} p={p}: dim {}, Der {}, Out {}",
            g.algebra.dim(),
            d.dim(),
            out.dim()
        );
        match out.as_lie() {
            Some(o) => println!(
                ", Out series {:?}, probe {}",
                derived_series(o).dims(),
                simplicity_probe(o, 32, DEFAULT_PROBE_SEED).tag()
            ),
            None => println!(),
        }
    }
    Ok(())
}
