//! Divided powers O(2;(1,1)) and the Witt algebras built on them.

use modlie::derout::derivation_algebra;
use modlie::divpow::{witt_algebra, DividedPowers};

fn main() -> modlie::Result<()> {
    let o = DividedPowers::new(3, &[1, 1])?;
    let x1 = o.index(&[1, 0])?;
    let x1sq = o.index(&[2, 0])?;
    // x1 * x1 = 2 x1^(2); x1 * x1^(2) leaves the truncation
    for (a, b) in [(&x1, &x1), (&x1, &x1sq)] {
        match o.multiply(a, b)? {
            Some((c, m)) => println!("{a} * {b} = {c} {m}"),
            None => println!("{a} * {b} = 0"),
        }
    }

    for (n, p) in [(vec![1u32], 3u32), (vec![2], 3), (vec![1, 1], 3), (vec![1], 5)] {
        let w = witt_algebra(n.len(), &n, p)?;
        let d = derivation_algebra(&w)?;
        let out = d.dim() - d.inner().dim();
        println!("W({};{:?}) p={p}: dim {}, Der {}, Out {out}", n.len(), n, w.dim(), d.dim());
    }
    Ok(())
}
