//! H(2;(2,3))^(2) over GF(3): 241 basis vectors, 58081 unknowns.
//! Run with `--release`.

use std::time::Instant;

use modlie::derout::{derivation_algebra_with, SolveOptions};
use modlie::hamiltonian::{hamiltonian_algebra, Method};
use modlie::liealg::derived_series;
use modlie::report::peak_rss_bytes;

fn main() -> modlie::Result<()> {
    let t = Instant::now();
    let l = hamiltonian_algebra(1, &[2, 3], 3, Method::Oracle)?;
    let opts = SolveOptions {
        mem_limit: Some(8 << 30),
        ..SolveOptions::default()
    };
    let d = derivation_algebra_with(&l, &opts)?;
    let out = d.outer_algebra()?;
    let s = d.stats();
    println!("dim {}, Der {}, Out {}", l.dim(), d.dim(), out.dim());
    println!("Out series {:?}", derived_series(out.as_lie().expect("nonzero")).dims());
    println!(
        "{} unknowns, {} equations, {} blocks (largest {}), solver peak {} KB",
        s.unknowns,
        s.equations,
        s.blocks,
        s.largest_block,
        s.peak_bytes / 1024
    );
    println!(
        "{:.2} s, process peak {} MB",
        t.elapsed().as_secs_f64(),
        peak_rss_bytes().unwrap_or(0) >> 20
    );
    Ok(())
}
