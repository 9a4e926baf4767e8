//! The eight-dimensional Brown algebra over GF(3).

use modlie::catalog::brown8;
use modlie::liealg::{center, simplicity_probe, DEFAULT_PROBE_SEED};
use modlie::report::{zassenhaus_report, AlgebraSpec, ReportOptions};

fn main() -> modlie::Result<()> {
    let b = brown8();
    b.ensure_lie()?;
    println!("labels: {}", b.labels().join(" "));
    println!("center dim: {}", center(&b).dim());
    println!("probe: {}", simplicity_probe(&b, 32, DEFAULT_PROBE_SEED).tag());
    let r = zassenhaus_report(&AlgebraSpec::Br8.build()?, &ReportOptions::default())?;
    print!("{}", r.to_text());
    Ok(())
}
