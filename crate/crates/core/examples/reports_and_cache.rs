//! JSON/CSV reports and the on-disk derivation cache.

use modlie::derout::DerCache;
use modlie::report::{zassenhaus_report, AlgebraSpec, OutReport, ReportOptions};

fn main() -> modlie::Result<()> {
    let dir = std::env::temp_dir().join("modlie-example-cache");
    let opts = ReportOptions {
        cache: Some(DerCache::new(&dir)?),
        ..ReportOptions::default()
    };
    let built = AlgebraSpec::Hamiltonian { r: 2, n: vec![1, 1, 1, 1], p: 3 }.build()?;
    let first = zassenhaus_report(&built, &opts)?;
    let second = zassenhaus_report(&built, &opts)?;
    println!(
        "cache hit on second run: {}, reports agree: {}",
        second.telemetry.cache_hit,
        first.deterministic_json()? == second.deterministic_json()?
    );
    let json = first.to_json()?;
    assert_eq!(OutReport::from_json(&json)?, first);
    print!("{}", first.to_csv()?);
    println!("cache files in {}", dir.display());
    Ok(())
}
