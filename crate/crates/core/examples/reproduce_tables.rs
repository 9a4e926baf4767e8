//! Recomputes the reference tables. Pass `--include-large` for the dim-241 row.

use modlie::reference::{reproduce, Table};
use modlie::report::ReportOptions;

fn main() {
    let large = std::env::args().any(|a| a == "--include-large");
    let mut failed = false;
    for t in Table::ALL {
        let r = reproduce(t, large, &ReportOptions::default());
        print!("{}", r.to_text());
        failed |= r.any_failed();
    }
    std::process::exit(i32::from(failed));
}
