//! Builds H(2;(1,2))^(2) over GF(3) both ways and writes its structure constants.

use modlie::hamiltonian::{HamiltonianBasis, Method};
use modlie::liealg::text;

fn main() -> modlie::Result<()> {
    let h = HamiltonianBasis::new(1, &[1, 2], 3)?;
    let oracle = h.algebra(Method::Oracle)?;
    let closed = h.algebra(Method::ClosedForm)?;
    assert!(oracle.same_structure(&closed));
    oracle.ensure_lie()?;

    println!("dim = {}", oracle.dim());
    println!("first basis vectors: {}", h.labels()[..6].join(", "));
    let (i, j) = (h.position(&[1, 0]).unwrap(), h.position(&[0, 2]).unwrap());
    let v = oracle.bracket_basis(i, j);
    let rhs: Vec<String> = v.iter().map(|&(k, c)| format!("{c} {}", oracle.label(k))).collect();
    println!("[{}, {}] = {}", oracle.label(i), oracle.label(j), rhs.join(" + "));

    let body = text::to_text(&oracle)?;
    let back = text::from_text(&body)?;
    assert_eq!(back, oracle);
    println!("text form: {} lines", body.lines().count());
    Ok(())
}
