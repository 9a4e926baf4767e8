//! Checks of the named derivations of Hamiltonian algebras against a computed
//! `Der`/`Out`.

use serde::{Deserialize, Serialize};

use crate::catalog::{hamiltonian_out_model, model_out_algebra};
use crate::derout::{is_derivation, DerivationAlgebra, OutAlgebra};
use crate::error::Result;
use crate::hamiltonian::{
    enlarged_adjoint, general_out_family, sl2_triple, translation_pair, HamiltonianBasis,
};
use crate::liealg::{derived_series, LieAlgebraFp};
use crate::linalg::{FpMatrix, Subspace};

/// One named relation and whether it held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Default)]
struct Checks(Vec<GeneratorCheck>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.0.push(GeneratorCheck {
            name: name.into(),
            passed,
        });
    }
}

/// `ad D_H(x^(c))`, taken from the algebra itself when `c` is a basis index
/// and from the enlarged algebra otherwise.
pub fn ad_dh(h: &HamiltonianBasis, l: &LieAlgebraFp, c: &[i64]) -> Result<FpMatrix> {
    if let Some(k) = h.position_signed(c) {
        return Ok(l.ad_basis(k));
    }
    let exps: Vec<u32> = c.iter().map(|&x| x.max(0) as u32).collect();
    enlarged_adjoint(h, &exps)
}

fn neg(m: &FpMatrix) -> FpMatrix {
    m.scale(m.field().neg(1))
}

fn comm(a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
    a.commutator(b).expect("square matrices of equal size")
}

/// Rank of the `Out` images of `maps`.
fn out_rank(out: &OutAlgebra, maps: &[&FpMatrix]) -> Result<usize> {
    let field = maps.first().map(|m| m.field());
    let Some(field) = field else { return Ok(0) };
    let rows: Vec<Vec<u8>> = maps.iter().map(|m| out.project(m)).collect::<Result<_>>()?;
    Ok(Subspace::span_dense(field, out.dim(), &rows).dim())
}

fn derivation_checks(c: &mut Checks, l: &LieAlgebraFp, named: &[(String, FpMatrix)]) -> Result<()> {
    for (name, m) in named {
        c.push(format!("{name} is a derivation"), is_derivation(l, m)?.holds());
    }
    Ok(())
}

fn model_check(c: &mut Checks, h: &HamiltonianBasis, out: &OutAlgebra, gens: &[(String, FpMatrix)]) -> Result<()> {
    let kind = hamiltonian_out_model(h.r(), h.n())?;
    let model = model_out_algebra(kind)?;
    let independent = out_rank(out, &gens.iter().map(|g| &g.1).collect::<Vec<_>>())? == out.dim()
        && gens.len() == out.dim();
    c.push("generator images form a basis of Out", independent);
    let matches = independent && out.structure_in(gens)?.same_structure(&model);
    let order: Vec<&str> = gens.iter().map(|g| g.0.as_str()).collect();
    c.push(format!("Out in basis ({}) equals {kind}", order.join(",")), matches);
    Ok(())
}

/// Every relation the named derivations are expected to satisfy on `h`.
/// Returns no checks when `h` has no named family.
pub fn hamiltonian_checks(
    h: &HamiltonianBasis,
    l: &LieAlgebraFp,
    der: &DerivationAlgebra,
    out: &OutAlgebra,
) -> Result<Vec<GeneratorCheck>> {
    let mut c = Checks::default();
    let n = h.n();
    if h.field().p() != 3 {
        return Ok(c.0);
    }
    if h.r() == 1 && n[0] == 1 {
        sl2_and_translation_checks(&mut c, h, l, der, out)?;
    } else if h.r() > 1 || (1 < n[0] && n[0] <= n[1]) {
        family_checks(&mut c, h, l, out)?;
    }
    Ok(c.0)
}

fn sl2_and_translation_checks(
    c: &mut Checks,
    h: &HamiltonianBasis,
    l: &LieAlgebraFp,
    der: &DerivationAlgebra,
    out: &OutAlgebra,
) -> Result<()> {
    let t = sl2_triple(h)?;
    let (e, f, hh) = (&t.e, &t.f, &t.h);
    derivation_checks(
        c,
        l,
        &[("E".into(), e.clone()), ("F".into(), f.clone()), ("H".into(), hh.clone())],
    )?;
    c.push("[E,F] = H", &comm(e, f) == hh);
    c.push("[E,H] = E", &comm(e, hh) == e);
    c.push("[F,H] = -F", comm(f, hh) == neg(f));
    c.push("span(E,F,H) meets Inn trivially", out_rank(out, &[e, f, hh])? == 3);
    let series = out.as_lie().map(derived_series);
    c.push(
        "Out is not solvable",
        series.is_some_and(|s| !s.reaches_zero()),
    );
    let m = n_of(h);
    if m < 2 {
        return Ok(());
    }
    let tp = translation_pair(h)?;
    let (v, w) = (&tp.v, &tp.w);
    derivation_checks(c, l, &[("V".into(), v.clone()), ("W".into(), w.clone())])?;
    c.push("[E,W] = V", &comm(e, w) == v);
    c.push("[F,V] = W", &comm(f, v) == w);
    c.push("[H,V] = V", &comm(hh, v) == v);
    c.push("[H,W] = 2W", comm(hh, w) == w.scale(2));
    c.push("span(E,F,H,V,W) meets Inn trivially", out_rank(out, &[e, f, hh, v, w])? == 5);
    let der_dim = 3usize.pow(m + 1) + m as usize + 2;
    c.push(format!("dim Der = {der_dim}"), der.dim() == der_dim);
    c.push(format!("dim Out = {}", m + 4), out.dim() == m as usize + 4);
    let mut gens: Vec<(String, FpMatrix)> = vec![
        ("E".into(), e.clone()),
        ("F".into(), f.clone()),
        ("H".into(), hh.clone()),
        ("V".into(), v.clone()),
        ("W".into(), w.clone()),
    ];
    let top = i64::from(h.tau()[1]) + 1;
    let powers = crate::hamiltonian::partial_power_maps(h);
    for (_, i, d) in &powers {
        let name = format!("D2,{i}");
        c.push(format!("{name} is a derivation"), is_derivation(l, d)?.holds());
        let central = gens
            .iter()
            .take(5)
            .map(|(_, g)| out.is_inner(&comm(d, g)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|x| x);
        c.push(format!("{name} is central in Out"), central);
        let step = 3i64.pow(*i);
        c.push(
            format!("[{name},V] = ad D_H(x2^{})", top - step),
            comm(d, v) == ad_dh(h, l, &[0, top - step])?,
        );
        c.push(
            format!("[{name},W] = ad D_H(x1^2 x2^{})", top - step - 1),
            comm(d, w) == ad_dh(h, l, &[2, top - step - 1])?,
        );
        gens.push((name, d.clone()));
    }
    model_check(c, h, out, &gens)
}

fn n_of(h: &HamiltonianBasis) -> u32 {
    h.n()[1]
}

fn family_checks(c: &mut Checks, h: &HamiltonianBasis, l: &LieAlgebraFp, out: &OutAlgebra) -> Result<()> {
    let fam = general_out_family(h)?;
    let named: Vec<(String, FpMatrix)> = fam.named().into_iter().map(|(n, m)| (n, m.clone())).collect();
    derivation_checks(c, l, &named)?;
    let r = h.r();
    let total: u32 = h.n().iter().sum();
    c.push(format!("dim Out = {}", total + 2), out.dim() == total as usize + 2);
    let sp = h.sigma_prime();
    let tau: Vec<i64> = h.tau().iter().map(|&t| i64::from(t)).collect();
    for (i, a) in fam.a.iter().enumerate() {
        c.push(format!("[A{},C] = -A{}", i + 1, i + 1), comm(a, &fam.c) == neg(a));
    }
    let coef = (2 * r as i64 - 1).rem_euclid(3) as u8;
    c.push(format!("[B,C] = {}B", 2 * r - 1), comm(&fam.b, &fam.c) == fam.b.scale(coef));
    for i in 0..r {
        let ip = sp.prime(i);
        let lhs = comm(&fam.a[i], &fam.a[ip]);
        if r == 1 {
            c.push("[A1,A2] = B", lhs == fam.b);
        } else {
            let mut t = vec![0i64; 2 * r];
            t[i] = tau[i];
            t[ip] = tau[ip];
            let name = format!("[A{},A{}] = ad D_H(x{}^{} x{}^{})", i + 1, ip + 1, i + 1, tau[i], ip + 1, tau[ip]);
            c.push(name, lhs == ad_dh(h, l, &t)?);
        }
    }
    let p = i64::from(h.field().p());
    for (i, j, d) in &fam.d {
        let step = p.pow(*j);
        let mut t = vec![0i64; 2 * r];
        t[*i] = tau[*i] - step + 1;
        c.push(
            format!("[A{0},D{0},{j}] = -ad D_H(x{0}^{1})", i + 1, t[*i]),
            comm(&fam.a[*i], d) == neg(&ad_dh(h, l, &t)?),
        );
        let mut t = tau.clone();
        t[*i] -= step;
        c.push(
            format!("[B,D{},{j}] = -ad D_H(x^(tau - {step} e{}))", i + 1, i + 1),
            comm(&fam.b, d) == neg(&ad_dh(h, l, &t)?),
        );
    }
    let mut gens: Vec<(String, FpMatrix)> = fam
        .a
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("A{}", i + 1), m.clone()))
        .collect();
    if r > 1 && r % 3 == 2 {
        gens.push(("C".into(), fam.c.clone()));
        gens.push(("B".into(), fam.b.clone()));
    } else {
        gens.push(("B".into(), fam.b.clone()));
        gens.push(("C".into(), fam.c.clone()));
    }
    for (i, j, d) in &fam.d {
        gens.push((format!("D{},{j}", i + 1), d.clone()));
    }
    model_check(c, h, out, &gens)?;
    let want = if r == 1 { 3 } else { 2 };
    let len = out.as_lie().and_then(|o| derived_series(o).length());
    c.push(format!("Out has derived length {want}"), len == Some(want));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derout::derivation_algebra;
    use crate::hamiltonian::Method;

    fn run(r: usize, n: &[u32]) -> Vec<GeneratorCheck> {
        let h = HamiltonianBasis::new(r, n, 3).unwrap();
        let l = h.algebra(Method::Oracle).unwrap();
        let d = derivation_algebra(&l).unwrap();
        let o = d.outer_algebra().unwrap();
        hamiltonian_checks(&h, &l, &d, &o).unwrap()
    }

    fn assert_all(checks: &[GeneratorCheck]) {
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn sl2_only_for_n1() {
        let c = run(1, &[1, 1]);
        assert_eq!(c.len(), 8);
        assert_all(&c);
    }

    #[test]
    fn translation_for_n2() {
        let c = run(1, &[1, 2]);
        assert!(c.iter().any(|x| x.name.contains("sl2_semi_v2(1)")));
        assert_all(&c);
    }

    #[test]
    fn family_for_22() {
        let c = run(1, &[2, 2]);
        assert!(c.iter().any(|x| x.name == "[A1,A2] = B"));
        assert_all(&c);
    }

    #[test]
    fn no_checks_at_p5() {
        let h = HamiltonianBasis::new(1, &[1, 1], 5).unwrap();
        let l = h.algebra(Method::Oracle).unwrap();
        let d = derivation_algebra(&l).unwrap();
        let o = d.outer_algebra().unwrap();
        assert!(hamiltonian_checks(&h, &l, &d, &o).unwrap().is_empty());
    }
}
