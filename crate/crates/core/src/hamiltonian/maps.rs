//! Explicit derivations of Hamiltonian algebras, written as matrices in the
//! `D_H(x^(a))` basis.

use super::{d_h_apply, HamiltonianBasis};
use crate::divpow::{DividedPowers, DpPoly};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Residue};

/// Matrix whose column `s` is `coeff * D_H(x^(target))` for `(coeff, target) = rule(a_s)`.
/// Targets outside the basis give zero.
fn index_map<F>(h: &HamiltonianBasis, mut rule: F) -> FpMatrix
where
    F: FnMut(&[u32]) -> Option<(i64, Vec<i64>)>,
{
    let f = h.field();
    let mut trips: Vec<(usize, usize, Residue)> = Vec::new();
    for (s, a) in h.indices().iter().enumerate() {
        if let Some((c, target)) = rule(a.exps()) {
            if let Some(k) = h.position_signed(&target) {
                trips.push((k, s, f.from_i64(c)));
            }
        }
    }
    FpMatrix::from_triplets(f, h.dim(), h.dim(), trips)
}

fn signed(a: &[u32]) -> Vec<i64> {
    a.iter().map(|&x| i64::from(x)).collect()
}

fn require_one_n(h: &HamiltonianBasis, min_n: u32) -> Result<u32> {
    let n = h.n();
    if h.r() != 1 || h.field().p() != 3 || n[0] != 1 || n[1] < min_n {
        return Err(Error::InvalidParameters(format!(
            "these maps are defined on H(2;(1,n)) over GF(3) with n >= {min_n}"
        )));
    }
    Ok(n[1])
}

/// The triple `E, F, H` on `H(2;(1,n))^(2)`, p = 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: FpMatrix,
    pub f: FpMatrix,
    pub h: FpMatrix,
}

/// `E: D_H(x1^a x2^b) ↦ δ_{a,2} D_H(x2^{b+1})`,
/// `F: ↦ δ_{a,0} D_H(x1^2 x2^{b-1})`, `H: ↦ (1-a) D_H(x1^a x2^b)`.
pub fn sl2_triple(h: &HamiltonianBasis) -> Result<Sl2Triple> {
    require_one_n(h, 1)?;
    let e = index_map(h, |x| (x[0] == 2).then(|| (1, vec![0, i64::from(x[1]) + 1])));
    let f = index_map(h, |x| (x[0] == 0).then(|| (1, vec![2, i64::from(x[1]) - 1])));
    let hh = index_map(h, |x| Some((1 - i64::from(x[0]), signed(x))));
    Ok(Sl2Triple { e, f, h: hh })
}

/// The pair `V, W` on `H(2;(1,n))^(2)`, p = 3, n >= 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationPair {
    pub v: FpMatrix,
    pub w: FpMatrix,
}

/// `V: D_H(x1^a x2^b) ↦ -δ_{b,0} D_H(x1^{a-1} x2^{3^n-1})`, the restriction of
/// `ad D_H(x2^{3^n})`;
/// `W: ↦ δ_{a+b,1} (-1)^a D_H(x1^{a+1} x2^{b+3^n-2})`, the restriction of
/// `ad D_H(x1^2 x2^{3^n-1})`.
pub fn translation_pair(h: &HamiltonianBasis) -> Result<TranslationPair> {
    require_one_n(h, 2)?;
    let top = i64::from(h.tau()[1]);
    let v = index_map(h, |x| (x[1] == 0).then(|| (-1, vec![i64::from(x[0]) - 1, top])));
    let w = index_map(h, |x| {
        (x[0] + x[1] == 1).then(|| {
            let sign = if x[0] == 1 { -1 } else { 1 };
            (sign, vec![i64::from(x[0]) + 1, i64::from(x[1]) + top - 1])
        })
    });
    Ok(TranslationPair { v, w })
}

/// For every variable `i` and `1 <= j < n_i`, the map `D_H(x^(a)) ↦ D_H(x^(a - p^j ε_i))`.
pub fn partial_power_maps(h: &HamiltonianBasis) -> Vec<(usize, u32, FpMatrix)> {
    let p = i64::from(h.field().p());
    let mut out = Vec::new();
    for (i, &ni) in h.n().iter().enumerate() {
        for j in 1..ni {
            let step = p.pow(j);
            let m = index_map(h, |x| {
                let mut t = signed(x);
                t[i] -= step;
                Some((1, t))
            });
            out.push((i, j, m));
        }
    }
    out
}

/// The maps `A_i`, `B`, `C`, `D_{i,j}` on `H(2r;n)^(2)` over GF(3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutFamily {
    pub a: Vec<FpMatrix>,
    pub b: FpMatrix,
    pub c: FpMatrix,
    /// `(i, j, D_{i,j})` with 0-based variable `i`.
    pub d: Vec<(usize, u32, FpMatrix)>,
}

impl OutFamily {
    /// Display names `A1.., B, C, D{i},{j}` with 1-based variables.
    pub fn named(&self) -> Vec<(String, &FpMatrix)> {
        let mut out: Vec<(String, &FpMatrix)> = self
            .a
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("A{}", i + 1), m))
            .collect();
        out.push(("B".into(), &self.b));
        out.push(("C".into(), &self.c));
        for (i, j, m) in &self.d {
            out.push((format!("D{},{j}", i + 1), m));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.a.len() + 2 + self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `A_i: D_H(x^(a)) ↦ δ_{a_i,0} σ(i) D_H(x^{a + τ_i ε_i - ε_{i'}})`,
/// `B: ↦ δ_{|a|,1} σ(k) D_H(x^{τ - ε_k})` where `a = ε_{k'}`,
/// `C: ↦ (|a| - 2) D_H(x^(a))` and the maps of [`partial_power_maps`].
///
/// Accepts `r > 1`, or `r = 1` with `1 < n_1 <= n_2`.
pub fn general_out_family(h: &HamiltonianBasis) -> Result<OutFamily> {
    let n = h.n();
    let r = h.r();
    if h.field().p() != 3 || (r == 1 && !(1 < n[0] && n[0] <= n[1])) {
        return Err(Error::InvalidParameters(
            "the A/B/C/D family needs p = 3 and either r > 1 or r = 1 with 1 < n1 <= n2".into(),
        ));
    }
    let sp = h.sigma_prime();
    let tau = h.tau().to_vec();
    let a = (0..2 * r)
        .map(|i| {
            index_map(h, |x| {
                (x[i] == 0).then(|| {
                    let mut t = signed(x);
                    t[i] += i64::from(tau[i]);
                    t[sp.prime(i)] -= 1;
                    (sp.sigma(i), t)
                })
            })
        })
        .collect();
    let b = index_map(h, |x| {
        let deg: u32 = x.iter().sum();
        (deg == 1).then(|| {
            let j = x.iter().position(|&e| e == 1).expect("degree one");
            let k = sp.prime(j);
            let mut t = signed(&tau);
            t[k] -= 1;
            (sp.sigma(k), t)
        })
    });
    let c = index_map(h, |x| {
        let deg: u32 = x.iter().sum();
        Some((i64::from(deg) - 2, signed(x)))
    });
    Ok(OutFamily {
        a,
        b,
        c,
        d: partial_power_maps(h),
    })
}

/// Restriction to `H(2r;n)^(2)` of `ad D_H(x^(exps))` computed in `O(2r; n + 1)`,
/// where every `n_i` is incremented. Fails with [`Error::NotContained`] when the
/// image leaves the smaller algebra.
pub fn enlarged_adjoint(h: &HamiltonianBasis, exps: &[u32]) -> Result<FpMatrix> {
    let bigger: Vec<u32> = h.n().iter().map(|k| k + 1).collect();
    let big = DividedPowers::new(u32::from(h.field().p()), &bigger)?;
    let x = DpPoly::monomial(big.index(exps)?);
    let mut trips = Vec::new();
    for (s, a) in h.indices().iter().enumerate() {
        let y = DpPoly::monomial(big.index(a.exps())?);
        let image = d_h_apply(&big, h.r(), &x, &y)?;
        for (c, &v) in image.terms() {
            if c.is_zero() {
                continue;
            }
            let k = h.position(c.exps()).ok_or(Error::NotContained)?;
            trips.push((k, s, v));
        }
    }
    Ok(FpMatrix::from_triplets(h.field(), h.dim(), h.dim(), trips))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(m: &FpMatrix, s: usize) -> Vec<(usize, Residue)> {
        m.column(s)
    }

    #[test]
    fn triple_examples() {
        let h = HamiltonianBasis::new(1, &[1, 2], 3).unwrap();
        let t = sl2_triple(&h).unwrap();
        let x1x2 = h.position(&[1, 1]).unwrap();
        assert!(col(&t.e, x1x2).is_empty());
        let src = h.position(&[2, 1]).unwrap();
        assert_eq!(col(&t.e, src), vec![(h.position(&[0, 2]).unwrap(), 1)]);
        let x2 = h.position(&[0, 1]).unwrap();
        assert_eq!(col(&t.h, x2), vec![(x2, 1)]);
    }

    #[test]
    fn translation_examples() {
        let h = HamiltonianBasis::new(1, &[1, 2], 3).unwrap();
        let tp = translation_pair(&h).unwrap();
        let x1sq = h.position(&[2, 0]).unwrap();
        // minus D_H(x1 x2^8)
        assert_eq!(col(&tp.v, x1sq), vec![(h.position(&[1, 8]).unwrap(), 2)]);
        assert!(col(&tp.v, h.position(&[1, 1]).unwrap()).is_empty());
        let x1 = h.position(&[1, 0]).unwrap();
        assert_eq!(col(&tp.w, x1), vec![(h.position(&[2, 7]).unwrap(), 2)]);
        let small = HamiltonianBasis::new(1, &[1, 1], 3).unwrap();
        assert!(translation_pair(&small).is_err());
    }

    #[test]
    fn family_examples() {
        let h = HamiltonianBasis::new(1, &[2, 2], 3).unwrap();
        let fam = general_out_family(&h).unwrap();
        assert_eq!(fam.len(), 6);
        let x2 = h.position(&[0, 1]).unwrap();
        assert_eq!(col(&fam.a[0], x2), vec![(h.position(&[8, 0]).unwrap(), 1)]);
        let x1 = h.position(&[1, 0]).unwrap();
        // B(D_H(x1)) = -D_H(x^{τ - ε_2})
        assert_eq!(col(&fam.b, x1), vec![(h.position(&[8, 7]).unwrap(), 2)]);
        assert!(col(&fam.c, h.position(&[1, 1]).unwrap()).is_empty());
        assert!(general_out_family(&HamiltonianBasis::new(1, &[1, 2], 3).unwrap()).is_err());
    }

    #[test]
    fn hand_formulas_match_enlarged_adjoint() {
        let h = HamiltonianBasis::new(1, &[2, 2], 3).unwrap();
        let fam = general_out_family(&h).unwrap();
        assert_eq!(enlarged_adjoint(&h, &[9, 0]).unwrap(), fam.a[0]);
        assert_eq!(enlarged_adjoint(&h, &[0, 9]).unwrap(), fam.a[1]);
        assert_eq!(enlarged_adjoint(&h, &[8, 8]).unwrap(), fam.b);
        let h = HamiltonianBasis::new(1, &[1, 2], 3).unwrap();
        let tp = translation_pair(&h).unwrap();
        assert_eq!(enlarged_adjoint(&h, &[0, 9]).unwrap(), tp.v);
        assert_eq!(enlarged_adjoint(&h, &[2, 8]).unwrap(), tp.w);
    }
}
