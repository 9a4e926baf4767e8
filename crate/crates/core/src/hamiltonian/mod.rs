//! Hamiltonian algebras H(2r;n)^(2) and their outer derivations.

pub mod maps;

use crate::divpow::{rank_exps, DividedPowers, DpPoly, MultiIndex, WittElement};
use crate::error::{Error, Result};
use crate::liealg::{LieAlgebraFp, StructureBuilder};
use crate::linalg::{PrimeField, Residue};

pub use maps::{
    enlarged_adjoint, general_out_family, partial_power_maps, sl2_triple, translation_pair, OutFamily,
    Sl2Triple, TranslationPair,
};

/// Sign `σ` and involution `i ↦ i'` on `{0, .., 2r-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SigmaPrime {
    r: usize,
}

impl SigmaPrime {
    pub fn new(r: usize) -> Self {
        Self { r }
    }

    pub fn r(self) -> usize {
        self.r
    }

    /// `+1` on the first `r` variables, `-1` on the rest.
    pub fn sigma(self, i: usize) -> i64 {
        if i < self.r {
            1
        } else {
            -1
        }
    }

    pub fn prime(self, i: usize) -> usize {
        if i < self.r {
            i + self.r
        } else {
            i - self.r
        }
    }
}

/// `D_H(x^(a)) = sum_i σ(i) d_i(x^(a)) d_{i'}`.
pub fn d_h(alg: &DividedPowers, a: &MultiIndex, r: usize) -> Result<WittElement> {
    check_even(alg, r)?;
    let f = alg.field();
    let sp = SigmaPrime::new(r);
    let mut out = WittElement::zero();
    for i in 0..alg.m() {
        if let Some(b) = alg.partial(i, a)? {
            out.add_term(f, b, sp.prime(i), f.from_i64(sp.sigma(i)));
        }
    }
    Ok(out)
}

/// `D_H(f)(g)` inside `O(2r;n)`.
pub fn d_h_apply(alg: &DividedPowers, r: usize, f_: &DpPoly, g: &DpPoly) -> Result<DpPoly> {
    check_even(alg, r)?;
    let f = alg.field();
    let sp = SigmaPrime::new(r);
    let mut out = DpPoly::zero();
    for i in 0..alg.m() {
        let a = f_.partial(i, alg)?;
        if a.is_zero() {
            continue;
        }
        let b = g.partial(sp.prime(i), alg)?;
        let mut prod = a.mul(&b, alg)?;
        if sp.sigma(i) < 0 {
            let negated: Vec<_> = prod.terms().iter().map(|(k, &v)| (k.clone(), f.neg(v))).collect();
            prod = DpPoly::zero();
            for (k, v) in negated {
                prod.add_term(f, k, v);
            }
        }
        out = out.add(&prod, f);
    }
    Ok(out)
}

fn check_even(alg: &DividedPowers, r: usize) -> Result<()> {
    if r == 0 || alg.m() != 2 * r {
        return Err(Error::InvalidParameters(format!(
            "Hamiltonian operator needs 2r = {} variables with r >= 1",
            alg.m()
        )));
    }
    Ok(())
}

/// The admissible indices `0 < a < τ(n)` of `H(2r;n)^(2)` in reversed-index
/// lexicographic order, so `D_H(x1) ≺ D_H(x1^2) ≺ D_H(x2) ≺ D_H(x1 x2) ≺ ...`
/// when `n_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianBasis {
    alg: DividedPowers,
    r: usize,
    indices: Vec<MultiIndex>,
}

/// How [`hamiltonian_algebra`] obtains structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Evaluate `D_H(x^(a))` on `x^(b)` inside `O(2r;n)`.
    Oracle,
    /// The two-variable formula [`f_coeff`]; `r = 1` only.
    ClosedForm,
}

impl HamiltonianBasis {
    pub fn new(r: usize, n: &[u32], p: u32) -> Result<Self> {
        if r == 0 || n.len() != 2 * r {
            return Err(Error::InvalidParameters(format!(
                "H(2r;n) needs r >= 1 and 2r entries in n (got r={r}, n={n:?})"
            )));
        }
        let alg = DividedPowers::new(p, n)?;
        let all = alg.indices();
        let last = all.len() - 1;
        let indices = all.into_iter().skip(1).take(last - 1).collect();
        Ok(Self { alg, r, indices })
    }

    pub fn alg(&self) -> &DividedPowers {
        &self.alg
    }

    pub fn field(&self) -> PrimeField {
        self.alg.field()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> &[u32] {
        self.alg.n()
    }

    pub fn tau(&self) -> &[u32] {
        self.alg.tau()
    }

    pub fn sigma_prime(&self) -> SigmaPrime {
        SigmaPrime::new(self.r)
    }

    /// `p^{|n|} - 2`.
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index(&self, k: usize) -> &MultiIndex {
        &self.indices[k]
    }

    /// Basis position of `D_H(x^(a))`, or `None` for excluded or out-of-range `a`.
    pub fn position(&self, exps: &[u32]) -> Option<usize> {
        if exps.len() != self.alg.m() || exps.iter().zip(self.tau()).any(|(e, t)| e > t) {
            return None;
        }
        let k = rank_exps(exps, self.tau());
        (k != 0 && k != self.alg.dim() - 1).then(|| k - 1)
    }

    pub fn position_signed(&self, exps: &[i64]) -> Option<usize> {
        let e = self.alg.try_index(exps)?;
        self.position(e.exps())
    }

    pub fn label(&self, k: usize) -> String {
        format!("D_H({})", self.indices[k])
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|k| self.label(k)).collect()
    }

    /// Vector field of basis element `k`.
    pub fn vector_field(&self, k: usize) -> WittElement {
        d_h(&self.alg, &self.indices[k], self.r).expect("shape checked at construction")
    }

    pub fn algebra(&self, method: Method) -> Result<LieAlgebraFp> {
        match method {
            Method::Oracle => self.oracle_algebra(),
            Method::ClosedForm => self.closed_form_algebra(),
        }
    }

    fn oracle_algebra(&self) -> Result<LieAlgebraFp> {
        let mut b = StructureBuilder::new(self.field(), self.labels());
        for (s, a) in self.indices.iter().enumerate() {
            let fa = DpPoly::monomial(a.clone());
            for (t, c) in self.indices.iter().enumerate().skip(s + 1) {
                let g = d_h_apply(&self.alg, self.r, &fa, &DpPoly::monomial(c.clone()))?;
                for (e, &v) in g.terms() {
                    if let Some(k) = self.position(e.exps()) {
                        b.add(s, t, k, v);
                    }
                }
            }
        }
        b.build()
    }

    fn closed_form_algebra(&self) -> Result<LieAlgebraFp> {
        if self.r != 1 {
            return Err(Error::InvalidParameters(
                "the closed-form structure constants cover r = 1 only".into(),
            ));
        }
        let p = self.field().p();
        let mut b = StructureBuilder::new(self.field(), self.labels());
        for (s, x) in self.indices.iter().enumerate() {
            let (a, bb) = (x.exps()[0], x.exps()[1]);
            for (t, y) in self.indices.iter().enumerate().skip(s + 1) {
                let (c, d) = (y.exps()[0], y.exps()[1]);
                let target = [i64::from(a + c) - 1, i64::from(bb + d) - 1];
                if let Some(k) = self.position_signed(&target) {
                    b.add(s, t, k, f_coeff(a, bb, c, d, p));
                }
            }
        }
        b.build()
    }
}

/// `H(2r;n)^(2)` over GF(p).
pub fn hamiltonian_algebra(r: usize, n: &[u32], p: u32, method: Method) -> Result<LieAlgebraFp> {
    HamiltonianBasis::new(r, n, p)?.algebra(method)
}

/// Coefficient of `D_H(x1^(a+c-1) x2^(b+d-1))` in `[D_H(x1^(a) x2^(b)), D_H(x1^(c) x2^(d))]`:
/// `e_a e_d C(a+c-1, a-1) C(b+d-1, d-1) - e_b e_c C(a+c-1, c-1) C(b+d-1, b-1)`
/// with `e_k = 0` for `k = 0` and `1` otherwise.
pub fn f_coeff(a: u32, b: u32, c: u32, d: u32, p: u8) -> Residue {
    let f = PrimeField::new(u32::from(p)).expect("valid prime");
    let bin = |x: u32, y: u32| f.binom(u64::from(x), u64::from(y));
    let first = if a > 0 && d > 0 {
        f.mul(bin(a + c - 1, a - 1), bin(b + d - 1, d - 1))
    } else {
        0
    };
    let second = if b > 0 && c > 0 {
        f.mul(bin(a + c - 1, c - 1), bin(b + d - 1, b - 1))
    } else {
        0
    };
    f.sub(first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_prime_involution() {
        let sp = SigmaPrime::new(2);
        for i in 0..4 {
            assert_eq!(sp.prime(sp.prime(i)), i);
            assert_eq!(sp.sigma(i) * sp.sigma(sp.prime(i)), -1);
        }
    }

    #[test]
    fn d_h_examples() {
        let alg = DividedPowers::new(3, &[1, 1]).unwrap();
        let f = alg.field();
        let x11 = alg.index(&[1, 1]).unwrap();
        let v = d_h(&alg, &x11, 1).unwrap();
        // x2 d2 - x1 d1
        let mut want = WittElement::zero();
        want.add_term(f, alg.index(&[0, 1]).unwrap(), 1, 1);
        want.add_term(f, alg.index(&[1, 0]).unwrap(), 0, 2);
        assert_eq!(v, want);
        assert!(d_h(&alg, &alg.unit(), 1).unwrap().is_zero());
        let x20 = alg.index(&[2, 0]).unwrap();
        assert_eq!(d_h(&alg, &x20, 1).unwrap(), WittElement::monomial(alg.index(&[1, 0]).unwrap(), 1));
    }

    #[test]
    fn basis_order_and_dims() {
        let h = HamiltonianBasis::new(1, &[1, 1], 3).unwrap();
        assert_eq!(h.dim(), 7);
        assert_eq!(
            h.labels()[..4],
            ["D_H(x1)", "D_H(x1^2)", "D_H(x2)", "D_H(x1 x2)"]
        );
        assert_eq!(h.position(&[0, 0]), None);
        assert_eq!(h.position(&[2, 2]), None);
        assert_eq!(h.position(&[1, 1]), Some(3));
        assert!(HamiltonianBasis::new(1, &[1], 3).is_err());
    }

    #[test]
    fn f_coeff_examples() {
        assert_eq!(f_coeff(1, 0, 0, 1, 3), 1);
        assert_eq!(f_coeff(1, 1, 2, 0, 3), 1);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f_coeff(a, b, a, b, 3), 0);
            }
        }
    }

    #[test]
    fn small_bracket_example() {
        let l = hamiltonian_algebra(1, &[1, 1], 3, Method::Oracle).unwrap();
        // [D_H(x1 x2), D_H(x1^2)] = D_H(x1^2)
        assert_eq!(l.bracket_basis(3, 1), vec![(1, 1)]);
        assert_eq!(l, hamiltonian_algebra(1, &[1, 1], 3, Method::ClosedForm).unwrap());
        assert!(hamiltonian_algebra(2, &[1, 1, 1, 1], 3, Method::ClosedForm).is_err());
    }
}
