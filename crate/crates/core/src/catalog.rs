//! Reference algebras: sl_n, psl_n, Brown's 8-dimensional algebra, and model
//! algebras for outer derivation algebras.

use std::fmt;

use crate::derout::derivation_algebra;
use crate::error::{Error, Result};
use crate::liealg::{center, derived_series, lower_central_series, LieAlgebraFp, StructureBuilder};
use crate::linalg::{PrimeField, Residue};

/// `sl_n` or `psl_n` together with whether the center was divided out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlPsl {
    pub algebra: LieAlgebraFp,
    /// `true` when the result is a proper quotient of `sl_n`.
    pub quotient_taken: bool,
    /// Set when `psl_n` was requested but `p` does not divide `n`.
    pub center_was_zero: bool,
}

fn elementary_label(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

/// `sl_n` in the basis `E_ij` (`i != j`, row-major) followed by
/// `H_k = E_kk - E_{k+1,k+1}`; with `projective`, the quotient by its center.
pub fn sl_psl(n: usize, p: u32, projective: bool) -> Result<SlPsl> {
    if n < 2 {
        return Err(Error::InvalidParameters("sl_n needs n >= 2".into()));
    }
    let f = PrimeField::new(p)?;
    let mut off = vec![vec![usize::MAX; n]; n];
    let mut labels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off[i][j] = labels.len();
                labels.push(elementary_label(n, i, j));
            }
        }
    }
    let h0 = labels.len();
    labels.extend((1..n).map(|k| format!("H{k}")));
    // basis element as (row, col, value) entries
    let mut mats: Vec<Vec<(usize, usize, Residue)>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                mats.push(vec![(i, j, 1)]);
            }
        }
    }
    for k in 0..n - 1 {
        mats.push(vec![(k, k, 1), (k + 1, k + 1, f.neg(1))]);
    }
    let mut b = StructureBuilder::new(f, labels);
    for x in 0..mats.len() {
        for y in x + 1..mats.len() {
            let mut prod = vec![0 as Residue; n * n];
            for &(i, j, u) in &mats[x] {
                for &(k, l, v) in &mats[y] {
                    if j == k {
                        prod[i * n + l] = f.add(prod[i * n + l], f.mul(u, v));
                    }
                    if l == i {
                        prod[k * n + j] = f.sub(prod[k * n + j], f.mul(u, v));
                    }
                }
            }
            let mut partial: Residue = 0;
            for i in 0..n {
                for j in 0..n {
                    let c = prod[i * n + j];
                    if i != j {
                        b.add(x, y, off[i][j], c);
                    }
                }
                if i + 1 < n {
                    partial = f.add(partial, prod[i * n + i]);
                    b.add(x, y, h0 + i, partial);
                }
            }
        }
    }
    let sl = b.build()?;
    if !projective {
        return Ok(SlPsl {
            algebra: sl,
            quotient_taken: false,
            center_was_zero: false,
        });
    }
    let z = center(&sl);
    if z.is_zero() {
        return Ok(SlPsl {
            algebra: sl,
            quotient_taken: false,
            center_was_zero: true,
        });
    }
    let (q, _) = sl.quotient(&z)?;
    Ok(SlPsl {
        algebra: q,
        quotient_taken: true,
        center_was_zero: false,
    })
}

/// `L / Z(L)`; returns `L` unchanged when the center is zero.
pub fn quotient_by_center(l: &LieAlgebraFp) -> Result<LieAlgebraFp> {
    let z = center(l);
    if z.is_zero() {
        return Ok(l.clone());
    }
    Ok(l.quotient(&z)?.0)
}

/// Brown's 8-dimensional simple algebra over GF(3) in the basis
/// `(K12, K21, K13, K31, K23, K32, H, K)`.
pub fn brown8() -> LieAlgebraFp {
    const TABLE: [(usize, usize, usize, Residue); BROWN8_BRACKETS] = [
        (1, 2, 7, 1),
        (1, 4, 6, 2),
        (1, 5, 3, 1),
        (1, 7, 1, 1),
        (2, 3, 5, 1),
        (2, 5, 8, 1),
        (2, 6, 4, 2),
        (2, 7, 2, 2),
        (2, 8, 6, 2),
        (3, 4, 7, 2),
        (3, 6, 1, 1),
        (3, 7, 3, 2),
        (4, 5, 2, 2),
        (4, 7, 4, 1),
        (5, 6, 7, 1),
        (5, 7, 5, 1),
        (5, 8, 1, 1),
        (6, 7, 6, 2),
    ];
    let f = PrimeField::new(3).expect("3 is prime");
    let labels = ["K12", "K21", "K13", "K31", "K23", "K32", "H", "K"]
        .map(String::from)
        .to_vec();
    let mut b = StructureBuilder::new(f, labels);
    for &(i, j, k, c) in &TABLE {
        b.add(i - 1, j - 1, k - 1, c);
    }
    b.build().expect("fixed table")
}

/// Number of nonzero brackets `[x_i, x_j]`, `i < j`, of [`brown8`].
pub const BROWN8_BRACKETS: usize = 18;

/// `h3` over GF(p): `[e1, e2] = e3`.
pub fn heisenberg(p: u32) -> Result<LieAlgebraFp> {
    let f = PrimeField::new(p)?;
    let mut b = StructureBuilder::new(f, vec!["e1".into(), "e2".into(), "e3".into()]);
    b.add(0, 1, 2, 1);
    b.build()
}

/// Diagonal action of the extra basis vector on the abelian ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    Identity,
    /// `diag(1, ..., 1, -1)`.
    LastNegated,
}

/// Model algebras over GF(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `sl2 ⋉ V(2)` plus `k` abelian summands, basis `e1..e5`.
    Sl2SemiV2 { k: usize },
    /// `h3 ⋊ F` with `diag(1, 1, -1)` plus `k` abelian summands, basis `e1..e4`.
    H3RtimesLine { k: usize },
    /// `F^d ⋊ F` with the given diagonal plus `k` abelian summands; the acting
    /// vector comes right after the ideal.
    AlmostAbelian { d: usize, diag: Diagonal, k: usize },
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Sl2SemiV2 { k } => write!(f, "sl2_semi_v2({k})"),
            ModelKind::H3RtimesLine { k } => write!(f, "h3_rtimes_line({k})"),
            ModelKind::AlmostAbelian { d, diag, k } => {
                let dg = match diag {
                    Diagonal::Identity => "id",
                    Diagonal::LastNegated => "last_negated",
                };
                write!(f, "almost_abelian({d},{dg},{k})")
            }
        }
    }
}

fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

pub fn model_out_algebra(kind: ModelKind) -> Result<LieAlgebraFp> {
    let f = PrimeField::new(3).expect("3 is prime");
    match kind {
        ModelKind::Sl2SemiV2 { k } => {
            let mut b = StructureBuilder::new(f, labels(5 + k));
            for (i, j, t, c) in [
                (1, 2, 3, 1),
                (1, 3, 1, 1),
                (2, 3, 2, 2),
                (3, 4, 4, 1),
                (2, 4, 5, 1),
                (3, 5, 5, 2),
                (1, 5, 4, 1),
            ] {
                b.add(i - 1, j - 1, t - 1, c);
            }
            b.build()
        }
        ModelKind::H3RtimesLine { k } => {
            let mut b = StructureBuilder::new(f, labels(4 + k));
            b.add(0, 1, 2, 1);
            b.add(3, 0, 0, 1);
            b.add(3, 1, 1, 1);
            b.add(3, 2, 2, 2);
            b.build()
        }
        ModelKind::AlmostAbelian { d, diag, k } => {
            if d == 0 {
                return Err(Error::InvalidParameters(
                    "an almost abelian model needs a nonzero ideal".into(),
                ));
            }
            let mut b = StructureBuilder::new(f, labels(d + 1 + k));
            for i in 0..d {
                let c = if diag == Diagonal::LastNegated && i + 1 == d { 2 } else { 1 };
                b.add(d, i, i, c);
            }
            b.build()
        }
    }
}

/// Model for `Out(H(2r;n)^(2))` over GF(3) in the generator order used by
/// the Hamiltonian checks: `E, F, H, V, W, D2,i` for `H(2;(1,n))`, `n >= 2`;
/// `A1, A2, B, C, D..` for `r = 1`, `1 < n1 <= n2`;
/// `A1..A2r, B, C, D..` for `r > 1`, `r ≢ 2 (mod 3)`;
/// `A1..A2r, C, B, D..` for `r ≡ 2 (mod 3)`.
pub fn hamiltonian_out_model(r: usize, n: &[u32]) -> Result<ModelKind> {
    let total: usize = n.iter().map(|&x| x as usize).sum();
    if r == 0 || n.len() != 2 * r {
        return Err(Error::InvalidParameters("need 2r entries in n".into()));
    }
    if r == 1 && n[0] == 1 && n[1] >= 2 {
        return Ok(ModelKind::Sl2SemiV2 { k: n[1] as usize - 1 });
    }
    if r == 1 && 1 < n[0] && n[0] <= n[1] {
        return Ok(ModelKind::H3RtimesLine { k: total - 2 });
    }
    if r > 1 {
        return Ok(match r % 3 {
            0 => ModelKind::AlmostAbelian { d: 2 * r + 1, diag: Diagonal::Identity, k: total - 2 * r },
            1 => ModelKind::AlmostAbelian { d: 2 * r + 1, diag: Diagonal::LastNegated, k: total - 2 * r },
            _ => ModelKind::AlmostAbelian { d: 2 * r, diag: Diagonal::Identity, k: total - 2 * r + 1 },
        });
    }
    Err(Error::InvalidParameters(format!(
        "no model for r = {r}, n = {n:?}"
    )))
}

/// Isomorphism invariants used in place of an isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantProfile {
    pub dim: usize,
    pub derived: Vec<usize>,
    pub lower_central: Vec<usize>,
    pub center: usize,
    pub der: usize,
    pub out: usize,
}

pub fn invariant_profile(l: &LieAlgebraFp) -> Result<InvariantProfile> {
    let d = derivation_algebra(l)?;
    let out = d.dim() - d.inner().dim();
    Ok(InvariantProfile {
        dim: l.dim(),
        derived: derived_series(l).dims(),
        lower_central: lower_central_series(l).dims(),
        center: center(l).dim(),
        der: d.dim(),
        out,
    })
}

/// First field where two profiles differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileComparison {
    Match,
    Mismatch {
        field: &'static str,
        left: String,
        right: String,
    },
}

pub fn compare(a: &InvariantProfile, b: &InvariantProfile) -> ProfileComparison {
    let fields: [(&'static str, String, String); 6] = [
        ("dim", a.dim.to_string(), b.dim.to_string()),
        ("derived", format!("{:?}", a.derived), format!("{:?}", b.derived)),
        ("lower_central", format!("{:?}", a.lower_central), format!("{:?}", b.lower_central)),
        ("center", a.center.to_string(), b.center.to_string()),
        ("der", a.der.to_string(), b.der.to_string()),
        ("out", a.out.to_string(), b.out.to_string()),
    ];
    for (field, left, right) in fields {
        if left != right {
            return ProfileComparison::Mismatch { field, left, right };
        }
    }
    ProfileComparison::Match
}
