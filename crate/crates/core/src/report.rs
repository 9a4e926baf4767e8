//! Analysis records: naming an algebra, running the full Der/Out analysis and
//! rendering the result as JSON, CSV or text.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::catalog::{brown8, model_out_algebra, sl_psl, Diagonal, ModelKind};
use crate::derout::{derivation_algebra_with, DerCache, DerivationAlgebra, SolveOptions, SolveStats, COMPLEMENT_RULE};
use crate::divpow::witt_algebra;
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianBasis, Method};
use crate::liealg::{derived_series, simplicity_probe, LieAlgebraFp, Simplicity, DEFAULT_PROBE_SEED, DEFAULT_PROBE_TRIALS};
use crate::verify::{hamiltonian_checks, GeneratorCheck};

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIMPLICITY_SCOPE: &str = "over GF(p)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    W,
    H2,
    #[serde(rename = "psl")]
    Psl,
    #[serde(rename = "sl")]
    Sl,
    #[serde(rename = "br8")]
    Br8,
    #[serde(rename = "model")]
    Model,
    /// Read from a structure-constant file.
    #[serde(rename = "custom")]
    Custom,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::W,
        Family::H2,
        Family::Psl,
        Family::Sl,
        Family::Br8,
        Family::Model,
        Family::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::W => "W",
            Family::H2 => "H2",
            Family::Psl => "psl",
            Family::Sl => "sl",
            Family::Br8 => "br8",
            Family::Model => "model",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "unknown family {s:?}; expected one of W, H2, psl, sl, br8, model, custom"
                ))
            })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    /// `sl2_semi_v2`, `sl2_semi_v2(2)`, `h3_rtimes_line(1)`,
    /// `almost_abelian(5,id,2)`, `almost_abelian(5,last_negated,0)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidParameters(format!(
                "bad model {s:?}; expected sl2_semi_v2(k), h3_rtimes_line(k) or almost_abelian(d,id|last_negated,k)"
            ))
        };
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) => {
                let inner = s[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&s[..i], inner.split(',').map(str::trim).collect::<Vec<_>>())
            }
            None => (s, Vec::new()),
        };
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match (name, args.as_slice()) {
            ("sl2_semi_v2", []) => Ok(ModelKind::Sl2SemiV2 { k: 0 }),
            ("sl2_semi_v2", [k]) => Ok(ModelKind::Sl2SemiV2 { k: num(k)? }),
            ("h3_rtimes_line", []) => Ok(ModelKind::H3RtimesLine { k: 0 }),
            ("h3_rtimes_line", [k]) => Ok(ModelKind::H3RtimesLine { k: num(k)? }),
            ("almost_abelian", [d, dg, k]) => {
                let diag = match *dg {
                    "id" => Diagonal::Identity,
                    "last_negated" => Diagonal::LastNegated,
                    _ => return Err(bad()),
                };
                Ok(ModelKind::AlmostAbelian { d: num(d)?, diag, k: num(k)? })
            }
            _ => Err(bad()),
        }
    }
}

/// Parameters as recorded in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    /// Half the number of variables, for `H2`.
    pub r: Option<usize>,
    /// `n`-tuple for `W` and `H2`; `[size]` for `psl` and `sl`.
    pub n: Vec<u32>,
    pub model: Option<String>,
}

/// A named algebra that can be constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraSpec {
    /// `W(m;n)` with `m = n.len()`.
    Witt { n: Vec<u32>, p: u32 },
    Hamiltonian { r: usize, n: Vec<u32>, p: u32 },
    Psl { size: usize, p: u32 },
    Sl { size: usize, p: u32 },
    Br8,
    Model(ModelKind),
}

impl AlgebraSpec {
    /// Builds a spec from loose command-line style parameters.
    pub fn from_params(family: Family, p: Option<u32>, r: Option<usize>, n: &[u32], model: Option<&str>) -> Result<Self> {
        let need_n = |what: &str| -> Result<()> {
            if n.is_empty() {
                Err(Error::InvalidParameters(format!("{what} needs --n")))
            } else {
                Ok(())
            }
        };
        let size = || -> Result<usize> {
            match n {
                [s] if *s >= 2 => Ok(*s as usize),
                _ => Err(Error::InvalidParameters("psl/sl need a single --n >= 2 (matrix size)".into())),
            }
        };
        Ok(match family {
            Family::W => {
                need_n("W")?;
                if let Some(m) = r {
                    if m != n.len() {
                        return Err(Error::InvalidParameters(format!(
                            "W(m;n): m = {m} but n has {} entries",
                            n.len()
                        )));
                    }
                }
                AlgebraSpec::Witt { n: n.to_vec(), p: p.unwrap_or(3) }
            }
            Family::H2 => {
                need_n("H2")?;
                let r = r.unwrap_or(n.len() / 2);
                if r == 0 || n.len() != 2 * r {
                    return Err(Error::InvalidParameters(format!(
                        "H2 needs r >= 1 and exactly 2r entries in --n (got r={r}, n={n:?})"
                    )));
                }
                AlgebraSpec::Hamiltonian { r, n: n.to_vec(), p: p.unwrap_or(3) }
            }
            Family::Psl => AlgebraSpec::Psl { size: size()?, p: p.unwrap_or(3) },
            Family::Sl => AlgebraSpec::Sl { size: size()?, p: p.unwrap_or(3) },
            Family::Br8 => {
                if p.is_some_and(|p| p != 3) {
                    return Err(Error::InvalidParameters("br8 is defined over GF(3)".into()));
                }
                AlgebraSpec::Br8
            }
            Family::Model => {
                if p.is_some_and(|p| p != 3) {
                    return Err(Error::InvalidParameters("model algebras are defined over GF(3)".into()));
                }
                let m = model.ok_or_else(|| Error::InvalidParameters("model needs --model".into()))?;
                AlgebraSpec::Model(m.parse()?)
            }
            Family::Custom => {
                return Err(Error::InvalidParameters("custom algebras are read from a file".into()));
            }
        })
    }

    pub fn family(&self) -> Family {
        match self {
            AlgebraSpec::Witt { .. } => Family::W,
            AlgebraSpec::Hamiltonian { .. } => Family::H2,
            AlgebraSpec::Psl { .. } => Family::Psl,
            AlgebraSpec::Sl { .. } => Family::Sl,
            AlgebraSpec::Br8 => Family::Br8,
            AlgebraSpec::Model(_) => Family::Model,
        }
    }

    pub fn params(&self) -> Params {
        let base = |p: u32, n: Vec<u32>| Params { p, r: None, n, model: None };
        match self {
            AlgebraSpec::Witt { n, p } => base(*p, n.clone()),
            AlgebraSpec::Hamiltonian { r, n, p } => Params { r: Some(*r), ..base(*p, n.clone()) },
            AlgebraSpec::Psl { size, p } | AlgebraSpec::Sl { size, p } => base(*p, vec![*size as u32]),
            AlgebraSpec::Br8 => base(3, Vec::new()),
            AlgebraSpec::Model(k) => Params { model: Some(k.to_string()), ..base(3, Vec::new()) },
        }
    }

    /// Key under which `Der` is cached.
    pub fn cache_key(&self) -> String {
        let pr = self.params();
        format!(
            "{}|p={}|r={:?}|n={:?}|model={:?}|v{}",
            self.family(),
            pr.p,
            pr.r,
            pr.n,
            pr.model,
            CODE_VERSION
        )
    }

    pub fn build(&self) -> Result<BuiltAlgebra> {
        let (algebra, hamiltonian) = match self {
            AlgebraSpec::Witt { n, p } => (witt_algebra(n.len(), n, *p)?, None),
            AlgebraSpec::Hamiltonian { r, n, p } => {
                let h = HamiltonianBasis::new(*r, n, *p)?;
                (h.algebra(Method::Oracle)?, Some(h))
            }
            AlgebraSpec::Psl { size, p } => (sl_psl(*size, *p, true)?.algebra, None),
            AlgebraSpec::Sl { size, p } => (sl_psl(*size, *p, false)?.algebra, None),
            AlgebraSpec::Br8 => (brown8(), None),
            AlgebraSpec::Model(k) => (model_out_algebra(*k)?, None),
        };
        Ok(BuiltAlgebra {
            family: self.family(),
            params: self.params(),
            cache_key: Some(self.cache_key()),
            algebra,
            hamiltonian,
        })
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = |n: &[u32]| n.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            AlgebraSpec::Witt { n, p } => write!(f, "W({};({})) p={p}", n.len(), tuple(n)),
            AlgebraSpec::Hamiltonian { r, n, p } => write!(f, "H({};({}))^(2) p={p}", 2 * r, tuple(n)),
            AlgebraSpec::Psl { size, p } => write!(f, "psl_{size} p={p}"),
            AlgebraSpec::Sl { size, p } => write!(f, "sl_{size} p={p}"),
            AlgebraSpec::Br8 => write!(f, "Br_8 p=3"),
            AlgebraSpec::Model(k) => write!(f, "{k} p=3"),
        }
    }
}

/// An algebra ready for analysis, with enough context to report on it.
#[derive(Debug, Clone)]
pub struct BuiltAlgebra {
    pub family: Family,
    pub params: Params,
    pub algebra: LieAlgebraFp,
    /// Present for Hamiltonian algebras; enables the named-derivation checks.
    pub hamiltonian: Option<HamiltonianBasis>,
    /// `None` disables caching.
    pub cache_key: Option<String>,
}

impl BuiltAlgebra {
    /// Wraps an algebra read from a file.
    pub fn custom(algebra: LieAlgebraFp) -> Self {
        Self {
            family: Family::Custom,
            params: Params {
                p: u32::from(algebra.p()),
                r: None,
                n: Vec::new(),
                model: None,
            },
            cache_key: None,
            algebra,
            hamiltonian: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub seed: u64,
    pub probe_trials: usize,
    /// Run the simplicity probe on `Out`.
    pub probe: bool,
    /// Run the named-derivation checks on Hamiltonian inputs.
    pub verify_generators: bool,
    pub solve: SolveOptions,
    pub cache: Option<DerCache>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_PROBE_SEED,
            probe_trials: DEFAULT_PROBE_TRIALS,
            probe: true,
            verify_generators: true,
            solve: SolveOptions::default(),
            cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub g: usize,
    pub der: Option<usize>,
    pub inn: Option<usize>,
    pub out: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicityVerdict {
    NotSimple,
    ProbablySimple,
    Abelian,
    Skipped,
}

impl SimplicityVerdict {
    pub fn name(self) -> &'static str {
        match self {
            SimplicityVerdict::NotSimple => "not_simple",
            SimplicityVerdict::ProbablySimple => "probably_simple",
            SimplicityVerdict::Abelian => "abelian",
            SimplicityVerdict::Skipped => "skipped",
        }
    }
}

impl From<&Simplicity> for SimplicityVerdict {
    fn from(s: &Simplicity) -> Self {
        match s {
            Simplicity::NotSimple { .. } => SimplicityVerdict::NotSimple,
            Simplicity::ProbablySimple { .. } => SimplicityVerdict::ProbablySimple,
            Simplicity::Abelian => SimplicityVerdict::Abelian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub coeff: u8,
}

/// One nonzero bracket of `Out` basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutBracket {
    pub left: String,
    pub right: String,
    pub terms: Vec<Term>,
}

/// Run-dependent data, kept apart so the rest of a report is reproducible
/// byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Telemetry {
    pub seconds: f64,
    /// Process high-water mark, where the platform reports one.
    pub peak_bytes: Option<u64>,
    pub solver_peak_bytes: usize,
    pub threads: usize,
    pub cache_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutReport {
    pub schema_version: u32,
    pub family: Family,
    pub params: Params,
    /// False when a resource ceiling stopped the analysis.
    pub complete: bool,
    pub incomplete_reason: Option<String>,
    pub dims: Dims,
    pub out_derived_series: Vec<usize>,
    /// `None` only in incomplete reports.
    pub solvable: Option<bool>,
    pub derived_length: Option<usize>,
    pub out_abelian: Option<bool>,
    pub simplicity: SimplicityVerdict,
    pub simplicity_scope: String,
    pub probe_trials: usize,
    pub out_brackets: Vec<OutBracket>,
    pub generator_checks: Vec<GeneratorCheck>,
    pub seed: u64,
    pub code_version: String,
    pub complement_rule: String,
    pub telemetry: Telemetry,
}

impl OutReport {
    /// Every generator check passed (vacuously true without checks).
    pub fn checks_pass(&self) -> bool {
        self.generator_checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: OutReport = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse {
                line: 0,
                message: format!("unsupported schema_version {}", r.schema_version),
            });
        }
        Ok(r)
    }

    /// JSON with the telemetry object removed; identical for identical inputs.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self).map_err(|e| Error::Io(e.to_string()))?;
        if let Some(o) = v.as_object_mut() {
            o.remove("telemetry");
        }
        serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))
    }

    fn csv_row(&self) -> CsvRow {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        CsvRow {
            family: self.family.name().into(),
            p: self.params.p,
            r: opt(self.params.r),
            n: self.params.n.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
            model: self.params.model.clone().unwrap_or_default(),
            complete: self.complete,
            dim_g: self.dims.g,
            dim_der: opt(self.dims.der),
            dim_inn: opt(self.dims.inn),
            dim_out: opt(self.dims.out),
            out_derived_series: join(&self.out_derived_series),
            solvable: self.solvable.map(|b| b.to_string()).unwrap_or_default(),
            derived_length: opt(self.derived_length),
            out_abelian: self.out_abelian.map(|b| b.to_string()).unwrap_or_default(),
            simplicity: self.simplicity.name().into(),
            checks_passed: self.generator_checks.iter().filter(|c| c.passed).count(),
            checks_total: self.generator_checks.len(),
            seed: self.seed,
            code_version: self.code_version.clone(),
            complement_rule: self.complement_rule.clone(),
            seconds: self.telemetry.seconds,
            peak_bytes: self.telemetry.peak_bytes.map(|b| b.to_string()).unwrap_or_default(),
        }
    }

    /// Header plus one row; the column order is [`CSV_COLUMNS`].
    pub fn to_csv(&self) -> Result<String> {
        write_csv(std::iter::once(self.csv_row()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let pr = &self.params;
        let mut head = format!("{} p={}", self.family, pr.p);
        if let Some(r) = pr.r {
            head += &format!(" r={r}");
        }
        if !pr.n.is_empty() {
            head += &format!(" n={:?}", pr.n);
        }
        if let Some(m) = &pr.model {
            head += &format!(" model={m}");
        }
        s += &head;
        s.push('\n');
        let show = |v: Option<usize>| v.map_or("?".to_string(), |x| x.to_string());
        s += &format!(
            "dim g = {}, dim Der = {}, dim Inn = {}, dim Out = {}\n",
            self.dims.g,
            show(self.dims.der),
            show(self.dims.inn),
            show(self.dims.out)
        );
        if !self.complete {
            s += &format!(
                "INCOMPLETE: {}\n",
                self.incomplete_reason.as_deref().unwrap_or("unknown")
            );
            return s;
        }
        s += &format!("Out derived series: {:?}\n", self.out_derived_series);
        match (self.solvable, self.derived_length) {
            (Some(true), Some(k)) => s += &format!("Out is solvable, derived length {k}\n"),
            _ => s += "Out is NOT solvable\n",
        }
        s += &format!(
            "Out simplicity ({}): {}\n",
            self.simplicity_scope,
            self.simplicity.name()
        );
        for b in &self.out_brackets {
            let rhs = b
                .terms
                .iter()
                .map(|t| if t.coeff == 1 { t.label.clone() } else { format!("{} {}", t.coeff, t.label) })
                .collect::<Vec<_>>()
                .join(" + ");
            s += &format!("  [{}, {}] = {rhs}\n", b.left, b.right);
        }
        for c in &self.generator_checks {
            s += &format!("  {} {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name);
        }
        s += &format!("time {:.3} s", self.telemetry.seconds);
        if let Some(b) = self.telemetry.peak_bytes {
            s += &format!(", peak {:.1} MB", b as f64 / 1e6);
        }
        s.push('\n');
        s
    }
}

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 22] = [
    "family",
    "p",
    "r",
    "n",
    "model",
    "complete",
    "dim_g",
    "dim_der",
    "dim_inn",
    "dim_out",
    "out_derived_series",
    "solvable",
    "derived_length",
    "out_abelian",
    "simplicity",
    "checks_passed",
    "checks_total",
    "seed",
    "code_version",
    "complement_rule",
    "seconds",
    "peak_bytes",
];

#[derive(Serialize)]
struct CsvRow {
    family: String,
    p: u32,
    r: String,
    n: String,
    model: String,
    complete: bool,
    dim_g: usize,
    dim_der: String,
    dim_inn: String,
    dim_out: String,
    out_derived_series: String,
    solvable: String,
    derived_length: String,
    out_abelian: String,
    simplicity: String,
    checks_passed: usize,
    checks_total: usize,
    seed: u64,
    code_version: String,
    complement_rule: String,
    seconds: f64,
    peak_bytes: String,
}

fn write_csv<I: IntoIterator<Item = CsvRow>>(rows: I) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Several reports as one CSV table.
pub fn reports_to_csv(reports: &[OutReport]) -> Result<String> {
    write_csv(reports.iter().map(OutReport::csv_row))
}

/// Peak resident set size of this process, from `/proc/self/status`.
pub fn peak_rss_bytes() -> Option<u64> {
    let s = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = s.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn threads_used(opts: &SolveOptions) -> usize {
    if opts.threads == 0 {
        rayon::current_num_threads()
    } else {
        opts.threads
    }
}

fn obtain_der(b: &BuiltAlgebra, opts: &ReportOptions) -> Result<(DerivationAlgebra, bool)> {
    if let (Some(cache), Some(key)) = (&opts.cache, &b.cache_key) {
        if let Some(der) = cache.load(key, &b.algebra)? {
            let d = DerivationAlgebra::from_parts(b.algebra.clone(), der, SolveStats::default())?;
            return Ok((d, true));
        }
    }
    let d = derivation_algebra_with(&b.algebra, &opts.solve)?;
    if let (Some(cache), Some(key)) = (&opts.cache, &b.cache_key) {
        cache.store(key, &b.algebra, d.subspace())?;
    }
    Ok((d, false))
}

/// Full analysis of `b`: `Der`, `Inn`, `Out`, the derived series of `Out`,
/// a simplicity probe of `Out` and, for Hamiltonian inputs, the named
/// derivation checks.
///
/// A resource ceiling hit while solving gives an incomplete report rather than
/// an error. A structure that fails the Jacobi identity is an error.
pub fn zassenhaus_report(b: &BuiltAlgebra, opts: &ReportOptions) -> Result<OutReport> {
    let start = Instant::now();
    b.algebra.ensure_lie()?;
    let mut report = OutReport {
        schema_version: SCHEMA_VERSION,
        family: b.family,
        params: b.params.clone(),
        complete: true,
        incomplete_reason: None,
        dims: Dims {
            g: b.algebra.dim(),
            der: None,
            inn: None,
            out: None,
        },
        out_derived_series: Vec::new(),
        solvable: None,
        derived_length: None,
        out_abelian: None,
        simplicity: SimplicityVerdict::Skipped,
        simplicity_scope: SIMPLICITY_SCOPE.into(),
        probe_trials: opts.probe_trials,
        out_brackets: Vec::new(),
        generator_checks: Vec::new(),
        seed: opts.seed,
        code_version: CODE_VERSION.into(),
        complement_rule: COMPLEMENT_RULE.into(),
        telemetry: Telemetry {
            seconds: 0.0,
            peak_bytes: None,
            solver_peak_bytes: 0,
            threads: threads_used(&opts.solve),
            cache_hit: false,
        },
    };
    let finish = |mut r: OutReport| {
        r.telemetry.seconds = start.elapsed().as_secs_f64();
        r.telemetry.peak_bytes = peak_rss_bytes();
        r
    };
    let (der, hit) = match obtain_der(b, opts) {
        Ok(x) => x,
        Err(Error::ResourceLimit(why)) => {
            report.complete = false;
            report.incomplete_reason = Some(why);
            return Ok(finish(report));
        }
        Err(e) => return Err(e),
    };
    report.telemetry.cache_hit = hit;
    report.telemetry.solver_peak_bytes = der.stats().peak_bytes;
    let out = der.outer_algebra()?;
    report.dims.der = Some(der.dim());
    report.dims.inn = Some(der.inner().dim());
    report.dims.out = Some(out.dim());
    match out.as_lie() {
        Some(o) => {
            let series = derived_series(o);
            report.out_derived_series = series.dims();
            report.solvable = Some(series.reaches_zero());
            report.derived_length = series.length();
            report.out_abelian = Some(o.is_abelian());
            if opts.probe {
                report.simplicity = (&simplicity_probe(o, opts.probe_trials, opts.seed)).into();
            }
            report.out_brackets = o
                .nonzero_brackets()
                .map(|(i, j, terms)| OutBracket {
                    left: o.label(i).into(),
                    right: o.label(j).into(),
                    terms: terms
                        .iter()
                        .map(|&(k, c)| Term {
                            label: o.label(k).into(),
                            coeff: c,
                        })
                        .collect(),
                })
                .collect();
        }
        None => {
            report.out_derived_series = vec![0];
            report.solvable = Some(true);
            report.derived_length = Some(0);
            report.out_abelian = Some(true);
        }
    }
    if opts.verify_generators {
        if let Some(h) = &b.hamiltonian {
            report.generator_checks = hamiltonian_checks(h, &b.algebra, &der, &out)?;
        }
    }
    Ok(finish(report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analyze(spec: AlgebraSpec) -> OutReport {
        zassenhaus_report(&spec.build().unwrap(), &ReportOptions::default()).unwrap()
    }

    #[test]
    fn model_parsing() {
        assert_eq!("sl2_semi_v2".parse::<ModelKind>().unwrap(), ModelKind::Sl2SemiV2 { k: 0 });
        assert_eq!(
            "almost_abelian(5, last_negated, 2)".parse::<ModelKind>().unwrap(),
            ModelKind::AlmostAbelian { d: 5, diag: Diagonal::LastNegated, k: 2 }
        );
        for k in [
            ModelKind::H3RtimesLine { k: 3 },
            ModelKind::AlmostAbelian { d: 4, diag: Diagonal::Identity, k: 1 },
        ] {
            assert_eq!(k.to_string().parse::<ModelKind>().unwrap(), k);
        }
        assert!("sl2_semi_v2(x)".parse::<ModelKind>().is_err());
        assert!("nope".parse::<ModelKind>().is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            assert_eq!(serde_json::to_string(&f).unwrap(), format!("\"{}\"", f.name()));
        }
    }

    #[test]
    fn bad_params_are_rejected() {
        assert!(AlgebraSpec::from_params(Family::H2, Some(3), Some(1), &[1], None).is_err());
        assert!(AlgebraSpec::from_params(Family::Psl, Some(3), None, &[1], None).is_err());
        assert!(AlgebraSpec::from_params(Family::Model, None, None, &[], None).is_err());
        assert!(AlgebraSpec::from_params(Family::W, Some(3), Some(2), &[1], None).is_err());
    }

    #[test]
    fn h211_report() {
        let r = analyze(AlgebraSpec::Hamiltonian { r: 1, n: vec![1, 1], p: 3 });
        assert_eq!(r.dims, Dims { g: 7, der: Some(14), inn: Some(7), out: Some(7) });
        assert_eq!(r.out_derived_series, vec![7, 7]);
        assert_eq!(r.solvable, Some(false));
        assert!(r.checks_pass() && !r.generator_checks.is_empty());
    }

    #[test]
    fn model_sl2_semi_is_perfect() {
        let r = analyze(AlgebraSpec::Model(ModelKind::Sl2SemiV2 { k: 0 }));
        assert_eq!(r.dims.g, 5);
        // perfect: the derived series of the algebra itself is [5, 5]
        let l = model_out_algebra(ModelKind::Sl2SemiV2 { k: 0 }).unwrap();
        assert_eq!(derived_series(&l).dims(), vec![5, 5]);
    }

    #[test]
    fn witt_out_is_zero() {
        let r = analyze(AlgebraSpec::Witt { n: vec![1], p: 3 });
        assert_eq!(r.dims.der, Some(3));
        assert_eq!(r.out_derived_series, vec![0]);
        assert_eq!(r.solvable, Some(true));
    }

    #[test]
    fn formats() {
        let r = analyze(AlgebraSpec::Br8);
        assert_eq!(r.dims.out, Some(2));
        assert_eq!(r.out_abelian, Some(true));
        assert_eq!(OutReport::from_json(&r.to_json().unwrap()).unwrap(), r);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(csv.lines().count(), 2);
        assert!(r.to_text().contains("dim Out = 2"));
    }

    #[test]
    fn resource_limit_gives_partial_report() {
        let b = AlgebraSpec::Hamiltonian { r: 1, n: vec![1, 2], p: 3 }.build().unwrap();
        let mut opts = ReportOptions::default();
        opts.solve.mem_limit = Some(1);
        let r = zassenhaus_report(&b, &opts).unwrap();
        assert!(!r.complete);
        assert!(r.incomplete_reason.is_some());
        assert_eq!(r.dims.der, None);
    }
}
