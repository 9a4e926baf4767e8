//! Command-line front end behind the `modlie` binary.
//!
//! Exit codes: 0 success, 1 a reproduced row or generator check failed,
//! 2 usage or parameter error, 3 input failed validation (parse or Jacobi),
//! 4 resource ceiling hit, 5 i/o error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::derout::{DerCache, SolveOptions};
use crate::error::Error;
use crate::liealg::{text, DEFAULT_PROBE_SEED, DEFAULT_PROBE_TRIALS};
use crate::reference::{reproduce, Table};
use crate::report::{zassenhaus_report, AlgebraSpec, BuiltAlgebra, Family, OutReport, ReportOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_INPUT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_IO: i32 = 5;

const DEFAULT_MEM_LIMIT: &str = "8G";

#[derive(Debug, Parser)]
#[command(name = "modlie", version, about = "Derivations and outer derivations of modular Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct an algebra and write its structure constants.
    Build {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute Der, Inn and Out and report on Out.
    Analyze {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Structure-constant file to analyze instead of a named family.
        #[arg(short, long, env = "MODLIE_INPUT", conflicts_with = "family")]
        input: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        /// Skip the simplicity probe of Out.
        #[arg(long)]
        no_probe: bool,
        /// Skip the named-derivation checks on Hamiltonian algebras.
        #[arg(long)]
        no_verify: bool,
    },
    /// Recompute a reference table and compare cell by cell.
    Reproduce {
        #[arg(value_parser = parse_table)]
        table: Table,
        /// Also run rows that take minutes rather than seconds.
        #[arg(long, env = "MODLIE_INCLUDE_LARGE")]
        include_large: bool,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// W, H2, psl, sl, br8 or model.
    #[arg(long, env = "MODLIE_FAMILY", value_parser = parse_family)]
    pub family: Option<Family>,
    /// Characteristic.
    #[arg(long, env = "MODLIE_P")]
    pub p: Option<u32>,
    /// Half the number of variables for H2; the number of variables for W.
    #[arg(long, env = "MODLIE_R")]
    pub r: Option<usize>,
    /// Comma list: the n-tuple for W and H2, the matrix size for psl and sl.
    #[arg(long, env = "MODLIE_N", value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Model algebra, e.g. sl2_semi_v2(1) or almost_abelian(5,id,2).
    #[arg(long, env = "MODLIE_MODEL")]
    pub model: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, env = "MODLIE_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the simplicity probe.
    #[arg(long, env = "MODLIE_SEED", default_value_t = DEFAULT_PROBE_SEED)]
    pub seed: u64,
    /// Random vectors tried by the simplicity probe.
    #[arg(long, env = "MODLIE_TRIALS", default_value_t = DEFAULT_PROBE_TRIALS)]
    pub trials: usize,
    /// Solver threads; 0 picks one per core.
    #[arg(long, env = "MODLIE_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// Memory ceiling for the solver, e.g. 8G, 512M or a byte count.
    #[arg(long, env = "MODLIE_MEM_LIMIT", default_value = DEFAULT_MEM_LIMIT, value_parser = parse_bytes)]
    pub mem_limit: usize,
    /// Time ceiling for the solver, e.g. 90, 30s, 20m or 2h.
    #[arg(long, env = "MODLIE_TIME_LIMIT", value_parser = parse_duration)]
    pub time_limit: Option<Duration>,
    /// Directory for cached derivation bases.
    #[arg(long, env = "MODLIE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_table(s: &str) -> Result<Table, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `8G`, `512M`, `64K` (powers of 1024) or a plain byte count.
pub fn parse_bytes(s: &str) -> Result<usize, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1usize << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        Some('T') => (&s[..s.len() - 1], 1 << 40),
        _ => (s, 1),
    };
    let v: f64 = num.trim().parse().map_err(|_| format!("bad size {s:?}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("bad size {s:?}"));
    }
    Ok((v * mult as f64) as usize)
}

/// `90` or `90s`, `20m`, `2h`.
pub fn parse_duration(s: &str) -> Result<Duration, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last() {
        Some('s') => (&s[..s.len() - 1], 1.0),
        Some('m') => (&s[..s.len() - 1], 60.0),
        Some('h') => (&s[..s.len() - 1], 3600.0),
        _ => (s, 1.0),
    };
    let v: f64 = num.parse().map_err(|_| format!("bad duration {s:?}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("bad duration {s:?}"));
    }
    Ok(Duration::from_secs_f64(v * mult))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameters(_) | Error::InvalidModulus(_) => EXIT_USAGE,
        Error::Parse { .. } | Error::JacobiViolation { .. } => EXIT_INVALID_INPUT,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INVALID_INPUT,
    }
}

fn spec_of(a: &AlgebraArgs) -> Result<AlgebraSpec, Error> {
    let family = a
        .family
        .ok_or_else(|| Error::InvalidParameters("--family is required (or --input for analyze)".into()))?;
    AlgebraSpec::from_params(family, a.p, a.r, &a.n, a.model.as_deref())
}

fn emit(output: &Option<PathBuf>, body: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, body).map_err(Error::from),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn report_options(run: &RunArgs, probe: bool, verify: bool) -> Result<ReportOptions, Error> {
    Ok(ReportOptions {
        seed: run.seed,
        probe_trials: run.trials,
        probe,
        verify_generators: verify,
        solve: SolveOptions {
            threads: run.threads,
            mem_limit: Some(run.mem_limit),
            time_limit: run.time_limit,
        },
        cache: run.cache_dir.as_ref().map(DerCache::new).transpose()?,
    })
}

fn render(r: &OutReport, f: Format) -> Result<String, Error> {
    match f {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
        Format::Text => Ok(r.to_text()),
    }
}

fn run_command(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Build { algebra, output } => {
            let spec = spec_of(&algebra)?;
            let b = spec.build()?;
            b.algebra.ensure_lie()?;
            emit(&output, &text::to_text(&b.algebra)?)?;
            eprintln!("{spec}: dim {}, Jacobi identity holds", b.algebra.dim());
            Ok(EXIT_OK)
        }
        Command::Analyze {
            algebra,
            input,
            run,
            no_probe,
            no_verify,
        } => {
            let built = match &input {
                Some(path) => {
                    let s = std::fs::read_to_string(path)?;
                    BuiltAlgebra::custom(text::from_text(&s)?)
                }
                None => spec_of(&algebra)?.build()?,
            };
            let opts = report_options(&run, !no_probe, !no_verify)?;
            let report = zassenhaus_report(&built, &opts)?;
            emit(&run.output, &render(&report, run.format)?)?;
            if !report.complete {
                eprintln!(
                    "incomplete: {}",
                    report.incomplete_reason.as_deref().unwrap_or("resource ceiling")
                );
                return Ok(EXIT_RESOURCE);
            }
            for c in report.generator_checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}", c.name);
            }
            Ok(if report.checks_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Reproduce {
            table,
            include_large,
            run,
        } => {
            let opts = report_options(&run, true, false)?;
            let rep = reproduce(table, include_large, &opts);
            let body = match run.format {
                Format::Json => rep.to_json()?,
                Format::Csv => rep.to_csv()?,
                Format::Text => rep.to_text(),
            };
            emit(&run.output, &body)?;
            Ok(if rep.any_failed() { EXIT_CHECK_FAILED } else { EXIT_OK })
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_command(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::InvalidParameters(_) = e {
                eprintln!(
                    "valid ranges: p prime in 2..=251; W: --n n1,..,nm; H2: --r r --n with 2r entries; \
                     psl/sl: --n size >= 2; model: --model NAME(k)"
                );
            }
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_duration_parsing() {
        assert_eq!(parse_bytes("8G").unwrap(), 8 << 30);
        assert_eq!(parse_bytes("512m").unwrap(), 512 << 20);
        assert_eq!(parse_bytes("1000").unwrap(), 1000);
        assert!(parse_bytes("-1").is_err());
        assert_eq!(parse_duration("20m").unwrap(), Duration::from_secs(1200));
        assert_eq!(parse_duration("1.5").unwrap(), Duration::from_millis(1500));
        assert!(parse_duration("x").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["modlie", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["modlie", "build", "--family", "H2", "--r", "1", "--n", "1"]), EXIT_USAGE);
        assert_eq!(run(["modlie", "build", "--family", "nope"]), EXIT_USAGE);
    }

    #[test]
    fn build_and_analyze_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("h.lie");
        let fs = f.to_str().unwrap();
        assert_eq!(
            run(["modlie", "build", "--family", "H2", "--r", "1", "--n", "1,2", "--p", "3", "-o", fs]),
            EXIT_OK
        );
        let l = text::from_text(&std::fs::read_to_string(&f).unwrap()).unwrap();
        assert_eq!(l.dim(), 25);
        let out = dir.path().join("r.json");
        assert_eq!(
            run(["modlie", "analyze", "--input", fs, "--format", "json", "-o", out.to_str().unwrap()]),
            EXIT_OK
        );
        let r = OutReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.family, Family::Custom);
        assert_eq!(r.out_derived_series, vec![6, 5, 5]);
    }

    #[test]
    fn jacobi_failure_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("bad.lie");
        // [a,b] = c, [a,c] = a, [b,c] = a fails Jacobi
        let body = "modlie-lie 1\np 3\ndim 3\nlabels\na\nb\nc\nbrackets\n0 1 : 2 1\n0 2 : 0 1\n1 2 : 0 1\nend\n";
        std::fs::write(&f, body).unwrap();
        let code = run(["modlie", "analyze", "--input", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_INVALID_INPUT);
    }

    #[test]
    fn resource_ceiling_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.txt");
        let code = run([
            "modlie", "analyze", "--family", "H2", "--n", "1,2", "--mem-limit", "1", "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_RESOURCE);
        assert!(std::fs::read_to_string(&out).unwrap().contains("INCOMPLETE"));
    }
}
