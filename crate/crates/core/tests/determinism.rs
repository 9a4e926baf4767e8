use std::process::Command;

use modlie::derout::{derivation_algebra_with, DerCache, SolveOptions};
use modlie::hamiltonian::{hamiltonian_algebra, HamiltonianBasis, Method};
use modlie::report::{zassenhaus_report, AlgebraSpec, OutReport, ReportOptions};

fn threads(n: usize) -> SolveOptions {
    SolveOptions {
        threads: n,
        ..SolveOptions::default()
    }
}

#[test]
fn der_basis_does_not_depend_on_thread_count() {
    for (r, n) in [(1, vec![1, 2]), (1, vec![2, 2]), (2, vec![1, 1, 1, 1])] {
        let l = hamiltonian_algebra(r, &n, 3, Method::Oracle).unwrap();
        let one = derivation_algebra_with(&l, &threads(1)).unwrap();
        for t in [2, 3, 8] {
            let many = derivation_algebra_with(&l, &threads(t)).unwrap();
            assert_eq!(many.subspace(), one.subspace(), "r={r} n={n:?} threads={t}");
        }
    }
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let built = AlgebraSpec::Hamiltonian { r: 1, n: vec![1, 3], p: 3 }.build().unwrap();
    let run = |t| {
        let opts = ReportOptions {
            solve: threads(t),
            ..ReportOptions::default()
        };
        zassenhaus_report(&built, &opts).unwrap().deterministic_json().unwrap()
    };
    let a = run(1);
    assert_eq!(a, run(4));
    assert_eq!(a, run(1));
}

#[test]
fn cache_hits_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = DerCache::new(dir.path()).unwrap();
    let opts = ReportOptions {
        cache: Some(cache.clone()),
        ..ReportOptions::default()
    };
    for spec in [
        AlgebraSpec::Hamiltonian { r: 1, n: vec![1, 2], p: 3 },
        AlgebraSpec::Psl { size: 3, p: 3 },
        AlgebraSpec::Br8,
    ] {
        let built = spec.build().unwrap();
        let fresh = zassenhaus_report(&built, &opts).unwrap();
        let cached = zassenhaus_report(&built, &opts).unwrap();
        assert!(!fresh.telemetry.cache_hit && cached.telemetry.cache_hit, "{spec}");
        assert_eq!(fresh.deterministic_json().unwrap(), cached.deterministic_json().unwrap());
        let key = spec.cache_key();
        let stored = cache.load(&key, &built.algebra).unwrap().unwrap();
        let recomputed = derivation_algebra_with(&built.algebra, &SolveOptions::default()).unwrap();
        assert_eq!(&stored, recomputed.subspace(), "{spec}");
    }
}

#[test]
fn json_round_trips() {
    for spec in [
        AlgebraSpec::Hamiltonian { r: 1, n: vec![2, 2], p: 3 },
        AlgebraSpec::Witt { n: vec![1], p: 3 },
        AlgebraSpec::Br8,
    ] {
        let r = zassenhaus_report(&spec.build().unwrap(), &ReportOptions::default()).unwrap();
        let json = r.to_json().unwrap();
        let back = OutReport::from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json().unwrap(), json);
        // series consistent with the solvable flag
        assert_eq!(r.solvable, Some(r.out_derived_series.last() == Some(&0)));
    }
}

#[test]
fn oracle_and_closed_form_agree() {
    for (r, n) in [(1, vec![1, 1]), (1, vec![1, 2]), (1, vec![2, 2])] {
        let h = HamiltonianBasis::new(r, &n, 3).unwrap();
        let a = h.algebra(Method::Oracle).unwrap();
        let b = h.algebra(Method::ClosedForm).unwrap();
        assert!(a.same_structure(&b), "n={n:?}");
        for j in 0..a.dim() {
            for i in 0..j {
                assert_eq!(a.bracket_basis(i, j), b.bracket_basis(i, j));
            }
        }
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modlie")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn binary_json_is_byte_identical_across_runs_and_threads() {
    let base = ["analyze", "--family", "H2", "--r", "2", "--n", "1,1,1,1", "--format", "json"];
    let strip = |s: &str| OutReport::from_json(s).unwrap().deterministic_json().unwrap();
    let (c1, a) = cli(&[&base[..], &["--threads", "1"]].concat());
    let (c2, b) = cli(&[&base[..], &["--threads", "3"]].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn binary_exit_codes() {
    assert_eq!(cli(&["build", "--family", "br8"]).0, 0);
    assert_eq!(cli(&["build", "--family", "W", "--n", "1", "--p", "4"]).0, 2);
    assert_eq!(cli(&["reproduce", "no_such_table"]).0, 2);
    let (code, out) = cli(&["reproduce", "newtype_survey", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.contains("Br_8,PASS")));
    let (code, _) = cli(&["analyze", "--input", "/nonexistent/file.lie"]);
    assert_eq!(code, 5);
}

#[test]
fn env_overrides_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_modlie"))
        .args(["build"])
        .env("MODLIE_FAMILY", "W")
        .env("MODLIE_N", "1")
        .env("MODLIE_P", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let l = modlie::liealg::text::from_text(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(l.dim(), 3);
}
