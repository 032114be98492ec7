use std::path::{Path, PathBuf};
use std::process::Command;

use radiuslab::{
    compare, eval, sharpness, verify, DimRange, EvalConfig, HarnessError, RunConfig, SharpnessConfig, SuiteReport,
};
use radiuslab_core::bounds::parse_bound_list;
use radiuslab_core::ensembles::EnsembleKind;
use radiuslab_core::radius::SweepConfig;
use radiuslab_core::{ComplexMatrix, Error};

fn config(bounds: &str, kind: EnsembleKind, trials: usize) -> RunConfig {
    RunConfig {
        dims: DimRange::new(2, 6).unwrap(),
        trials,
        seed: 17,
        ..RunConfig::new(parse_bound_list(bounds).unwrap(), kind)
    }
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_radiuslab"))
        .args(args)
        .env("RADIUSLAB_THREADS", "2")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn eval_file(path: &Path, bounds: &str) -> SuiteReport {
    let (code, stdout, stderr) = bin(&["eval", "--matrix", path.to_str().unwrap(), "--bounds", bounds]);
    assert!(code == 0 || code == 1, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

#[test]
fn accretive_norm_estimate_passes_everywhere_it_applies() {
    let report = verify(&config("thm8", EnsembleKind::Accretive, 300)).unwrap();
    let b = &report.bounds[0];
    assert_eq!(b.applicable_count, 300);
    assert_eq!(b.pass_count, b.applicable_count);
    assert!(!report.failed);
}

#[test]
fn upper_equivalence_holds_on_ginibre() {
    let report = verify(&config("equiv_upper", EnsembleKind::Ginibre, 100)).unwrap();
    assert_eq!(report.bounds[0].pass_count, 100);
    assert_eq!(report.schema, 1);
    assert_eq!(report.command, "verify");
}

#[test]
fn gated_bound_on_wrong_ensemble_is_skipped_and_exits_zero() {
    let (code, stdout, _) = bin(&[
        "verify",
        "--bounds",
        "ms_acc_dis",
        "--ensemble",
        "ginibre",
        "--dim",
        "3-8",
        "--trials",
        "50",
    ]);
    assert_eq!(code, 0);
    let report: SuiteReport = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report.bounds[0].applicable_count, 0);
    assert_eq!(report.bounds[0].min_slack, None);
}

#[test]
fn summary_counts_are_ordered() {
    let report = verify(&config("all,lemmas", EnsembleKind::Accretive, 30)).unwrap();
    for b in &report.bounds {
        assert!(
            b.pass_count <= b.applicable_count && b.applicable_count <= b.trials,
            "{b:?}"
        );
        assert_eq!(b.trials, 30);
        if b.applicable_count > 0 {
            assert!(b.min_slack.unwrap() <= b.mean_slack.unwrap());
            assert!(b.worst_witness.is_some());
        }
    }
}

#[test]
fn identical_configs_give_identical_reports() {
    let cfg = config("kittaneh03,thm24,lem22@2", EnsembleKind::Ginibre, 40);
    let mut a = verify(&cfg).unwrap();
    let mut b = verify(&cfg).unwrap();
    a.wall_time_seconds = 0.0;
    b.wall_time_seconds = 0.0;
    assert_eq!(a.to_json(), b.to_json());
    let other = verify(&RunConfig { seed: 18, ..cfg }).unwrap();
    assert_ne!(a.bounds[0].min_slack, other.bounds[0].min_slack);
}

#[test]
fn worst_witness_replays_through_eval() {
    let report = verify(&config("heydarbeygi", EnsembleKind::Ginibre, 60)).unwrap();
    let w = report.bounds[0].worst_witness.clone().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "w.json", &w.s.to_json());
    let replay = eval_file(&path, "heydarbeygi").evaluations.unwrap();
    assert_eq!(replay[0].slack, w.slack);
    assert_eq!(replay[0].lhs, w.lhs);
}

#[test]
fn claimed_improvements_never_lose() {
    for (tighter, looser) in [
        ("bp_spectral", "kittaneh03"),
        ("power_mean@0.5", "heydarbeygi"),
        ("cor10", "bp_spectral"),
    ] {
        let report = compare(
            &config("equiv_upper", EnsembleKind::Ginibre, 150),
            tighter.parse().unwrap(),
            looser.parse().unwrap(),
        )
        .unwrap();
        let cmp = report.comparison.unwrap();
        assert_eq!(cmp.violations, 0, "{tighter} vs {looser}");
        assert_eq!(cmp.compared, 150);
        assert!(!report.failed);
    }
}

#[test]
fn incomparable_bounds_are_rejected() {
    let err = compare(
        &config("equiv_upper", EnsembleKind::Ginibre, 5),
        "thm8".parse().unwrap(),
        "kittaneh03".parse().unwrap(),
    )
    .unwrap_err();
    assert!(matches!(err, HarnessError::Core(Error::IncomparableBounds(..))));
}

#[test]
fn equality_cases_are_found_by_the_search() {
    let cfg = RunConfig {
        dims: DimRange::fixed(2),
        ..config("equiv_upper", EnsembleKind::Ginibre, 1)
    };
    for bound in ["power_mean@0.5", "eq16", "equiv_lower"] {
        let report = sharpness(&cfg, bound.parse().unwrap(), &SharpnessConfig::default()).unwrap();
        let s = report.sharpness.unwrap();
        assert!(
            s.best_relative_slack.unwrap() <= 1e-6,
            "{bound}: {:?}",
            s.best_relative_slack
        );
        assert_eq!(s.per_start.len(), 64);
        assert!(!report.failed);
    }
}

#[test]
fn search_on_accretive_estimate_only_reports() {
    let cfg = RunConfig {
        dims: DimRange::new(2, 3).unwrap(),
        ..config("equiv_upper", EnsembleKind::Accretive, 1)
    };
    let budget = SharpnessConfig {
        starts: 8,
        steps: 100,
        ..SharpnessConfig::default()
    };
    let report = sharpness(&cfg, "thm8".parse().unwrap(), &budget).unwrap();
    let s = report.sharpness.unwrap();
    let best = s.best_relative_slack.unwrap();
    assert!(best >= 0.0 && best <= s.per_start[0].initial_relative_slack.unwrap());
    assert!(s.witness.is_some());
}

#[test]
fn eval_reproduces_hand_computed_values() {
    let dir = tempfile::tempdir().unwrap();
    let jordan = write(
        dir.path(),
        "j.json",
        r#"{"rows":2,"cols":2,"data":[[0,0],[1,0],[0,0],[0,0]]}"#,
    );
    let r = &eval_file(&jordan, "kittaneh03").evaluations.unwrap()[0];
    assert!((r.lhs - 0.5).abs() <= 1e-8 && (r.rhs - 0.5).abs() <= 1e-8);

    let identity = write(dir.path(), "i.json", &ComplexMatrix::identity(3).to_json());
    let r = &eval_file(&identity, "equiv_upper").evaluations.unwrap()[0];
    assert_eq!(r.slack, 0.0);

    let shear = write(
        dir.path(),
        "s.json",
        r#"{"rows":2,"cols":2,"data":[[1,0],[2,0],[0,0],[1,0]]}"#,
    );
    let r = &eval_file(&shear, "thm8").evaluations.unwrap()[0];
    assert!(r.applicable && r.holds);
    assert!(r.details.contains_key("intermediate_rhs"));
}

#[test]
fn eval_rejects_malformed_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let short = write(dir.path(), "bad.json", r#"{"rows":2,"cols":2,"data":[[1,0]]}"#);
    let cfg = EvalConfig {
        matrix_path: short.clone(),
        other_path: None,
        bounds: parse_bound_list("equiv_upper").unwrap(),
        tol_rel: 1e-7,
        sweep: SweepConfig::default(),
    };
    assert!(matches!(eval(&cfg), Err(HarnessError::Parse { .. })));
    let (code, _, stderr) = bin(&["eval", "--matrix", short.to_str().unwrap(), "--bounds", "equiv_upper"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error"));
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let (json, csv) = (dir.path().join("r.json"), dir.path().join("r.csv"));
    for (path, format) in [(&json, "json"), (&csv, "csv")] {
        let (code, _, _) = bin(&[
            "verify",
            "--bounds",
            "kittaneh03,cor10,thm8",
            "--dim",
            "2-5",
            "--trials",
            "25",
            "--seed",
            "3",
            "--format",
            format,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let report: SuiteReport = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), report.bounds.len());
    let close = |text: &str, value: Option<f64>| match value {
        None => text.is_empty(),
        Some(v) => {
            let parsed: f64 = text.parse().unwrap();
            parsed == v || (parsed - v).abs() <= 1e-12 * v.abs()
        }
    };
    for (row, b) in rows.iter().zip(&report.bounds) {
        let field = |name: &str| &row[headers.iter().position(|h| h == name).unwrap()];
        assert_eq!(field("bound_id"), b.bound_id);
        assert_eq!(field("applicable_count"), b.applicable_count.to_string());
        assert!(close(field("min_slack"), b.min_slack));
        assert!(close(field("mean_slack"), b.mean_slack));
        assert!(close(field("min_relative_slack"), b.min_relative_slack));
    }
}

#[test]
fn compare_csv_lists_every_trial() {
    let (code, stdout, _) = bin(&[
        "compare",
        "--tighter",
        "cor10",
        "--looser",
        "bp_spectral",
        "--dim",
        "3",
        "--trials",
        "12",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,dim,tighter_rhs,looser_rhs,difference,scale,violation"
    );
    assert_eq!(lines.count(), 12);
}

#[test]
fn bad_arguments_are_errors() {
    assert_eq!(bin(&["verify", "--bounds", "power_mean@2"]).0, 2);
    assert_eq!(bin(&["verify", "--trials", "0", "--bounds", "equiv_upper"]).0, 2);
    assert_eq!(bin(&["verify", "--ensemble", "gue_like"]).0, 2);
    assert_eq!(bin(&["verify", "--dim", "5-2"]).0, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_radiuslab"))
        .args(["verify", "--bounds", "equiv_upper", "--trials", "2"])
        .env("RADIUSLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
