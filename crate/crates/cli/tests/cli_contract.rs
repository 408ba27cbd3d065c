use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use clap::Parser;
use incl_verify::anchors;
use incl_verify::cli::{execute, Cli};
use incl_verify::report::{Report, Status};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_incl-verify"));
    c.env_remove("INCL_VERIFY_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report_of(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn check_golden(file: &str, args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = golden_dir().join(file);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read(&path).expect("golden file present; rerun with UPDATE_GOLDEN=1");
    assert!(out.stdout == expected, "{file} differs from the golden copy");
}

#[test]
fn golden_sweep_tau() {
    check_golden("sweep-tau.json", &["sweep-tau", "--samples", "21"]);
}

#[test]
fn golden_analyze_identity() {
    check_golden("analyze-identity.json", &["analyze-matrix", "[[1,0],[0,1]]"]);
}

#[test]
fn golden_revtri() {
    check_golden("verify-revtri.json", &["verify", "revtri", "--samples", "500", "--seed", "3"]);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["verify", "dcom", "--samples", "3000", "--seed", "11"][..],
        &["verify", "shift-bounds", "--samples", "200", "--n", "3"][..],
        &["example", "case1", "--samples", "900"][..],
        &["example", "case2", "--samples", "400", "--eps", "0.5"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(a.stdout == b.stdout, "{args:?} is not reproducible");
    }
}

#[test]
fn seed_changes_the_sample_but_is_echoed() {
    let a = run(&["verify", "dcom", "--samples", "500", "--seed", "1"]);
    let b = run(&["verify", "dcom", "--samples", "500", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(report_of(&a).config.seed, 1);
    assert_eq!(report_of(&b).config.seed, 2);
}

#[test]
fn seed_falls_back_to_env() {
    let out = bin().args(["verify", "revtri", "--samples", "100"]).env("INCL_VERIFY_SEED", "42").output().unwrap();
    assert_eq!(report_of(&out).config.seed, 42);
    let flag = bin()
        .args(["verify", "revtri", "--samples", "100", "--seed", "5"])
        .env("INCL_VERIFY_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(report_of(&flag).config.seed, 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze-matrix", "[[1,0],[0,1]]"]).status.code(), Some(0));
    assert_eq!(run(&["analyze-matrix", "[[-1,0],[0,-1]]", "--delta", "-0.5"]).status.code(), Some(1));
    assert_eq!(run(&["analyze-matrix", "[[1,0],[0"]).status.code(), Some(2));
    assert_eq!(run(&["analyze-matrix", "[[1,0,0],[0,1]]"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-lemma"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "revtri", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "revtri", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "revtri", "--tol", "nonsense=1"]).status.code(), Some(2));
    assert_eq!(run(&["analyze-matrix", "/nonexistent/matrix.json"]).status.code(), Some(2));
    assert_eq!(run(&["analyze-matrix", "[[1,0],[0,1]]", "--delta", "2"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "revtri", "--n", "9"]).status.code(), Some(3));
    assert_eq!(run(&["sweep-tau", "--distortion", "0.5"]).status.code(), Some(3));
}

#[test]
fn analyze_minus_identity() {
    let out = run(&["analyze-matrix", "[[-1,0],[0,-1]]", "--delta", "-0.5"]);
    let r = report_of(&out);
    let d = r.data.clone().unwrap();
    assert_eq!(d["verdict"], "outside");
    assert_eq!(d["negative_real_eigenvalue"], true);
    assert_eq!(r.record("analyze-matrix.membership").unwrap().status, Status::Fail);
    assert_eq!(r.record("analyze-matrix.distortion").unwrap().status, Status::Pass);
}

#[test]
fn analyze_rotation_like_matrix() {
    let out = run(&["analyze-matrix", "[[0,-2],[1,0]]"]);
    let d = report_of(&out).data.unwrap();
    assert_eq!(d["singular_values"], serde_json::json!([2.0, 1.0]));
    // m = min over angles of -cos t sin t / sqrt(4 sin^2 t + cos^2 t)
    let oracle = (0..200_000)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / 200_000.0;
            -t.cos() * t.sin() / (4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    let m = d["margin"].as_f64().unwrap();
    assert!((m - oracle).abs() < 1e-8 && m <= oracle + 1e-12, "{m} vs {oracle}");
    assert_eq!(d["verdict"], "outside");
}

#[test]
fn matrix_from_file_and_certify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.json");
    std::fs::write(&p, "[[2, 0.5], [0.1, 1]]").unwrap();
    let out = run(&["analyze-matrix", p.to_str().unwrap(), "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    let d = report_of(&out).data.unwrap();
    assert!(d["margin_error_bound"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn csv_tables_have_fixed_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let res = run(&["sweep-tau", "--samples", "11", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert!(first.starts_with("tau,delta,above_threshold\n"));
    assert_eq!(first.lines().count(), 12);
    assert!(dir.path().join("sweep.sweep-K10.csv").exists());

    let out = dir.path().join("ball.csv");
    let res =
        run(&["example", "ball", "--n", "3", "--samples", "64", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let fields = std::fs::read_to_string(&out).unwrap();
    assert!(fields.starts_with("x,y,z,f1,f2,f3,region,margin,KO\n"), "{}", &fields[..60]);
    let integ = std::fs::read_to_string(dir.path().join("ball.integrability-n3.csv")).unwrap();
    assert!(integ.starts_with("q,h,I,increment\n"));
    let liminf = std::fs::read_to_string(dir.path().join("ball.liminf-axis-n3.csv")).unwrap();
    assert!(liminf.starts_with("r,min_ratio\n"));

    let out = dir.path().join("records.csv");
    let res = run(&["verify", "revtri", "--samples", "50", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("name,paper_anchor,status,slack\n"));
}

#[test]
fn tolerance_overrides_are_echoed() {
    let out = run(&["verify", "revtri", "--samples", "50", "--tol", "reverse_triangle=1e-10"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["tolerances"]["reverse_triangle"], 1e-10);
    assert_eq!(v["schema"], 1);
}

#[test]
fn timing_is_opt_in() {
    let plain = run(&["sweep-tau", "--samples", "5"]);
    let timed = run(&["sweep-tau", "--samples", "5", "--timing"]);
    assert!(report_of(&plain).wall_time_s.is_none());
    assert!(report_of(&timed).wall_time_s.unwrap() >= 0.0);
}

fn records_for(args: &[&str]) -> Report {
    let mut full = vec!["incl-verify"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).unwrap();
    execute(&cli).unwrap().report
}

#[test]
fn anchors_come_from_the_fixed_table_and_all_are_used() {
    let runs: &[&[&str]] = &[
        &["analyze-matrix", "[[1,0],[0,1]]"],
        &["verify", "shift-bounds", "--samples", "50"],
        &["verify", "revtri", "--samples", "50"],
        &["verify", "dcom", "--samples", "200"],
        &["verify", "courant-fischer", "--samples", "20"],
        &["verify", "cone-nesting", "--samples", "50"],
        &["verify", "spectral", "--samples", "50"],
        &["example", "case1", "--samples", "400"],
        &["example", "case2", "--samples", "400"],
        &["example", "ball", "--samples", "100"],
        &["example", "power52", "--samples", "50"],
        &["sweep-tau", "--samples", "21"],
    ];
    let mut used = BTreeSet::new();
    for args in runs {
        let r = records_for(args);
        let mut names = BTreeSet::new();
        for rec in &r.records {
            assert!(anchors::is_known(&rec.paper_anchor), "{}: unknown anchor {}", rec.name, rec.paper_anchor);
            assert!(names.insert(rec.name.clone()), "duplicate record {}", rec.name);
            used.insert(rec.paper_anchor.clone());
        }
        let mut sorted = r.records.iter().map(|x| x.name.clone()).collect::<Vec<_>>();
        sorted.sort();
        assert_eq!(sorted, r.records.iter().map(|x| x.name.clone()).collect::<Vec<_>>());
    }
    let unused: Vec<&&str> = anchors::ALL.iter().filter(|a| !used.contains(**a)).collect();
    assert!(unused.is_empty(), "anchors never emitted: {unused:?}");
}

#[test]
fn summary_matches_records_and_exit_code() {
    let r = records_for(&["analyze-matrix", "[[-1,0],[0,-1]]", "--delta", "-0.5"]);
    assert_eq!(r.summary.fail, 1);
    assert_eq!(r.exit_code(), 1);
    let r = records_for(&["verify", "cone-nesting", "--samples", "40"]);
    assert_eq!(r.summary.pass + r.summary.fail + r.summary.inconclusive, r.records.len());
    assert_eq!(r.exit_code(), 0);
}
