//! One PASS/FAIL line per acceptance criterion, at full sample sizes.
//!
//! Everything runs inside a single test so the timings are not distorted by
//! other tests sharing the machine.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use clap::Parser;
use incl_verify::cli::{execute, Cli};
use incl_verify::report::{Report, Status};

struct Run {
    args: Vec<&'static str>,
    report: Report,
    elapsed: Duration,
}

fn run(args: &[&'static str]) -> Run {
    let mut full = vec!["incl-verify"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).expect("valid arguments");
    let t = Instant::now();
    let report = execute(&cli).expect("command runs").report;
    Run { args: args.to_vec(), report, elapsed: t.elapsed() }
}

/// Each named record that is missing or not passing.
fn failing(r: &Report, names: &[&str]) -> Vec<String> {
    let mut bad = vec![];
    for n in names {
        match r.record(n) {
            Some(rec) if rec.status == Status::Pass => {}
            Some(rec) => bad.push(format!("{n}={:?}", rec.status)),
            None => bad.push(format!("{n}=missing")),
        }
    }
    bad
}

fn prefixed<'a>(r: &'a Report, prefix: &str) -> Vec<&'a str> {
    r.records.iter().filter(|x| x.name.starts_with(prefix)).map(|x| x.name.as_str()).collect()
}

struct Verdicts(Vec<(usize, bool)>);

impl Verdicts {
    fn add(&mut self, id: usize, title: &str, bad: Vec<String>, detail: String) {
        let ok = bad.is_empty();
        let detail = if ok { detail } else { format!("{detail}; failing: {}", bad.join(", ")) };
        let line = format!("{} criterion {id}: {title} ({detail})\n", if ok { "PASS" } else { "FAIL" });
        let _ = std::io::stderr().write_all(line.as_bytes());
        self.0.push((id, ok));
    }
}

fn within(elapsed: Duration, limit_s: u64, bad: &mut Vec<String>) -> String {
    if elapsed > Duration::from_secs(limit_s) {
        bad.push(format!("runtime {:.1} s over {limit_s} s", elapsed.as_secs_f64()));
    }
    format!("{:.1} s", elapsed.as_secs_f64())
}

#[test]
fn acceptance_criteria() {
    let mut v = Verdicts(vec![]);
    let mut runs = vec![];

    let dcom = run(&["verify", "dcom", "--samples", "100000", "--seed", "7"]);
    let names = ["dcom.sector-vs-closed-form", "dcom.sector-vs-membership", "dcom.nonnegative-delta"];
    let mut bad = failing(&dcom.report, &names);
    let compared = dcom.report.record(names[0]).and_then(|r| r.metrics.get("compared").copied()).unwrap_or(0.0);
    if compared < 1e5 * 0.9 {
        bad.push(format!("only {compared} triples compared"));
    }
    let t = within(dcom.elapsed, 60, &mut bad);
    v.add(1, "planar criteria equivalence on 1e5 triples", bad, format!("{compared} compared, {t}"));
    runs.push(dcom);

    let shift = run(&["verify", "shift-bounds", "--samples", "10000"]);
    let mut names = prefixed(&shift.report, "shift-bounds.n2.");
    names.extend(prefixed(&shift.report, "shift-bounds.n3."));
    let mut bad =
        if names.len() == 10 { failing(&shift.report, &names) } else { vec![format!("{} records", names.len())] };
    let t = within(shift.elapsed, 120, &mut bad);
    v.add(2, "shift bounds for n = 2, 3 and five lambdas", bad, format!("{} records, {t}", names.len()));
    runs.push(shift);

    let sweep = run(&["sweep-tau", "--samples", "200"]);
    let names = [
        "sweep-tau.constants",
        "sweep-tau.K1.5.crossing",
        "sweep-tau.K2.25.crossing",
        "sweep-tau.K4.crossing",
        "sweep-tau.K10.crossing",
    ];
    v.add(3, "sharpness constants and threshold crossings", failing(&sweep.report, &names), "200-point grid".into());
    runs.push(sweep);

    let case1 = run(&["example", "case1", "--k", "0.6", "--samples", "100000"]);
    let names = [
        "case1.beltrami-identity",
        "case1.real-part-bound",
        "case1.symmetry",
        "case1.winding.r0.5",
        "case1.winding.r0.05",
        "case1.collision-pairs",
    ];
    let mut bad = failing(&case1.report, &names);
    let samples = case1.report.record(names[1]).and_then(|r| r.metrics.get("samples").copied()).unwrap_or(0.0);
    if samples < 1e5 {
        bad.push(format!("only {samples} points"));
    }
    let t = within(case1.elapsed, 30, &mut bad);
    v.add(4, "branch example, first case, k = 0.6", bad, format!("{samples} points, {t}"));

    let case2 = run(&["example", "case2"]);
    let mut names = vec![];
    for eps in ["0.25", "0.5", "0.9"] {
        for check in ["interface-continuity", "beltrami-bound", "real-part-bound", "index-origin"] {
            names.push(format!("case2.eps{eps}.{check}"));
        }
    }
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    v.add(
        5,
        "branch example, second case, three epsilons",
        failing(&case2.report, &names),
        format!("{} checks", names.len()),
    );
    runs.push(case2);

    let ball = run(&["example", "ball", "--eps", "0.4", "--samples", "10000"]);
    let mut names = vec![];
    for n in [2, 3] {
        for check in [
            "jacobian-closed-form",
            "finite-differences",
            "margin-floor",
            "integrability.critical",
            "integrability.subcritical",
            "axis-collision",
        ] {
            names.push(format!("ball.n{n}.{check}"));
        }
    }
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    v.add(
        6,
        "ball example, n = 2, 3, eps = 0.4",
        failing(&ball.report, &names),
        format!("{:.1} s", ball.elapsed.as_secs_f64()),
    );
    runs.push(ball);

    let power = run(&["example", "power52", "--samples", "100"]);
    let names = ["power52.monotonicity-negative", "power52.monotonicity-positive", "power52.sign-change"];
    v.add(7, "monotonicity of z^(5/2)", failing(&power.report, &names), "100-point grids".into());
    runs.push(power);

    let names = ["case1.regularized-liminf.lambda0.1", "case1.regularized-liminf.lambda1", "case1.regularized-winding"];
    v.add(8, "regularization probes on the first case", failing(&case1.report, &names), "lambda = 0.1, 1, 10".into());
    runs.push(case1);

    for rest in [
        &["verify", "revtri", "--samples", "100000"][..],
        &["verify", "courant-fischer"][..],
        &["verify", "cone-nesting"][..],
        &["verify", "spectral"][..],
        &["analyze-matrix", "[[0,-2],[1,0]]"][..],
    ] {
        runs.push(run(rest));
    }
    let mut bad = vec![];
    for r in &runs {
        let again = Command::new(env!("CARGO_BIN_EXE_incl-verify"))
            .args(&r.args)
            .env_remove("INCL_VERIFY_SEED")
            .output()
            .expect("binary runs");
        if again.stdout != r.report.to_json().into_bytes() {
            bad.push(r.args.join(" "));
        }
    }
    v.add(9, "byte-identical reruns", bad, format!("{} commands rerun in a fresh process", runs.len()));

    let failed: Vec<usize> = v.0.iter().filter(|x| !x.1).map(|x| x.0).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
