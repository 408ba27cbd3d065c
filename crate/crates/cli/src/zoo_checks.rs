//! Checks on the closed-form example mappings, with their CSV tables.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use invertibility_core::degree::{
    check_witness, collision_search, index_at, liminf_probe, radial_integrability, winding_number, CollisionOutcome,
    LiminfReport,
};
use invertibility_core::linalg::norm;
use invertibility_core::matrix::{angular_factor, inclusion_margin};
use invertibility_core::planar::distortion_from_k;
use invertibility_core::rng::split_rng;
use invertibility_core::zoo::{
    ball_example, branchex_case1, branchex_case2, case2_k, case2_slope, finite_difference_check, monotonicity_check,
    power_half_plane, random_ball_points, sample_field, sample_points, summarize, FieldSample, GridSpec, Mapping,
    PlaneMapping,
};
use invertibility_core::{Error, SquareMatrix};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::anchors;
use crate::config::Tolerances;
use crate::report::{cell, Record, Status, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExampleId {
    Case1,
    Case2,
    Ball,
    Power52,
}

impl ExampleId {
    pub fn id(self) -> &'static str {
        match self {
            ExampleId::Case1 => "case1",
            ExampleId::Case2 => "case2",
            ExampleId::Ball => "ball",
            ExampleId::Power52 => "power52",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            ExampleId::Case1 => 100_000,
            ExampleId::Case2 => 40_000,
            ExampleId::Ball => 10_000,
            ExampleId::Power52 => 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleParams {
    pub seed: u64,
    pub samples: usize,
    pub n: Option<usize>,
    pub k: Option<f64>,
    pub eps: Option<f64>,
    pub lambda: Option<f64>,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExampleOutput {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
}

pub const CASE1_DEFAULT_K: f64 = 0.6;
pub const CASE2_DEFAULT_EPS: [f64; 3] = [0.25, 0.5, 0.9];
pub const BALL_DEFAULT_EPS: f64 = 0.4;
pub const BALL_DEFAULT_DIMS: [usize; 2] = [2, 3];
pub const LIMINF_RADII: [f64; 3] = [0.1, 0.01, 0.001];
pub const REGULARIZATION_LAMBDAS: [f64; 2] = [0.1, 1.0];
/// Regularization large enough to remove the branch point on `|z| = 1/2`.
pub const LARGE_LAMBDA: f64 = 10.0;

pub fn run(id: ExampleId, p: &ExampleParams) -> Result<ExampleOutput, Error> {
    match id {
        ExampleId::Case1 => case1(p),
        ExampleId::Case2 => {
            let eps: Vec<f64> = p.eps.map_or(CASE2_DEFAULT_EPS.to_vec(), |e| vec![e]);
            let mut out = ExampleOutput::default();
            for e in eps {
                let part = case2(p, e)?;
                out.records.extend(part.records);
                out.tables.extend(part.tables);
            }
            Ok(out)
        }
        ExampleId::Ball => {
            let dims: Vec<usize> = p.n.map_or(BALL_DEFAULT_DIMS.to_vec(), |n| vec![n]);
            let mut out = ExampleOutput::default();
            for n in dims {
                let part = ball(p, n, p.eps.unwrap_or(BALL_DEFAULT_EPS))?;
                out.records.extend(part.records);
                out.tables.extend(part.tables);
            }
            Ok(out)
        }
        ExampleId::Power52 => power52(p),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square grid on `[-2, 2]^2` with about `samples` points.
fn plane_grid(samples: usize, exclusion: f64, seed: u64) -> GridSpec {
    let side = ((samples as f64).sqrt().ceil() as usize).max(2);
    GridSpec::square(2.0, side, exclusion, seed)
}

pub fn field_table(name: &str, samples: &[FieldSample]) -> Table {
    let n = samples.first().map_or(2, |s| s.point.len());
    let coords = ["x", "y", "z", "w", "v", "u"];
    let mut header: Vec<String> = coords[..n.min(6)].iter().map(|s| s.to_string()).collect();
    header.extend((1..=n).map(|i| format!("f{i}")));
    header.extend(["region", "margin", "KO"].map(String::from));
    let mut t = Table { name: name.to_string(), header, rows: vec![] };
    for s in samples {
        let mut row: Vec<String> = s.point.iter().map(|x| cell(Some(*x))).collect();
        match &s.value {
            Some(v) => row.extend(v.iter().map(|x| cell(Some(*x)))),
            None => row.extend((0..n).map(|_| String::new())),
        }
        row.push(s.region.as_str().to_string());
        row.push(cell(s.margin));
        row.push(cell(s.ko));
        t.push(row);
    }
    t
}

pub fn liminf_table(name: &str, rep: &LiminfReport) -> Table {
    let mut t = Table::new(name, &["r", "min_ratio"]);
    for row in &rep.rows {
        t.push(vec![cell(Some(row.r)), cell(Some(row.min_ratio))]);
    }
    t
}

fn tag(x: f64) -> String {
    format!("{x}")
}

fn case1(p: &ExampleParams) -> Result<ExampleOutput, Error> {
    let tol = &p.tol;
    let k = p.k.unwrap_or(CASE1_DEFAULT_K);
    let f = branchex_case1(k)?;
    let tau = (1.0 - k * k).sqrt();
    let samples = sample_field(&f, &plane_grid(p.samples, tol.interface_exclusion, p.seed))?;
    let summary = summarize(&samples);

    let mut identity_err = 0.0f64;
    let mut real_slack = f64::INFINITY;
    let mut worst_point = None;
    for s in samples.iter().filter(|s| !s.excluded) {
        let z = c(s.point[0], s.point[1]);
        let d = f.deriv(z)?;
        let e = (d.fzbar.norm() - k * d.fz.norm()).abs() / d.fz.norm().max(1.0);
        identity_err = identity_err.max(e);
        let r = d.fz.re + tau * d.fz.norm();
        if r < real_slack {
            real_slack = r;
            worst_point = Some(s.point.clone());
        }
    }
    let big_k = distortion_from_k(k);
    let max_ko = summary.max_ko.unwrap_or(f64::NAN);
    let used = (summary.total - summary.excluded) as f64;

    let mut symmetry_failures = 0;
    let mut symmetry_example = None;
    for s in &samples {
        let z = c(s.point[0], s.point[1]);
        let fz = f.eval(z)?;
        let even = fz == f.eval(-z)?;
        let mirror = z.re < 0.0 || fz == f.eval(z.conj())?.conj();
        if !(even && mirror) {
            symmetry_failures += 1;
            symmetry_example.get_or_insert_with(|| json!({ "z": [z.re, z.im] }));
        }
    }

    let mut records = vec![
        Record::from_slack("case1.beltrami-identity", anchors::CASE1_BELTRAMI, tol.identity - identity_err)
            .metric("max_relative_error", identity_err)
            .metric("samples", used)
            .metric("excluded", summary.excluded as f64),
        Record::from_slack("case1.real-part-bound", anchors::CASE1_REAL_PART, real_slack + tol.inequality)
            .metric("min_re_fz_plus_tau_abs_fz", real_slack)
            .metric("samples", used)
            .maybe_counterexample((real_slack + tol.inequality < 0.0).then(|| json!({ "point": worst_point }))),
        Record::from_slack("case1.quasiregular", anchors::QUASIREGULAR, big_k + tol.inequality - max_ko)
            .metric("max_KO", max_ko)
            .metric("K", big_k),
        Record::from_count("case1.symmetry", anchors::CASE1_SYMMETRY, symmetry_failures)
            .metric("samples", samples.len() as f64)
            .maybe_counterexample(symmetry_example),
    ];

    for r in [0.5, 0.05] {
        let w = winding_number(&f, c(0.0, 0.0), r, c(0.0, 0.0));
        records.push(winding_record(format!("case1.winding.r{}", tag(r)), anchors::WINDING, w, 2));
    }
    records.push(index_record("case1.index-origin", &f, c(0.0, 0.0), 0.1, 2));

    let mut witness_failures = 0;
    for i in 0..16 {
        let mut rng = split_rng(p.seed, 0xC011 + i);
        let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if check_witness(&f, &[z.re, z.im], &[-z.re, -z.im], tol.collision)?.is_none() && z.norm() > 1e-3 {
            witness_failures += 1;
        }
    }
    records
        .push(Record::from_count("case1.collision-pairs", anchors::COLLISION, witness_failures).metric("pairs", 16.0));
    records.push(collision_record("case1.collision-search", &f, &[-1.0, -1.0], &[1.0, 1.0], p.seed, tol.collision)?);

    let floor = summary.min_margin.unwrap_or(-1.0);
    let mut tables = vec![field_table("fields", &samples)];
    let mut lambdas = REGULARIZATION_LAMBDAS.to_vec();
    if let Some(l) = p.lambda {
        if !lambdas.contains(&l) {
            lambdas.push(l);
        }
    }
    for lambda in lambdas {
        let g = f.regularize(lambda)?;
        let rep = liminf_probe(&g, &[0.0, 0.0], &LIMINF_RADII)?;
        let bound = lambda * angular_factor(floor) / 2.0;
        records.push(
            Record::from_slack(
                format!("case1.regularized-liminf.lambda{}", tag(lambda)),
                anchors::REGULARIZED_LIMINF,
                rep.overall_min - (bound - tol.liminf),
            )
            .metric("min_ratio", rep.overall_min)
            .metric("bound", bound)
            .metric("margin_floor", floor),
        );
        tables.push(liminf_table(&format!("liminf-lambda{}", tag(lambda)), &rep));
    }
    let big = winding_number(&f.regularize(LARGE_LAMBDA)?, c(0.0, 0.0), 0.5, c(0.0, 0.0));
    let zero = winding_number(&f, c(0.0, 0.0), 0.5, c(0.0, 0.0));
    let transition = match (big, zero) {
        (Ok(b), Ok(z)) => {
            let ok = b.winding == 1 && z.winding == 2;
            Record::new(
                "case1.regularized-winding",
                anchors::REGULARIZED_DEGREE,
                if ok { Status::Pass } else { Status::Fail },
            )
            .metric("winding_large_lambda", b.winding as f64)
            .metric("winding_zero_lambda", z.winding as f64)
            .metric("large_lambda", LARGE_LAMBDA)
        }
        (b, z) => Record::new("case1.regularized-winding", anchors::REGULARIZED_DEGREE, Status::Inconclusive)
            .counterexample(json!({ "large": format!("{b:?}"), "zero": format!("{z:?}") })),
    };
    records.push(transition);
    Ok(ExampleOutput { records, tables })
}

fn winding_record(
    name: String,
    anchor: &str,
    w: Result<invertibility_core::degree::WindingReport, Error>,
    expected: i64,
) -> Record {
    match w {
        Ok(r) => Record::from_count(name, anchor, usize::from(r.winding != expected))
            .metric("winding", r.winding as f64)
            .metric("expected", expected as f64)
            .metric("samples_used", r.samples_used as f64)
            .metric("min_boundary_distance", r.min_boundary_distance),
        Err(e) => Record::new(name, anchor, Status::Inconclusive).counterexample(json!({ "error": e.to_string() })),
    }
}

fn index_record(name: &str, f: &PlaneMapping, z: Complex64, r: f64, expected: i64) -> Record {
    match index_at(f, z, r) {
        Ok(i) => Record::from_count(name, anchors::INDEX, usize::from(i != expected))
            .metric("index", i as f64)
            .metric("expected", expected as f64),
        Err(e) => {
            Record::new(name, anchors::INDEX, Status::Inconclusive).counterexample(json!({ "error": e.to_string() }))
        }
    }
}

/// A search that finds nothing is inconclusive, never a pass.
fn collision_record<M: Mapping + ?Sized>(
    name: &str,
    f: &M,
    lo: &[f64],
    hi: &[f64],
    seed: u64,
    tol: f64,
) -> Result<Record, Error> {
    Ok(match collision_search(f, lo, hi, 256, seed, tol)? {
        CollisionOutcome::Found(w) => Record::new(name, anchors::COLLISION, Status::Pass)
            .metric("image_gap", w.image_gap)
            .metric("point_gap", w.point_gap)
            .counterexample(json!({ "x1": w.x1, "x2": w.x2 })),
        CollisionOutcome::NotFound { pairs_tried } => {
            Record::new(name, anchors::COLLISION, Status::Inconclusive).metric("pairs_tried", pairs_tried as f64)
        }
    })
}

/// Largest jump of `f` across the gluing lines of the second example, and the
/// largest gap between its two clause formulas on the upper ray.
fn case2_continuity(f: &PlaneMapping, eps: f64) -> Result<(f64, f64), Error> {
    let d = case2_slope(eps);
    let sector = |z: Complex64| 2.0 * z * z / (z.norm() * (1.0 + d * d).sqrt());
    let wedge = |z: Complex64| c(-eps, 1.0) * z - c(0.0, 1.0) * z.conj();
    let mut jump = 0.0f64;
    let mut formula_gap = 0.0f64;
    let eta = 1e-12;
    for i in 1..=1000 {
        let t = 3.0 * i as f64 / 1000.0;
        for (point, dir) in [(c(-d * t, t), c(-d, 1.0)), (c(-d * t, -t), c(-d, -1.0)), (c(-t, 0.0), c(-1.0, 0.0))] {
            let normal = c(-dir.im, dir.re) / dir.norm();
            let step = normal * eta * t.max(1.0);
            jump = jump.max((f.eval(point + step)? - f.eval(point - step)?).norm());
        }
        let z = c(-d * t, t);
        formula_gap = formula_gap.max((sector(z) - wedge(z)).norm());
    }
    Ok((jump, formula_gap))
}

fn case2(p: &ExampleParams, eps: f64) -> Result<ExampleOutput, Error> {
    let tol = &p.tol;
    let f = branchex_case2(eps)?;
    let k = case2_k(eps);
    let tau = (1.0 - k * k).sqrt();
    let samples = sample_field(&f, &plane_grid(p.samples, tol.interface_exclusion, p.seed))?;
    let summary = summarize(&samples);
    let mut beltrami = f64::INFINITY;
    let mut real = f64::INFINITY;
    for s in samples.iter().filter(|s| !s.excluded) {
        let d = f.deriv(c(s.point[0], s.point[1]))?;
        beltrami = beltrami.min(k * d.fz.norm() - d.fzbar.norm());
        real = real.min(d.fz.re + tau * d.fz.norm());
    }
    let (jump, gap) = case2_continuity(&f, eps)?;
    let prefix = format!("case2.eps{}", tag(eps));
    let used = (summary.total - summary.excluded) as f64;
    let records = vec![
        Record::from_slack(
            format!("{prefix}.interface-continuity"),
            anchors::CASE2_CONTINUITY,
            tol.continuity - jump.max(gap),
        )
        .metric("max_jump", jump)
        .metric("max_formula_gap", gap),
        Record::from_slack(format!("{prefix}.beltrami-bound"), anchors::CASE2_BELTRAMI, beltrami + tol.inequality)
            .metric("min_k_abs_fz_minus_abs_fzbar", beltrami)
            .metric("k", k)
            .metric("samples", used)
            .metric("excluded", summary.excluded as f64),
        Record::from_slack(format!("{prefix}.real-part-bound"), anchors::CASE2_REAL_PART, real + tol.inequality)
            .metric("min_re_fz_plus_tau_abs_fz", real)
            .metric("samples", used),
        index_record(&format!("{prefix}.index-origin"), &f, c(0.0, 0.0), 0.1, 2),
    ];
    Ok(ExampleOutput { records, tables: vec![field_table(&format!("fields-eps{}", tag(eps)), &samples)] })
}

/// The Jacobian of the ball example written out entrywise.
fn ball_jacobian_oracle(x: &[f64], eps: f64) -> SquareMatrix {
    let n = x.len();
    let s = norm(&x[..n - 1]);
    let mut j = SquareMatrix::identity(n);
    for col in 0..n - 1 {
        j.set(n - 1, col, eps * x[col] * x[n - 1] / s);
    }
    j.set(n - 1, n - 1, eps * s);
    j
}

const INTEGRABILITY_CUTOFFS: usize = 20;

fn ball(p: &ExampleParams, n: usize, eps: f64) -> Result<ExampleOutput, Error> {
    let tol = &p.tol;
    let f = ball_example(n, eps)?;
    let points = random_ball_points(p.seed, n, p.samples);
    let samples = sample_points(&f, &points, tol.interface_exclusion);
    struct Row {
        oracle_err: f64,
        fd_ok: Option<bool>,
        margin: f64,
        det: f64,
    }
    let rows: Vec<Option<Row>> = points
        .par_iter()
        .map(|x| {
            let j = f.jacobian(x).ok()?;
            let oracle = ball_jacobian_oracle(x, eps);
            let diff: f64 = j.as_slice().iter().zip(oracle.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let fd_ok = (f.interface_distance(x) >= 1e-3 && norm(x) < 1.0 - 1e-5)
                .then(|| finite_difference_check(&f, x).map(|c| c.passed).unwrap_or(false));
            let margin = inclusion_margin(&j, tol.margin_resolution, false).ok()?.value;
            Some(Row { oracle_err: diff / j.frobenius_norm().max(1.0), fd_ok, margin, det: j.determinant() })
        })
        .collect();
    let used: Vec<&Row> = rows.iter().flatten().collect();
    let oracle_err = used.iter().map(|r| r.oracle_err).fold(0.0, f64::max);
    let fd_checked = used.iter().filter(|r| r.fd_ok.is_some()).count();
    let fd_failures = used.iter().filter(|r| r.fd_ok == Some(false)).count();
    let min_margin = used.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let min_det = used.iter().map(|r| r.det).fold(f64::INFINITY, f64::min);
    let det_failures = used.iter().filter(|r| !(r.det > 0.0)).count();
    let excluded = (points.len() - used.len()) as f64;

    let h: Vec<f64> = (1..=INTEGRABILITY_CUTOFFS as i32).map(|j| 0.5f64.powi(j)).collect();
    let critical_q = n as f64 - 1.0;
    let sub_q = n as f64 - 1.5;
    let critical = radial_integrability(n, critical_q, &h)?;
    let sub = radial_integrability(n, sub_q, &h)?;
    let log2_err = critical.iter().map(|r| (r.increment - LN_2).abs()).fold(0.0, f64::max);
    let last = sub.last().expect("cutoff list is nonempty").increment;
    let decreasing = sub.windows(2).all(|w| w[1].increment < w[0].increment);

    let mut axis = vec![0.0; n];
    axis[n - 1] = 0.3;
    let mut mirror = axis.clone();
    mirror[n - 1] = -0.3;
    let witness = check_witness(&f, &axis, &mirror, tol.collision)?;
    let liminf = liminf_probe(&f, &axis, &LIMINF_RADII)?;

    let prefix = format!("ball.n{n}");
    let records = vec![
        Record::from_slack(format!("{prefix}.jacobian-closed-form"), anchors::BALL_JACOBIAN, tol.identity - oracle_err)
            .metric("max_relative_error", oracle_err)
            .metric("samples", used.len() as f64),
        Record::from_count(format!("{prefix}.finite-differences"), anchors::FINITE_DIFFERENCES, fd_failures)
            .metric("checked", fd_checked as f64),
        Record::from_slack(format!("{prefix}.margin-floor"), anchors::BALL_CONE, min_margin - (-eps - tol.cone_floor))
            .metric("min_margin", min_margin)
            .metric("epsilon", eps)
            .metric("samples", used.len() as f64)
            .metric("excluded", excluded),
        Record::from_count(format!("{prefix}.jacobian-positive"), anchors::BALL_CONE, det_failures)
            .metric("min_det", min_det),
        Record::from_slack(
            format!("{prefix}.integrability.critical"),
            anchors::INTEGRABILITY,
            tol.log2_increment - log2_err,
        )
        .metric("q", critical_q)
        .metric("max_increment_error", log2_err),
        Record::from_slack(
            format!("{prefix}.integrability.subcritical"),
            anchors::INTEGRABILITY,
            if decreasing { tol.vanishing_increment - last } else { -1.0 },
        )
        .metric("q", sub_q)
        .metric("last_increment", last)
        .metric("last_cutoff", *h.last().expect("nonempty")),
        match witness {
            Some(w) => Record::new(format!("{prefix}.axis-collision"), anchors::COLLISION, Status::Pass)
                .metric("image_gap", w.image_gap)
                .metric("point_gap", w.point_gap)
                .counterexample(json!({ "x1": w.x1, "x2": w.x2 })),
            None => Record::new(format!("{prefix}.axis-collision"), anchors::COLLISION, Status::Fail),
        },
    ];
    let mut integ = Table::new(format!("integrability-n{n}"), &["q", "h", "I", "increment"]);
    for (q, rows) in [(sub_q, &sub), (critical_q, &critical)] {
        for r in rows.iter() {
            integ.push(vec![cell(Some(q)), cell(Some(r.h)), cell(Some(r.integral)), cell(Some(r.increment))]);
        }
    }
    let tables = vec![
        field_table(&format!("fields-n{n}"), &samples),
        integ,
        liminf_table(&format!("liminf-axis-n{n}"), &liminf),
    ];
    Ok(ExampleOutput { records, tables })
}

/// Interior grid of `count` points strictly inside `(lo, hi)`.
pub fn open_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|i| lo + (hi - lo) * i as f64 / (count + 1) as f64).collect()
}

fn power52(p: &ExampleParams) -> Result<ExampleOutput, Error> {
    let f = power_half_plane();
    let count = p.samples.max(2);
    let ratio = |t: f64| -> Result<f64, Error> {
        Ok(monotonicity_check(&f, &[t.cos(), t.sin()], &[t.cos(), -t.sin()], 0.0)?.ratio)
    };
    let critical = 2.0 * PI / 5.0;
    let neg: Vec<f64> = open_grid(critical, FRAC_PI_2, count).into_iter().map(ratio).collect::<Result<_, _>>()?;
    let pos: Vec<f64> = open_grid(0.1, critical - 0.01, count).into_iter().map(ratio).collect::<Result<_, _>>()?;
    let max_neg = neg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_pos = pos.iter().copied().fold(f64::INFINITY, f64::min);

    let (lo, hi) = (0.1, FRAC_PI_2 - 0.01);
    let step = (hi - lo) / (count - 1) as f64;
    let thetas: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
    let values: Vec<f64> = thetas.iter().map(|&t| ratio(t)).collect::<Result<_, _>>()?;
    let oracle_mismatch = thetas
        .iter()
        .zip(&values)
        .filter(|(t, v)| {
            let inner = 4.0 * (2.5 * **t).sin() * t.sin();
            inner.abs() > 1e-12 && (inner > 0.0) != (**v > 0.0)
        })
        .count();
    let changes: Vec<usize> = (0..count - 1).filter(|&i| (values[i] > 0.0) != (values[i + 1] > 0.0)).collect();
    let located = match changes.as_slice() {
        [i] => Some(0.5 * (thetas[*i] + thetas[i + 1])),
        _ => None,
    };
    let crossing_slack = located.map_or(-1.0, |t| step - (t - critical).abs());

    let mut table = Table::new("monotonicity", &["theta", "ratio"]);
    for (t, v) in thetas.iter().zip(&values) {
        table.push(vec![cell(Some(*t)), cell(Some(*v))]);
    }
    let records = vec![
        Record::from_slack("power52.monotonicity-negative", anchors::MONOTONICITY, -max_neg)
            .metric("max_ratio", max_neg)
            .metric("grid", count as f64),
        Record::from_slack("power52.monotonicity-positive", anchors::MONOTONICITY, min_pos)
            .metric("min_ratio", min_pos)
            .metric("grid", count as f64),
        Record::from_slack("power52.sign-change", anchors::MONOTONICITY, crossing_slack)
            .metric("sign_changes", changes.len() as f64)
            .metric("grid_step", step)
            .metric("critical_angle", critical)
            .metric("oracle_mismatches", oracle_mismatch as f64)
            .with_status(if oracle_mismatch == 0 && crossing_slack >= 0.0 { Status::Pass } else { Status::Fail }),
    ];
    Ok(ExampleOutput { records, tables: vec![table] })
}
