//! Seeded property suites over random matrices, vector pairs and planar
//! derivative triples.
//!
//! Sample `i` of a suite always draws from its own stream, so results do not
//! depend on how the work is scheduled across threads.

use invertibility_core::linalg::{dot, norm};
use invertibility_core::matrix::{
    has_negative_real_eigenvalue, in_cone, inclusion_margin, reverse_triangle_check, singular_values,
    verify_shift_bounds_with_margin, BoundCheck, ConeStatus, InclusionParams, DEFAULT_BAND,
};
use invertibility_core::planar::{
    closed_form_first, cond_closed_form, cond_membership, cond_sector, sector_expression, ComplexDerivatives,
};
use invertibility_core::rng::{split_rng, uniform_matrix, unit_vector, SuiteRng};
use invertibility_core::{Error, SquareMatrix};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::anchors;
use crate::config::Tolerances;
use crate::report::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Lemma {
    ShiftBounds,
    Revtri,
    Dcom,
    CourantFischer,
    ConeNesting,
    Spectral,
}

impl Lemma {
    pub fn id(self) -> &'static str {
        match self {
            Lemma::ShiftBounds => "shift-bounds",
            Lemma::Revtri => "revtri",
            Lemma::Dcom => "dcom",
            Lemma::CourantFischer => "courant-fischer",
            Lemma::ConeNesting => "cone-nesting",
            Lemma::Spectral => "spectral",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Lemma::ShiftBounds | Lemma::Spectral => 10_000,
            Lemma::Revtri | Lemma::Dcom => 100_000,
            Lemma::CourantFischer => 1_000,
            Lemma::ConeNesting => 4_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub seed: u64,
    pub samples: usize,
    /// Restricts matrix suites to one dimension; otherwise `n = 2, 3`.
    pub n: Option<usize>,
    pub tol: Tolerances,
}

pub const SHIFT_LAMBDAS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

/// Stream for sample `i` of suite `tag` in dimension `n`.
fn stream(seed: u64, tag: u64, n: usize, i: usize) -> SuiteRng {
    split_rng(seed, (tag << 56) | ((n as u64) << 48) | i as u64)
}

pub fn run(lemma: Lemma, p: &SuiteParams) -> Result<Vec<Record>, Error> {
    if let Some(n) = p.n {
        if !(2..=6).contains(&n) {
            return Err(Error::InvalidDimension(n));
        }
    }
    Ok(match lemma {
        Lemma::ShiftBounds => dims(p).into_iter().flat_map(|n| shift_bounds(p, n)).collect(),
        Lemma::Revtri => vec![revtri(p)],
        Lemma::Dcom => dcom(p),
        Lemma::CourantFischer => vec![courant_fischer(p)],
        Lemma::ConeNesting => vec![cone_nesting(p)],
        Lemma::Spectral => dims(p).into_iter().map(|n| spectral(p, n)).collect(),
    })
}

fn dims(p: &SuiteParams) -> Vec<usize> {
    p.n.map_or(vec![2, 3], |n| vec![n])
}

fn matrix_json(a: &SquareMatrix) -> serde_json::Value {
    json!(a.rows())
}

struct Worst {
    slack: f64,
    failures: usize,
    example: Option<serde_json::Value>,
}

impl Worst {
    fn new() -> Self {
        Worst { slack: f64::INFINITY, failures: 0, example: None }
    }

    fn push(&mut self, check: BoundCheck, example: impl FnOnce() -> serde_json::Value) {
        if !check.satisfied {
            self.failures += 1;
        }
        if check.slack < self.slack {
            self.slack = check.slack;
            if !check.satisfied {
                self.example = Some(example());
            }
        }
    }

    fn record(self, name: String, anchor: &str, bound_slack: f64, samples: usize) -> Record {
        Record::from_slack(name, anchor, self.slack + bound_slack)
            .metric("worst_relative_slack", self.slack)
            .metric("failures", self.failures as f64)
            .metric("samples", samples as f64)
            .maybe_counterexample(self.example)
    }
}

/// A matrix drawn by rejection until its margin exceeds `-1` and it is
/// nonsingular, with the number of rejected draws.
fn cone_matrix(rng: &mut SuiteRng, n: usize, resolution: f64) -> (SquareMatrix, f64, usize) {
    let mut rejected = 0;
    loop {
        let a = uniform_matrix(rng, n);
        if a.determinant() == 0.0 || matches!(has_negative_real_eigenvalue(&a), Ok(true)) {
            rejected += 1;
            continue;
        }
        let m = inclusion_margin(&a, resolution, false).expect("dimension is valid").value;
        if m > -1.0 {
            return (a, m, rejected);
        }
        rejected += 1;
    }
}

fn shift_bounds(p: &SuiteParams, n: usize) -> Vec<Record> {
    struct Row {
        a: SquareMatrix,
        margin: f64,
        rejected: usize,
        reports: Vec<Result<invertibility_core::matrix::ShiftBoundsReport, Error>>,
    }
    let rows: Vec<Row> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(p.seed, 1, n, i);
            let (a, margin, rejected) = cone_matrix(&mut rng, n, p.tol.margin_resolution);
            let delta = margin.min(0.0);
            let reports =
                SHIFT_LAMBDAS.iter().map(|&l| verify_shift_bounds_with_margin(&a, delta, l, margin)).collect();
            Row { a, margin, rejected, reports }
        })
        .collect();
    let (mut outer, mut inner, mut inverse, mut sandwich) = (Worst::new(), Worst::new(), Worst::new(), Worst::new());
    let mut det_failures = 0;
    let mut det_example = None;
    let mut min_det = f64::INFINITY;
    let mut errors = 0;
    for (i, row) in rows.iter().enumerate() {
        for (&lambda, rep) in SHIFT_LAMBDAS.iter().zip(&row.reports) {
            let ex = || json!({ "index": i, "lambda": lambda, "margin": row.margin, "matrix": matrix_json(&row.a) });
            let rep = match rep {
                Ok(r) => r,
                Err(e) => {
                    errors += 1;
                    let mut v = ex();
                    v["error"] = json!(e.to_string());
                    outer.failures += 1;
                    outer.slack = f64::NEG_INFINITY;
                    outer.example.get_or_insert(v);
                    continue;
                }
            };
            if let Some(c) = rep.outer {
                outer.push(c, ex);
            }
            if let Some(c) = rep.inner {
                inner.push(c, ex);
            }
            inverse.push(rep.inverse_norm, ex);
            sandwich.push(rep.sandwich, ex);
            let shifted = row.a.add_scalar_identity(lambda);
            let normalized = shifted.determinant() / singular_values(&shifted).largest().powi(n as i32);
            min_det = min_det.min(normalized);
            if !rep.shifted_det_positive {
                det_failures += 1;
                det_example.get_or_insert_with(ex);
            }
        }
    }
    let rejected: usize = rows.iter().map(|r| r.rejected).sum();
    let prefix = format!("shift-bounds.n{n}");
    let slack = p.tol.bound_slack;
    let mut records = vec![
        outer.record(format!("{prefix}.outer-distortion"), anchors::SHIFT_OUTER, slack, p.samples),
        inner.record(format!("{prefix}.inner-distortion"), anchors::SHIFT_INNER, slack, p.samples),
        inverse.record(format!("{prefix}.inverse-norm"), anchors::SHIFT_INVERSE, slack, p.samples),
        sandwich.record(format!("{prefix}.singular-value-sandwich"), anchors::SHIFT_SANDWICH, slack, p.samples),
        Record::from_count(format!("{prefix}.shifted-determinant"), anchors::SHIFT_DET, det_failures)
            .with_slack(min_det)
            .metric("samples", p.samples as f64)
            .maybe_counterexample(det_example),
    ];
    for r in &mut records {
        r.metrics.insert("rejected_draws".into(), rejected as f64);
        r.metrics.insert("lambdas".into(), SHIFT_LAMBDAS.len() as f64);
        if errors > 0 {
            r.metrics.insert("errors".into(), errors as f64);
        }
    }
    records
}

fn revtri(p: &SuiteParams) -> Record {
    let results: Vec<(f64, usize, serde_json::Value)> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(p.seed, 2, 0, i);
            let mut rejected = 0;
            loop {
                let n = p.n.unwrap_or_else(|| rng.gen_range(2..=6));
                let delta: f64 = rng.gen_range(-0.999..=0.0);
                let u: Vec<f64> = unit_vector(&mut rng, n).into_iter().map(|x| x * rng.gen_range(0.1..3.0)).collect();
                let v: Vec<f64> = unit_vector(&mut rng, n).into_iter().map(|x| x * rng.gen_range(0.1..3.0)).collect();
                if dot(&u, &v) < delta * norm(&u) * norm(&v) {
                    rejected += 1;
                    continue;
                }
                let c = reverse_triangle_check(&u, &v, delta).expect("hypothesis was checked");
                break (c.slack, rejected, json!({ "index": i, "u": u, "v": v, "delta": delta }));
            }
        })
        .collect();
    let tol = p.tol.reverse_triangle;
    let worst = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let failures = results.iter().filter(|r| r.0 < -tol).count();
    let rejected: usize = results.iter().map(|r| r.1).sum();
    Record::from_slack("revtri", anchors::REVERSE_TRIANGLE, worst + tol)
        .metric("worst_slack", worst)
        .metric("failures", failures as f64)
        .metric("samples", p.samples as f64)
        .metric("rejected_draws", rejected as f64)
        .maybe_counterexample(results.into_iter().find(|r| r.0 < -tol).map(|r| r.2))
}

fn random_disk(rng: &mut SuiteRng, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if z.norm() <= radius {
            return z;
        }
    }
}

/// Random `(fz, fzbar, delta)` with `|fz|, |fzbar| <= 2` and `|delta| < 0.999`.
pub fn planar_triple(seed: u64, i: usize) -> (ComplexDerivatives, f64) {
    let mut rng = stream(seed, 3, 2, i);
    let d = ComplexDerivatives::new(random_disk(&mut rng, 2.0), random_disk(&mut rng, 2.0));
    (d, rng.gen_range(-0.999..0.999))
}

fn near_threshold(d: &ComplexDerivatives, delta: f64, band: f64) -> bool {
    sector_expression(d).is_some_and(|e| (e - delta.acos()).abs() < band)
}

fn dcom(p: &SuiteParams) -> Vec<Record> {
    #[derive(Default)]
    struct Row {
        excluded: bool,
        closed_form_agrees: bool,
        membership_agrees: bool,
        nonnegative: Option<bool>,
    }
    let band = p.tol.equivalence_band;
    let rows: Vec<Row> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let (d, delta) = planar_triple(p.seed, i);
            let abs = delta.abs();
            let nonnegative =
                (!near_threshold(&d, abs, band)).then(|| closed_form_first(&d, abs) == cond_sector(&d, abs));
            if near_threshold(&d, delta, band) {
                return Row { excluded: true, nonnegative, ..Row::default() };
            }
            let sector = cond_sector(&d, delta);
            let member = cond_membership(&d, delta, p.tol.membership_band).expect("delta lies in (-1, 1)").status
                != ConeStatus::Outside;
            Row {
                excluded: false,
                closed_form_agrees: sector == cond_closed_form(&d, delta),
                membership_agrees: sector == member,
                nonnegative,
            }
        })
        .collect();
    let example = |i: usize, abs: bool| {
        let (d, delta) = planar_triple(p.seed, i);
        json!({ "index": i, "derivatives": d, "delta": if abs { delta.abs() } else { delta } })
    };
    let compared = rows.iter().filter(|r| !r.excluded).count();
    let first = |f: &dyn Fn(&Row) -> bool| rows.iter().position(|r| !r.excluded && !f(r));
    let count = |f: &dyn Fn(&Row) -> bool| rows.iter().filter(|r| !r.excluded && !f(r)).count();
    let cf_fail = count(&|r| r.closed_form_agrees);
    let mem_fail = count(&|r| r.membership_agrees);
    let nn_compared = rows.iter().filter(|r| r.nonnegative.is_some()).count();
    let nn_fail = rows.iter().filter(|r| r.nonnegative == Some(false)).count();
    let nn_first = rows.iter().position(|r| r.nonnegative == Some(false));
    let excluded = (p.samples - compared) as f64;
    vec![
        Record::from_count("dcom.sector-vs-closed-form", anchors::CLOSED_FORM, cf_fail)
            .metric("compared", compared as f64)
            .metric("excluded_band", excluded)
            .maybe_counterexample(first(&|r| r.closed_form_agrees).map(|i| example(i, false))),
        Record::from_count("dcom.sector-vs-membership", anchors::SECTOR, mem_fail)
            .metric("compared", compared as f64)
            .metric("excluded_band", excluded)
            .maybe_counterexample(first(&|r| r.membership_agrees).map(|i| example(i, false))),
        Record::from_count("dcom.nonnegative-delta", anchors::CLOSED_FORM_NONNEGATIVE, nn_fail)
            .metric("compared", nn_compared as f64)
            .metric("excluded_band", (p.samples - nn_compared) as f64)
            .maybe_counterexample(nn_first.map(|i| example(i, true))),
    ]
}

const COURANT_FISCHER_GRID: usize = 10_000;

fn courant_fischer(p: &SuiteParams) -> Record {
    let dirs: Vec<[f64; 2]> = (0..COURANT_FISCHER_GRID)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / COURANT_FISCHER_GRID as f64;
            [t.cos(), t.sin()]
        })
        .collect();
    let errs: Vec<(f64, SquareMatrix)> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let a = uniform_matrix(&mut stream(p.seed, 4, 2, i), 2);
            let s = singular_values(&a);
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for d in &dirs {
                let r = norm(&a.mul_vec(d));
                lo = lo.min(r);
                hi = hi.max(r);
            }
            let err = (lo - s.smallest()).abs().max((hi - s.largest()).abs()) / s.largest();
            (err, a)
        })
        .collect();
    let (worst_i, worst) =
        errs.iter().enumerate().map(|(i, e)| (i, e.0)).fold((0, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
    let slack = p.tol.courant_fischer - worst;
    Record::from_slack("courant-fischer.n2", anchors::COURANT_FISCHER, slack)
        .metric("worst_relative_error", worst)
        .metric("samples", p.samples as f64)
        .metric("grid", COURANT_FISCHER_GRID as f64)
        .maybe_counterexample(
            (slack < 0.0).then(|| json!({ "index": worst_i, "matrix": matrix_json(&errs[worst_i].1) })),
        )
}

fn cone_nesting(p: &SuiteParams) -> Record {
    let band = DEFAULT_BAND;
    let rows: Vec<(bool, Option<serde_json::Value>)> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(p.seed, 5, 0, i);
            let n = p.n.unwrap_or(2 + i % 2);
            let a = uniform_matrix(&mut rng, n);
            let delta: f64 = rng.gen_range(-0.9..0.9);
            let drop: f64 = rng.gen_range(0.0..0.5);
            let lower = delta - 2.0 * band - drop;
            let v = in_cone(&a, InclusionParams::new(delta, None).expect("delta in range"), band).expect("valid");
            if v.status != ConeStatus::Inside || lower <= -1.0 {
                return (false, None);
            }
            let w = in_cone(&a, InclusionParams::new(lower, None).expect("delta in range"), band).expect("valid");
            let bad = w.status == ConeStatus::Outside;
            (true, bad.then(|| json!({ "index": i, "matrix": matrix_json(&a), "delta": delta, "lower": lower })))
        })
        .collect();
    let inside = rows.iter().filter(|r| r.0).count();
    let failures = rows.iter().filter(|r| r.1.is_some()).count();
    Record::from_count("cone-nesting", anchors::CONE_NESTING, failures)
        .metric("samples", p.samples as f64)
        .metric("inside_at_delta", inside as f64)
        .maybe_counterexample(rows.into_iter().find_map(|r| r.1))
}

fn spectral(p: &SuiteParams, n: usize) -> Record {
    enum Outcome {
        Band,
        Undecided,
        Checked(Option<serde_json::Value>),
    }
    let rows: Vec<Outcome> = (0..p.samples)
        .into_par_iter()
        .map(|i| {
            let a = uniform_matrix(&mut stream(p.seed, 6, n, i), n);
            let m = inclusion_margin(&a, p.tol.margin_resolution, false).expect("valid").value;
            if (m + 1.0).abs() <= p.tol.spectral_band {
                return Outcome::Band;
            }
            match has_negative_real_eigenvalue(&a) {
                Err(_) => Outcome::Undecided,
                Ok(neg) => Outcome::Checked(((m > -1.0) == neg).then(
                    || json!({ "index": i, "matrix": matrix_json(&a), "margin": m, "negative_eigenvalue": neg }),
                )),
            }
        })
        .collect();
    let band = rows.iter().filter(|r| matches!(r, Outcome::Band)).count();
    let undecided = rows.iter().filter(|r| matches!(r, Outcome::Undecided)).count();
    let mut checked = 0;
    let mut failures = 0;
    let mut example = None;
    for r in rows {
        if let Outcome::Checked(ex) = r {
            checked += 1;
            if let Some(e) = ex {
                failures += 1;
                example.get_or_insert(e);
            }
        }
    }
    Record::from_count(format!("spectral.n{n}"), anchors::SPECTRAL, failures)
        .metric("samples", p.samples as f64)
        .metric("checked", checked as f64)
        .metric("excluded_band", band as f64)
        .metric("ill_conditioned", undecided as f64)
        .maybe_counterexample(example)
}
