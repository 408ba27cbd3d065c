//! The `tau` sweep of the corollary cone level and its sharp threshold.

use invertibility_core::planar::{corollary_delta, tau_for_k, QrParams};
use invertibility_core::Error;
use serde::Serialize;

use crate::anchors;
use crate::config::Tolerances;
use crate::report::{cell, Record, Status, Table};

pub const DEFAULT_DISTORTIONS: [f64; 4] = [1.5, 2.25, 4.0, 10.0];
pub const DEFAULT_GRID: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub delta: f64,
    pub above_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub k: f64,
    pub tau_k: f64,
    /// First grid value with `delta = -1`.
    pub first_below: Option<f64>,
    pub rows: Vec<SweepRow>,
}

/// `delta(tau)` on `tau = i / (points - 1)`.
pub fn sweep(big_k: f64, points: usize) -> Result<Sweep, Error> {
    if points < 2 {
        return Err(Error::BadParam(format!("the tau grid needs at least 2 points, got {points}")));
    }
    let q = QrParams::from_distortion(big_k)?;
    let rows: Vec<SweepRow> = (0..points)
        .map(|i| {
            let tau = i as f64 / (points - 1) as f64;
            let delta = corollary_delta(tau, q.k);
            SweepRow { tau, delta, above_threshold: delta > -1.0 }
        })
        .collect();
    let first_below = rows.iter().find(|r| !r.above_threshold).map(|r| r.tau);
    Ok(Sweep { big_k, k: q.k, tau_k: q.tau, first_below, rows })
}

fn tag(x: f64) -> String {
    format!("{x}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepOutput {
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
    pub sweeps: Vec<Sweep>,
}

pub fn run(distortions: &[f64], points: usize, tol: &Tolerances) -> Result<SweepOutput, Error> {
    let mut records = vec![];
    let mut tables = vec![];
    let mut sweeps = vec![];
    let constants_err = (tau_for_k(1.0)? - 1.0).abs().max((tau_for_k(4.0)? - 0.8).abs());
    records.push(
        Record::from_slack("sweep-tau.constants", anchors::TAU_K, tol.constants - constants_err)
            .metric("max_error", constants_err),
    );
    for &big_k in distortions {
        let s = sweep(big_k, points)?;
        let step = 1.0 / (points - 1) as f64;
        let monotone = s.rows.windows(2).all(|w| w[0].above_threshold || !w[1].above_threshold);
        let name = format!("sweep-tau.K{}.crossing", tag(big_k));
        let record = match s.first_below {
            Some(t) if monotone => {
                let slack = step - (t - s.tau_k);
                let bracketed = t >= s.tau_k && t - step < s.tau_k;
                Record::from_slack(name, anchors::COROLLARY_DELTA, slack)
                    .metric("tau_K", s.tau_k)
                    .metric("first_below", t)
                    .metric("grid_step", step)
                    .with_status(if bracketed { Status::Pass } else { Status::Fail })
            }
            _ => Record::new(name, anchors::COROLLARY_DELTA, Status::Fail).metric("tau_K", s.tau_k),
        };
        records.push(record);
        let mut t = Table::new(format!("sweep-K{}", tag(big_k)), &["tau", "delta", "above_threshold"]);
        for r in &s.rows {
            t.push(vec![cell(Some(r.tau)), cell(Some(r.delta)), r.above_threshold.to_string()]);
        }
        tables.push(t);
        sweeps.push(s);
    }
    Ok(SweepOutput { records, tables, sweeps })
}
