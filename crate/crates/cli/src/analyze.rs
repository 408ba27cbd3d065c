//! Single-matrix analysis.

use invertibility_core::matrix::{
    has_negative_real_eigenvalue, in_cone, inclusion_margin, inner_distortion, outer_distortion, singular_values,
    ConeStatus, InclusionParams, DEFAULT_BAND,
};
use invertibility_core::{Error, SquareMatrix};
use serde::Serialize;

use crate::anchors;
use crate::report::{Record, Status};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
    pub determinant: f64,
    #[serde(rename = "KO")]
    pub ko: Option<f64>,
    #[serde(rename = "KI")]
    pub ki: Option<f64>,
    pub margin: Option<f64>,
    pub margin_error_bound: Option<f64>,
    pub witness: Vec<f64>,
    pub delta: f64,
    #[serde(rename = "K")]
    pub big_k: Option<f64>,
    pub verdict: ConeStatus,
    /// Absent when an eigenvalue is too close to zero to decide.
    pub negative_real_eigenvalue: Option<bool>,
}

/// Parses a row-major JSON array of arrays.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix, String> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|e| format!("matrix is not a JSON array of rows: {e}"))?;
    SquareMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn analyze(
    a: &SquareMatrix,
    delta: f64,
    big_k: Option<f64>,
    certify: bool,
) -> Result<(Analysis, Vec<Record>), Error> {
    let params = InclusionParams::new(delta, big_k)?;
    let s = singular_values(a);
    let det = a.determinant();
    let margin = inclusion_margin(a, 1e-10, certify)?;
    let verdict = in_cone(a, params, DEFAULT_BAND)?;
    let analysis = Analysis {
        n: a.dim(),
        matrix: a.rows(),
        singular_values: s.sigma.clone(),
        determinant: det,
        ko: outer_distortion(a).ok(),
        ki: inner_distortion(a).ok(),
        margin: margin.value.is_finite().then_some(margin.value),
        margin_error_bound: margin.error_bound,
        witness: margin.witness,
        delta,
        big_k,
        verdict: verdict.status,
        negative_real_eigenvalue: has_negative_real_eigenvalue(a).ok(),
    };
    let status = match verdict.status {
        ConeStatus::Inside => Status::Pass,
        ConeStatus::Boundary => Status::Inconclusive,
        ConeStatus::Outside => Status::Fail,
    };
    let mut membership =
        Record::new("analyze-matrix.membership", anchors::CONE, status).with_slack(margin.value - delta);
    if let (Some(k), Some(ko)) = (big_k, analysis.ko) {
        membership = membership.metric("K_slack", k - ko);
    }
    Ok((analysis.clone(), vec![membership, spectrum_record(&analysis), distortion_record(&analysis)]))
}

/// Ordering, sign and `prod sigma = |det A|`.
fn spectrum_record(a: &Analysis) -> Record {
    let s = &a.singular_values;
    let ordered = s.windows(2).all(|w| w[0] >= w[1]) && s.iter().all(|&x| x >= 0.0);
    let scale = s.first().copied().unwrap_or(0.0).powi(a.n as i32).max(f64::MIN_POSITIVE);
    let product: f64 = s.iter().product();
    let err = (product - a.determinant.abs()).abs() / scale;
    let r = Record::from_slack("analyze-matrix.singular-values", anchors::SINGULAR_VALUES, 1e-12 - err)
        .metric("relative_det_error", err);
    if ordered {
        r
    } else {
        r.with_status(Status::Fail)
    }
}

/// `K_O, K_I >= 1` and `K_I <= K_O^(n-1)`; undefined unless `det A > 0`.
fn distortion_record(a: &Analysis) -> Record {
    let name = "analyze-matrix.distortion";
    match (a.ko, a.ki) {
        (Some(ko), Some(ki)) => {
            let rel = 1e-12;
            let m =
                (ko.powi(a.n as i32 - 1) * (1.0 + rel) - ki).min(ko * (1.0 + rel) - 1.0).min(ki * (1.0 + rel) - 1.0);
            Record::from_slack(name, anchors::DISTORTION, m).metric("KO", ko).metric("KI", ki)
        }
        _ => Record::new(name, anchors::DISTORTION, Status::Inconclusive).metric("determinant", a.determinant),
    }
}
