//! Singular values, distortion, cone membership, and the bounds satisfied by
//! the shifted matrix `A + lambda I`.

mod margin;
mod spectrum;
mod svd;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, SquareMatrix};

pub use margin::{inclusion_margin, MarginEstimate};
pub use spectrum::{
    characteristic_polynomial, count_negative_real_eigenvalues, has_negative_real_eigenvalue, Poly, ZERO_EIGEN_TOL,
};
pub use svd::{singular_values, SingularSpectrum};

/// Default half-width of the boundary band on the margin.
pub const DEFAULT_BAND: f64 = 1e-9;

/// Relative slack below which a bound counts as violated.
pub const BOUND_SLACK: f64 = 1e-9;

/// `K_O(A) = |A|^n / det A = s1^n / (s1 ... sn)`.
pub fn outer_distortion(a: &SquareMatrix) -> Result<f64> {
    let det = a.determinant();
    if !(det > 0.0) {
        return Err(Error::NonpositiveDeterminant { det });
    }
    let s = singular_values(a);
    Ok(s.sigma.iter().skip(1).map(|&x| s.largest() / x).product())
}

/// `K_I(A) = K_O(A^-1) = (s1 ... sn) / sn^n`.
pub fn inner_distortion(a: &SquareMatrix) -> Result<f64> {
    let det = a.determinant();
    if !(det > 0.0) {
        return Err(Error::NonpositiveDeterminant { det });
    }
    let s = singular_values(a);
    let n = s.len();
    Ok(s.sigma[..n - 1].iter().map(|&x| x / s.smallest()).product())
}

/// Cone level `delta` with an optional distortion cap `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionParams {
    pub delta: f64,
    pub k: Option<f64>,
}

impl InclusionParams {
    pub fn new(delta: f64, k: Option<f64>) -> Result<Self> {
        if !(delta > -1.0 && delta <= 1.0) {
            return Err(Error::BadParam(format!("delta must lie in (-1, 1], got {delta}")));
        }
        if let Some(k) = k {
            if !(k >= 1.0) || !k.is_finite() {
                return Err(Error::BadParam(format!("K must be finite and >= 1, got {k}")));
            }
        }
        Ok(InclusionParams { delta, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeStatus {
    Inside,
    Boundary,
    Outside,
}

impl ConeStatus {
    /// Ternary comparison of `value` against `threshold` (larger is better).
    pub fn classify(value: f64, threshold: f64, band: f64) -> Self {
        if value >= threshold + band {
            ConeStatus::Inside
        } else if value <= threshold - band {
            ConeStatus::Outside
        } else {
            ConeStatus::Boundary
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionVerdict {
    pub margin: f64,
    pub status: ConeStatus,
    pub witness: Vec<f64>,
    /// `K_O(A)`, evaluated only when a distortion cap was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_distortion: Option<f64>,
}

/// Ternary membership in the cone (and, with `K`, its distortion-capped subset).
pub fn in_cone(a: &SquareMatrix, params: InclusionParams, band: f64) -> Result<InclusionVerdict> {
    if !(band > 0.0) {
        return Err(Error::BadParam(format!("band must be positive, got {band}")));
    }
    let m = inclusion_margin(a, (0.1 * band).min(1e-10), false)?;
    let mut status = ConeStatus::classify(m.value, params.delta, band);
    let mut ko = None;
    if let Some(k) = params.k {
        let d = outer_distortion(a)?;
        if d > k * (1.0 + 1e-12) {
            status = ConeStatus::Outside;
        }
        ko = Some(d);
    }
    Ok(InclusionVerdict { margin: m.value, status, witness: m.witness, outer_distortion: ko })
}

/// `A + lambda I`.
pub fn shift(a: &SquareMatrix, lambda: f64) -> Result<SquareMatrix> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::BadParam(format!("lambda must be positive, got {lambda}")));
    }
    Ok(a.add_scalar_identity(lambda))
}

/// `(2 / sqrt(1 - min(delta, 0)^2))^(n - 1)`.
pub fn shift_constant(delta: f64, n: usize) -> f64 {
    (2.0 / angular_factor(delta)).powi(n as i32 - 1)
}

/// `sqrt(1 - min(delta, 0)^2)`.
pub fn angular_factor(delta: f64) -> f64 {
    let d = delta.min(0.0);
    (1.0 - d * d).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub satisfied: bool,
    /// `(rhs - lhs) / |rhs|`; negative means violated.
    pub slack: f64,
}

impl BoundCheck {
    /// Checks `lhs <= rhs` with relative slack.
    fn le(lhs: f64, rhs: f64) -> Self {
        let slack = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { (rhs - lhs) / rhs.abs().max(f64::MIN_POSITIVE) };
        BoundCheck { satisfied: slack >= -BOUND_SLACK, slack }
    }

    fn worst(checks: impl IntoIterator<Item = BoundCheck>) -> Self {
        let slack = checks.into_iter().map(|c| c.slack).fold(f64::INFINITY, f64::min);
        BoundCheck { satisfied: slack >= -BOUND_SLACK, slack }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftBoundsReport {
    pub constant: f64,
    /// `K_O(A + lambda I) <= C K_O(A)`; absent when `A` is singular.
    pub outer: Option<BoundCheck>,
    /// `K_I(A + lambda I) <= C K_I(A)`; absent when `A` is singular.
    pub inner: Option<BoundCheck>,
    /// `|(A + lambda I)^-1| <= 1 / (lambda sqrt(1 - min(delta,0)^2))`.
    pub inverse_norm: BoundCheck,
    /// Per-index two-sided bound on `s_j(A + lambda I)`.
    pub sandwich: BoundCheck,
    /// `det(A + lambda I) > 0`.
    pub shifted_det_positive: bool,
}

impl ShiftBoundsReport {
    pub fn all_satisfied(&self) -> bool {
        self.outer.is_none_or(|c| c.satisfied)
            && self.inner.is_none_or(|c| c.satisfied)
            && self.inverse_norm.satisfied
            && self.sandwich.satisfied
    }

    pub fn worst_slack(&self) -> f64 {
        [self.outer, self.inner, Some(self.inverse_norm), Some(self.sandwich)]
            .into_iter()
            .flatten()
            .map(|c| c.slack)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the distortion, inverse-norm and singular-value bounds for
/// `A + lambda I`, given `A` in the cone of level `delta`.
pub fn verify_shift_bounds(a: &SquareMatrix, delta: f64, lambda: f64) -> Result<ShiftBoundsReport> {
    let margin = inclusion_margin(a, 1e-10, false)?.value;
    verify_shift_bounds_with_margin(a, delta, lambda, margin)
}

/// [`verify_shift_bounds`] with a margin computed by the caller.
pub fn verify_shift_bounds_with_margin(
    a: &SquareMatrix,
    delta: f64,
    lambda: f64,
    margin: f64,
) -> Result<ShiftBoundsReport> {
    if !(delta > -1.0 && delta <= 1.0) {
        return Err(Error::BadParam(format!("delta must lie in (-1, 1], got {delta}")));
    }
    let shifted = shift(a, lambda)?;
    if margin < delta - 1e-9 {
        return Err(Error::NotInCone { margin, delta });
    }
    let n = a.dim();
    let c = shift_constant(delta, n);
    let factor = angular_factor(delta);
    let det = a.determinant();
    if det < 0.0 {
        return Err(Error::NonpositiveDeterminant { det });
    }
    let shifted_det = shifted.determinant();
    let (outer, inner) = if det > 0.0 {
        let (ko, ki) = (outer_distortion(a)?, inner_distortion(a)?);
        let ko_s = outer_distortion(&shifted).unwrap_or(f64::INFINITY);
        let ki_s = inner_distortion(&shifted).unwrap_or(f64::INFINITY);
        (Some(BoundCheck::le(ko_s, c * ko)), Some(BoundCheck::le(ki_s, c * ki)))
    } else {
        (None, None)
    };
    let s = singular_values(a);
    let ss = singular_values(&shifted);
    let inv_norm = 1.0 / ss.smallest();
    let inverse_norm = BoundCheck::le(inv_norm, 1.0 / (lambda * factor));
    let sandwich = BoundCheck::worst((0..n).flat_map(|j| {
        let m = s.sigma[j].max(lambda);
        [BoundCheck::le(factor * m, ss.sigma[j]), BoundCheck::le(ss.sigma[j], 2.0 * m)]
    }));
    Ok(ShiftBoundsReport { constant: c, outer, inner, inverse_norm, sandwich, shifted_det_positive: shifted_det > 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevTriCheck {
    pub holds: bool,
    /// `|u + v|`
    pub lhs: f64,
    /// `sqrt(1 - delta^2) max(|u|, |v|)`
    pub rhs: f64,
    pub slack: f64,
}

/// `|u + v| >= sqrt(1 - delta^2) max(|u|, |v|)` for `<u, v> >= delta |u||v|`.
pub fn reverse_triangle_check(u: &[f64], v: &[f64], delta: f64) -> Result<RevTriCheck> {
    if !(delta > -1.0 && delta <= 0.0) {
        return Err(Error::BadParam(format!("delta must lie in (-1, 0], got {delta}")));
    }
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), actual: v.len() });
    }
    let (nu, nv) = (norm(u), norm(v));
    let inner = dot(u, v);
    let bound = delta * nu * nv;
    if inner < bound {
        return Err(Error::HypothesisViolated { inner, bound });
    }
    let sum: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let lhs = norm(&sum);
    let rhs = (1.0 - delta * delta).sqrt() * nu.max(nv);
    Ok(RevTriCheck { holds: lhs >= rhs - 1e-12, lhs, rhs, slack: lhs - rhs })
}
