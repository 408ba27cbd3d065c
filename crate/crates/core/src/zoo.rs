//! Closed-form example mappings with exact derivatives.
//!
//! Every mapping implements [`Mapping`], the real-variable view used for
//! sampling and finite-difference checks. Planar mappings additionally expose
//! complex values and Wirtinger derivatives.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, SquareMatrix};
use crate::matrix::{inclusion_margin, outer_distortion};
use crate::planar::ComplexDerivatives;
use crate::rng::split_rng;

/// Finite-difference step.
pub const FD_STEP: f64 = 1e-6;
/// Relative tolerance for finite-difference agreement.
pub const FD_TOL: f64 = 1e-4;
/// Cutoff below which `s(x)` counts as zero in the ball example.
pub const SINGULAR_AXIS_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    Plane,
    Q1,
    Q4,
    Left,
    Axis,
    UpperSector,
    UpperWedge,
    LowerSector,
    LowerWedge,
    Interface,
    Origin,
    RightHalf,
    Ball,
    SingularAxis,
    Outside,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Plane => "PLANE",
            Region::Q1 => "Q1",
            Region::Q4 => "Q4",
            Region::Left => "LEFT",
            Region::Axis => "AXIS",
            Region::UpperSector => "UPPER_SECTOR",
            Region::UpperWedge => "UPPER_WEDGE",
            Region::LowerSector => "LOWER_SECTOR",
            Region::LowerWedge => "LOWER_WEDGE",
            Region::Interface => "INTERFACE",
            Region::Origin => "ORIGIN",
            Region::RightHalf => "RIGHT_HALF",
            Region::Ball => "BALL",
            Region::SingularAxis => "SINGULAR_AXIS",
            Region::Outside => "OUTSIDE",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Real-variable view of a mapping `R^n -> R^n`.
pub trait Mapping: Sync {
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    fn contains(&self, x: &[f64]) -> bool;
    fn eval_real(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn jacobian(&self, x: &[f64]) -> Result<SquareMatrix>;
    fn region(&self, x: &[f64]) -> Region;
    /// Distance to the nearest set where the derivative is undefined or the
    /// formula changes (`+inf` for smooth mappings).
    fn interface_distance(&self, x: &[f64]) -> f64;
}

/// Planar example mappings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum PlaneMapping {
    /// `z -> fz z + fzbar conj(z)`.
    Linear {
        #[serde(with = "crate::planar::complex_json")]
        fz: Complex64,
        #[serde(with = "crate::planar::complex_json")]
        fzbar: Complex64,
    },
    /// Quadratic map glued from `a z^2 + b conj(z)^2` on the first quadrant.
    Case1 {
        k: f64,
    },
    /// Map glued from `2 z^2 / (|z| sqrt(1 + d^2))` and `(i - eps) z - i conj(z)`.
    Case2 {
        epsilon: f64,
    },
    /// Principal `z^(5/2)` on the right half-plane.
    Power52,
    Regularized {
        inner: Box<PlaneMapping>,
        lambda: f64,
    },
}

pub fn branchex_case1(k: f64) -> Result<PlaneMapping> {
    if !(0.0..=std::f64::consts::FRAC_1_SQRT_2).contains(&k) {
        return Err(Error::BadParam(format!("k must lie in [0, 1/sqrt 2], got {k}")));
    }
    Ok(PlaneMapping::Case1 { k })
}

pub fn branchex_case2(epsilon: f64) -> Result<PlaneMapping> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadParam(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(PlaneMapping::Case2 { epsilon })
}

pub fn power_half_plane() -> PlaneMapping {
    PlaneMapping::Power52
}

pub fn linear_map(fz: Complex64, fzbar: Complex64) -> PlaneMapping {
    PlaneMapping::Linear { fz, fzbar }
}

/// `a = sqrt(1 - k^2) + ik`, `b = -ik`.
pub fn case1_coefficients(k: f64) -> (Complex64, Complex64) {
    (Complex64::new((1.0 - k * k).sqrt(), k), Complex64::new(0.0, -k))
}

/// Distortion parameter `1 / sqrt(1 + eps^2)` of the second example.
pub fn case2_k(epsilon: f64) -> f64 {
    1.0 / (1.0 + epsilon * epsilon).sqrt()
}

/// Slope `eps / (2 + sqrt(4 - eps^2))` of the gluing rays `re z = -d im z`.
pub fn case2_slope(epsilon: f64) -> f64 {
    epsilon / (2.0 + (4.0 - epsilon * epsilon).sqrt())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn case1_q1(k: f64, z: Complex64) -> Complex64 {
    let (a, b) = case1_coefficients(k);
    let w = z.conj();
    a * (z * z) + b * (w * w)
}

fn case1_eval(k: f64, z: Complex64) -> Complex64 {
    if z.re < 0.0 {
        return case1_eval(k, -z);
    }
    if z.im >= 0.0 {
        case1_q1(k, z)
    } else {
        case1_q1(k, z.conj()).conj()
    }
}

fn case1_deriv(k: f64, z: Complex64) -> Result<ComplexDerivatives> {
    if z.re == 0.0 || z.im == 0.0 {
        return Err(Error::OnInterface);
    }
    let (a, b) = case1_coefficients(k);
    let q1 = |w: Complex64| ComplexDerivatives::new(2.0 * a * w, 2.0 * b * w.conj());
    let right = |w: Complex64| {
        if w.im > 0.0 {
            q1(w)
        } else {
            let d = q1(w.conj());
            ComplexDerivatives::new(d.fz.conj(), d.fzbar.conj())
        }
    };
    Ok(if z.re > 0.0 {
        right(z)
    } else {
        let d = right(-z);
        ComplexDerivatives::new(-d.fz, -d.fzbar)
    })
}

fn case1_region(z: Complex64) -> Region {
    if z.re == 0.0 || z.im == 0.0 {
        Region::Axis
    } else if z.re < 0.0 {
        Region::Left
    } else if z.im > 0.0 {
        Region::Q1
    } else {
        Region::Q4
    }
}

fn case2_upper(epsilon: f64, z: Complex64) -> Complex64 {
    let d = case2_slope(epsilon);
    if z.re >= -d * z.im {
        let r = z.norm();
        if r == 0.0 {
            return c(0.0, 0.0);
        }
        2.0 * z * z / (r * (1.0 + d * d).sqrt())
    } else {
        c(-epsilon, 1.0) * z - c(0.0, 1.0) * z.conj()
    }
}

fn case2_eval(epsilon: f64, z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        case2_upper(epsilon, z.conj()).conj()
    } else {
        case2_upper(epsilon, z)
    }
}

fn case2_deriv(epsilon: f64, z: Complex64) -> Result<ComplexDerivatives> {
    if case2_interface_distance(epsilon, z) == 0.0 {
        return Err(Error::OnInterface);
    }
    let d = case2_slope(epsilon);
    let upper = |w: Complex64| {
        if w.re >= -d * w.im {
            let cc = 2.0 / (1.0 + d * d).sqrt();
            let u = w / w.norm();
            ComplexDerivatives::new(1.5 * cc * u, -0.5 * cc * u * u * u)
        } else {
            ComplexDerivatives::new(c(-epsilon, 1.0), c(0.0, -1.0))
        }
    };
    Ok(if z.im < 0.0 {
        let u = upper(z.conj());
        ComplexDerivatives::new(u.fz.conj(), u.fzbar.conj())
    } else {
        upper(z)
    })
}

fn distance_to_ray(p: Complex64, dir: Complex64) -> f64 {
    let t = p.re * dir.re + p.im * dir.im;
    if t <= 0.0 {
        p.norm()
    } else {
        (p - t * dir).norm()
    }
}

fn case2_interface_distance(epsilon: f64, z: Complex64) -> f64 {
    let d = case2_slope(epsilon);
    let s = (1.0 + d * d).sqrt();
    let up = c(-d / s, 1.0 / s);
    distance_to_ray(z, up).min(distance_to_ray(z, up.conj())).min(distance_to_ray(z, c(-1.0, 0.0)))
}

fn case2_region(epsilon: f64, z: Complex64) -> Region {
    if z.re == 0.0 && z.im == 0.0 {
        return Region::Origin;
    }
    if case2_interface_distance(epsilon, z) == 0.0 {
        return Region::Interface;
    }
    let d = case2_slope(epsilon);
    let w = if z.im < 0.0 { z.conj() } else { z };
    match (z.im < 0.0, w.re >= -d * w.im) {
        (false, true) => Region::UpperSector,
        (false, false) => Region::UpperWedge,
        (true, true) => Region::LowerSector,
        (true, false) => Region::LowerWedge,
    }
}

impl PlaneMapping {
    pub fn id(&self) -> &'static str {
        match self {
            PlaneMapping::Linear { .. } => "linear",
            PlaneMapping::Case1 { .. } => "case1",
            PlaneMapping::Case2 { .. } => "case2",
            PlaneMapping::Power52 => "power52",
            PlaneMapping::Regularized { .. } => "regularized",
        }
    }

    pub fn contains_z(&self, z: Complex64) -> bool {
        match self {
            PlaneMapping::Power52 => z.re > 0.0 && z.is_finite(),
            PlaneMapping::Regularized { inner, .. } => inner.contains_z(z),
            _ => z.is_finite(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !self.contains_z(z) {
            return Err(Error::OutsideDomain);
        }
        Ok(match self {
            PlaneMapping::Linear { fz, fzbar } => fz * z + fzbar * z.conj(),
            PlaneMapping::Case1 { k } => case1_eval(*k, z),
            PlaneMapping::Case2 { epsilon } => case2_eval(*epsilon, z),
            PlaneMapping::Power52 => z.powf(2.5),
            PlaneMapping::Regularized { inner, lambda } => inner.eval(z)? + lambda * z,
        })
    }

    pub fn deriv(&self, z: Complex64) -> Result<ComplexDerivatives> {
        if !self.contains_z(z) {
            return Err(Error::OutsideDomain);
        }
        match self {
            PlaneMapping::Linear { fz, fzbar } => Ok(ComplexDerivatives::new(*fz, *fzbar)),
            PlaneMapping::Case1 { k } => case1_deriv(*k, z),
            PlaneMapping::Case2 { epsilon } => case2_deriv(*epsilon, z),
            PlaneMapping::Power52 => Ok(ComplexDerivatives::new(2.5 * z.powf(1.5), c(0.0, 0.0))),
            PlaneMapping::Regularized { inner, lambda } => {
                let d = inner.deriv(z)?;
                Ok(ComplexDerivatives::new(d.fz + lambda, d.fzbar))
            }
        }
    }

    pub fn region_tag(&self, z: Complex64) -> Region {
        if !self.contains_z(z) {
            return Region::Outside;
        }
        match self {
            PlaneMapping::Linear { .. } => Region::Plane,
            PlaneMapping::Case1 { .. } => case1_region(z),
            PlaneMapping::Case2 { epsilon } => case2_region(*epsilon, z),
            PlaneMapping::Power52 => Region::RightHalf,
            PlaneMapping::Regularized { inner, .. } => inner.region_tag(z),
        }
    }

    pub fn interface_distance_z(&self, z: Complex64) -> f64 {
        match self {
            PlaneMapping::Linear { .. } => f64::INFINITY,
            PlaneMapping::Case1 { .. } => z.re.abs().min(z.im.abs()),
            PlaneMapping::Case2 { epsilon } => case2_interface_distance(*epsilon, z),
            PlaneMapping::Power52 => z.re.max(0.0),
            PlaneMapping::Regularized { inner, .. } => inner.interface_distance_z(z),
        }
    }

    /// `f(x) + lambda x`.
    pub fn regularize(&self, lambda: f64) -> Result<PlaneMapping> {
        check_lambda(lambda)?;
        Ok(PlaneMapping::Regularized { inner: Box::new(self.clone()), lambda })
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParam(format!("lambda must be positive, got {lambda}")))
    }
}

fn point2(x: &[f64]) -> Complex64 {
    debug_assert_eq!(x.len(), 2);
    c(x[0], x[1])
}

impl Mapping for PlaneMapping {
    fn dim(&self) -> usize {
        2
    }

    fn label(&self) -> String {
        match self {
            PlaneMapping::Case1 { k } => format!("case1(k={k})"),
            PlaneMapping::Case2 { epsilon } => format!("case2(eps={epsilon})"),
            PlaneMapping::Regularized { inner, lambda } => format!("{}+{lambda}z", inner.label()),
            other => other.id().to_string(),
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        x.len() == 2 && self.contains_z(point2(x))
    }

    fn eval_real(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(x, 2)?;
        let w = self.eval(point2(x))?;
        Ok(vec![w.re, w.im])
    }

    fn jacobian(&self, x: &[f64]) -> Result<SquareMatrix> {
        check_len(x, 2)?;
        match self {
            PlaneMapping::Regularized { inner, lambda } => Ok(inner.jacobian(x)?.add_scalar_identity(*lambda)),
            _ => Ok(self.deriv(point2(x))?.to_matrix()),
        }
    }

    fn region(&self, x: &[f64]) -> Region {
        self.region_tag(point2(x))
    }

    fn interface_distance(&self, x: &[f64]) -> f64 {
        self.interface_distance_z(point2(x))
    }
}

fn check_len(x: &[f64], n: usize) -> Result<()> {
    if x.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, actual: x.len() })
    }
}

/// Mappings of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum SpaceMapping {
    /// `x -> (x_1, ..., x_{n-1}, eps s(x) x_n)` on the open unit ball, with
    /// `s(x) = |(x_1, ..., x_{n-1})|`.
    Ball {
        n: usize,
        epsilon: f64,
    },
    Linear {
        matrix: SquareMatrix,
    },
    Regularized {
        inner: Box<SpaceMapping>,
        lambda: f64,
    },
}

pub fn ball_example(n: usize, epsilon: f64) -> Result<SpaceMapping> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidDimension(n));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadParam(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(SpaceMapping::Ball { n, epsilon })
}

fn axis_distance(x: &[f64]) -> f64 {
    norm(&x[..x.len() - 1])
}

impl SpaceMapping {
    pub fn regularize(&self, lambda: f64) -> Result<SpaceMapping> {
        check_lambda(lambda)?;
        Ok(SpaceMapping::Regularized { inner: Box::new(self.clone()), lambda })
    }
}

impl Mapping for SpaceMapping {
    fn dim(&self) -> usize {
        match self {
            SpaceMapping::Ball { n, .. } => *n,
            SpaceMapping::Linear { matrix } => matrix.dim(),
            SpaceMapping::Regularized { inner, .. } => inner.dim(),
        }
    }

    fn label(&self) -> String {
        match self {
            SpaceMapping::Ball { n, epsilon } => format!("ball(n={n},eps={epsilon})"),
            SpaceMapping::Linear { .. } => "linear".to_string(),
            SpaceMapping::Regularized { inner, lambda } => format!("{}+{lambda}x", inner.label()),
        }
    }

    fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            SpaceMapping::Ball { .. } => norm(x) < 1.0,
            SpaceMapping::Linear { .. } => true,
            SpaceMapping::Regularized { inner, .. } => inner.contains(x),
        }
    }

    fn eval_real(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(x, self.dim())?;
        if !self.contains(x) {
            return Err(Error::OutsideDomain);
        }
        match self {
            SpaceMapping::Ball { epsilon, .. } => {
                let mut y = x.to_vec();
                let last = x.len() - 1;
                y[last] = epsilon * axis_distance(x) * x[last];
                Ok(y)
            }
            SpaceMapping::Linear { matrix } => Ok(matrix.mul_vec(x)),
            SpaceMapping::Regularized { inner, lambda } => {
                let mut y = inner.eval_real(x)?;
                y.iter_mut().zip(x).for_each(|(a, b)| *a += lambda * b);
                Ok(y)
            }
        }
    }

    fn jacobian(&self, x: &[f64]) -> Result<SquareMatrix> {
        check_len(x, self.dim())?;
        if !self.contains(x) {
            return Err(Error::OutsideDomain);
        }
        match self {
            SpaceMapping::Ball { n, epsilon } => {
                let s = axis_distance(x);
                if s < SINGULAR_AXIS_CUTOFF {
                    return Err(Error::OnSingularAxis);
                }
                let mut j = SquareMatrix::identity(*n);
                let last = n - 1;
                for col in 0..last {
                    j.set(last, col, epsilon * x[col] * x[last] / s);
                }
                j.set(last, last, epsilon * s);
                Ok(j)
            }
            SpaceMapping::Linear { matrix } => Ok(matrix.clone()),
            SpaceMapping::Regularized { inner, lambda } => Ok(inner.jacobian(x)?.add_scalar_identity(*lambda)),
        }
    }

    fn region(&self, x: &[f64]) -> Region {
        if !self.contains(x) {
            return Region::Outside;
        }
        match self {
            SpaceMapping::Ball { .. } if axis_distance(x) < SINGULAR_AXIS_CUTOFF => Region::SingularAxis,
            SpaceMapping::Ball { .. } => Region::Ball,
            SpaceMapping::Linear { .. } => Region::Plane,
            SpaceMapping::Regularized { inner, .. } => inner.region(x),
        }
    }

    fn interface_distance(&self, x: &[f64]) -> f64 {
        match self {
            SpaceMapping::Ball { .. } => axis_distance(x),
            SpaceMapping::Linear { .. } => f64::INFINITY,
            SpaceMapping::Regularized { inner, .. } => inner.interface_distance(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub holds: bool,
    /// `<f(a) - f(b), a - b> / (|f(a) - f(b)| |a - b|)`, 0 when a factor vanishes.
    pub ratio: f64,
}

/// `<f(a) - f(b), a - b> >= delta |f(a) - f(b)| |a - b|`.
pub fn monotonicity_check<M: Mapping + ?Sized>(f: &M, a: &[f64], b: &[f64], delta: f64) -> Result<MonotonicityCheck> {
    let fa = f.eval_real(a)?;
    let fb = f.eval_real(b)?;
    let df: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| x - y).collect();
    let dx: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let inner = dot(&df, &dx);
    let scale = norm(&df) * norm(&dx);
    let ratio = if scale == 0.0 { 0.0 } else { inner / scale };
    Ok(MonotonicityCheck { holds: inner >= delta * scale, ratio })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FdCheck {
    pub max_abs_error: f64,
    pub relative_error: f64,
    pub passed: bool,
}

/// Central differences with step [`FD_STEP`] against the exact Jacobian.
///
/// The error is measured in the Frobenius norm relative to `max(|J|, 1)`.
pub fn finite_difference_check<M: Mapping + ?Sized>(f: &M, x: &[f64]) -> Result<FdCheck> {
    let exact = f.jacobian(x)?;
    let n = f.dim();
    let mut diff = 0.0f64;
    let mut max_abs = 0.0f64;
    for j in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += FD_STEP;
        xm[j] -= FD_STEP;
        let fp = f.eval_real(&xp)?;
        let fm = f.eval_real(&xm)?;
        for i in 0..n {
            let e = (fp[i] - fm[i]) / (2.0 * FD_STEP) - exact.get(i, j);
            diff += e * e;
            max_abs = max_abs.max(e.abs());
        }
    }
    let relative_error = diff.sqrt() / exact.frobenius_norm().max(1.0);
    Ok(FdCheck { max_abs_error: max_abs, relative_error, passed: relative_error <= FD_TOL })
}

/// Sampling grid: `counts[i]` equally spaced values on `[lo[i], hi[i]]`,
/// optionally jittered by up to `jitter / 2` cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
    pub exclusion: f64,
    pub seed: u64,
    pub jitter: f64,
}

impl GridSpec {
    pub fn square(half_width: f64, count: usize, exclusion: f64, seed: u64) -> Self {
        GridSpec {
            lo: vec![-half_width; 2],
            hi: vec![half_width; 2],
            counts: vec![count; 2],
            exclusion,
            seed,
            jitter: 0.9,
        }
    }

    pub fn cube(n: usize, half_width: f64, count: usize, exclusion: f64, seed: u64) -> Self {
        GridSpec {
            lo: vec![-half_width; n],
            hi: vec![half_width; n],
            counts: vec![count; n],
            exclusion,
            seed,
            jitter: 0.9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.counts.len();
        if self.lo.len() != n || self.hi.len() != n {
            return Err(Error::BadParam("grid bounds and counts differ in length".into()));
        }
        if self.counts.iter().any(|&c| c < 2) {
            return Err(Error::BadParam("grid counts must be at least 2".into()));
        }
        if !(self.exclusion >= 0.0) {
            return Err(Error::BadParam("exclusion must be nonnegative".into()));
        }
        if !(0.0..=1.0).contains(&self.jitter) {
            return Err(Error::BadParam("jitter must lie in [0, 1]".into()));
        }
        if self.lo.iter().zip(&self.hi).any(|(l, h)| !(l < h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::BadParam("grid box is empty or unbounded".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `index`-th grid point; jitter depends only on `(seed, index)`.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut rng = split_rng(self.seed, index as u64);
        let mut rest = index;
        (0..self.counts.len())
            .map(|d| {
                let c = self.counts[d];
                let i = rest % c;
                rest /= c;
                let cell = (self.hi[d] - self.lo[d]) / (c - 1) as f64;
                let shift = if self.jitter > 0.0 { (rng.gen::<f64>() - 0.5) * self.jitter * cell } else { 0.0 };
                (self.lo[d] + i as f64 * cell + shift).clamp(self.lo[d], self.hi[d])
            })
            .collect()
    }
}

/// One sampled point. `excluded` points are kept for plotting but carry no
/// derivative data and are skipped in aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub point: Vec<f64>,
    pub value: Option<Vec<f64>>,
    pub jacobian: Option<SquareMatrix>,
    pub region: Region,
    pub margin: Option<f64>,
    #[serde(rename = "KO")]
    pub ko: Option<f64>,
    pub excluded: bool,
}

const SAMPLE_MARGIN_RESOLUTION: f64 = 1e-10;

pub fn sample_point<M: Mapping + ?Sized>(f: &M, x: &[f64], exclusion: f64) -> FieldSample {
    let region = f.region(x);
    let value = f.eval_real(x).ok();
    let near = !f.contains(x) || f.interface_distance(x) < exclusion;
    let jacobian = if near { None } else { f.jacobian(x).ok() };
    let (margin, ko) = match &jacobian {
        Some(j) => {
            (inclusion_margin(j, SAMPLE_MARGIN_RESOLUTION, false).ok().map(|m| m.value), outer_distortion(j).ok())
        }
        None => (None, None),
    };
    FieldSample { point: x.to_vec(), value, excluded: jacobian.is_none(), jacobian, region, margin, ko }
}

/// Samples `f` on the grid, in grid order.
pub fn sample_field<M: Mapping + ?Sized>(f: &M, grid: &GridSpec) -> Result<Vec<FieldSample>> {
    grid.validate()?;
    if grid.counts.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), actual: grid.counts.len() });
    }
    Ok((0..grid.len()).into_par_iter().map(|i| sample_point(f, &grid.point(i), grid.exclusion)).collect())
}

/// Samples `f` at the given points, in order.
pub fn sample_points<M: Mapping + ?Sized>(f: &M, points: &[Vec<f64>], exclusion: f64) -> Vec<FieldSample> {
    points.par_iter().map(|x| sample_point(f, x, exclusion)).collect()
}

/// Uniform points in the open unit ball of `R^n`, by rejection from the cube.
pub fn random_ball_points(seed: u64, n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut rng = split_rng(seed, i as u64);
            loop {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if norm(&x) < 1.0 {
                    break x;
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub total: usize,
    pub excluded: usize,
    pub excluded_fraction: f64,
    pub min_margin: Option<f64>,
    pub max_ko: Option<f64>,
}

pub fn summarize(samples: &[FieldSample]) -> FieldSummary {
    let used: Vec<&FieldSample> = samples.iter().filter(|s| !s.excluded).collect();
    let min_margin = used.iter().filter_map(|s| s.margin).reduce(f64::min);
    let max_ko = used.iter().filter_map(|s| s.ko).reduce(f64::max);
    let excluded = samples.len() - used.len();
    FieldSummary {
        total: samples.len(),
        excluded,
        excluded_fraction: if samples.is_empty() { 0.0 } else { excluded as f64 / samples.len() as f64 },
        min_margin,
        max_ko,
    }
}
