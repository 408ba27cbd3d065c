//! Planar differentials in complex form.
//!
//! A real 2x2 differential of `f = u + iv` acts as `h -> f_z h + f_zbar conj(h)`.
//! Cone membership of that differential can be decided three ways: by the
//! matrix margin, by a sector condition on `arg f_z` and `|f_zbar / f_z|`, and
//! by closed-form inequalities on the real and imaginary parts of `f_z`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::matrix::{inclusion_margin, ConeStatus, InclusionVerdict};

/// `(f_z, f_zbar)` at a point. Serializes each as `{re, im}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexDerivatives {
    #[serde(with = "complex_json")]
    pub fz: Complex64,
    #[serde(with = "complex_json")]
    pub fzbar: Complex64,
}

impl ComplexDerivatives {
    pub fn new(fz: Complex64, fzbar: Complex64) -> Self {
        ComplexDerivatives { fz, fzbar }
    }

    pub fn is_finite(&self) -> bool {
        self.fz.is_finite() && self.fzbar.is_finite()
    }

    /// The differential applied to a tangent vector `h`.
    pub fn apply(&self, h: Complex64) -> Complex64 {
        self.fz * h + self.fzbar * h.conj()
    }

    /// Matrix with rows `(u_x, u_y; v_x, v_y)`.
    pub fn to_matrix(&self) -> SquareMatrix {
        let (a, b) = (self.fz, self.fzbar);
        SquareMatrix::from_rows(&[[a.re + b.re, b.im - a.im], [a.im + b.im, a.re - b.re]])
            .expect("finite derivatives give a finite matrix")
    }

    /// `|f_zbar| / |f_z|`, the modulus of the Beltrami coefficient.
    pub fn beltrami_modulus(&self) -> f64 {
        self.fzbar.norm() / self.fz.norm()
    }
}

/// Complex form of a 2x2 differential.
pub fn to_complex(a: &SquareMatrix) -> Result<ComplexDerivatives> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: a.dim() });
    }
    let (a11, a12, a21, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    Ok(ComplexDerivatives {
        fz: Complex64::new(0.5 * (a11 + a22), 0.5 * (a21 - a12)),
        fzbar: Complex64::new(0.5 * (a11 - a22), 0.5 * (a21 + a12)),
    })
}

pub fn from_complex(d: &ComplexDerivatives) -> SquareMatrix {
    d.to_matrix()
}

fn check_open_delta(delta: f64) -> Result<()> {
    if delta > -1.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::BadParam(format!("delta must lie in (-1, 1), got {delta}")))
    }
}

/// Membership verdict through the matrix margin.
pub fn cond_membership(d: &ComplexDerivatives, delta: f64, band: f64) -> Result<InclusionVerdict> {
    check_open_delta(delta)?;
    if !(band > 0.0) {
        return Err(Error::BadParam(format!("band must be positive, got {band}")));
    }
    let m = inclusion_margin(&d.to_matrix(), (0.1 * band).min(1e-10), false)?;
    Ok(InclusionVerdict {
        margin: m.value,
        status: ConeStatus::classify(m.value, delta, band),
        witness: m.witness,
        outer_distortion: None,
    })
}

/// Margin as `min re(w) / |w|` over `w = f_z + f_zbar e^{i t}`, swept on
/// `samples` equally spaced `t`, then resampled 2048 times around each of the
/// four lowest samples.
pub fn membership_margin_sweep(d: &ComplexDerivatives, samples: usize) -> f64 {
    if d.fz == Complex64::new(0.0, 0.0) && d.fzbar == Complex64::new(0.0, 0.0) {
        return f64::INFINITY;
    }
    let skip = 1e-14 * (d.fz.norm() + d.fzbar.norm());
    let g = |t: f64| {
        let w = d.fz + d.fzbar * Complex64::from_polar(1.0, t);
        let r = w.norm();
        if r > skip {
            w.re / r
        } else {
            f64::INFINITY
        }
    };
    let step = std::f64::consts::TAU / samples as f64;
    let mut coarse: Vec<(f64, f64)> = (0..samples).map(|i| (g(i as f64 * step), i as f64 * step)).collect();
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = coarse.first().map_or(f64::INFINITY, |c| c.0);
    for &(_, t0) in coarse.iter().take(4) {
        for j in 0..=2048 {
            best = best.min(g(t0 - step + 2.0 * step * j as f64 / 2048.0));
        }
    }
    best
}

/// `|arg f_z| + arcsin |f_zbar / f_z|`, when defined (`f_z != 0` and
/// `|f_zbar| <= |f_z|`).
pub fn sector_expression(d: &ComplexDerivatives) -> Option<f64> {
    let a = d.fz.norm();
    if a == 0.0 {
        return None;
    }
    let ratio = d.fzbar.norm() / a;
    (ratio <= 1.0).then(|| d.fz.arg().abs() + ratio.asin())
}

/// `|arg f_z| + arcsin |f_zbar / f_z| <= arccos delta`.
///
/// At `f_z = 0` this holds exactly when `f_zbar = 0`; when `|f_zbar| > |f_z|`
/// the arcsine is undefined and the condition fails.
pub fn cond_sector(d: &ComplexDerivatives, delta: f64) -> bool {
    if d.fz == Complex64::new(0.0, 0.0) {
        return d.fzbar == Complex64::new(0.0, 0.0);
    }
    match sector_expression(d) {
        Some(e) => e <= delta.acos(),
        None => false,
    }
}

/// `|f_zbar| + delta |im f_z| <= sqrt(1 - delta^2) re f_z`.
pub fn closed_form_first(d: &ComplexDerivatives, delta: f64) -> bool {
    d.fzbar.norm() + delta * d.fz.im.abs() <= (1.0 - delta * delta).sqrt() * d.fz.re
}

/// `|f_zbar| <= |f_z| <= re f_z / sqrt(1 - delta^2)`.
pub fn closed_form_second(d: &ComplexDerivatives, delta: f64) -> bool {
    let a = d.fz.norm();
    d.fzbar.norm() <= a && a <= d.fz.re / (1.0 - delta * delta).sqrt()
}

/// Closed-form membership test.
///
/// The second inequality is only admitted for `delta <= 0`. For positive
/// `delta` it does not imply membership: `f_z = 1`, `f_zbar = 0.99`,
/// `delta = 0.9` satisfies it while the disk of radius `0.99` about `1`
/// leaves the sector `|arg| <= arccos 0.9`.
pub fn cond_closed_form(d: &ComplexDerivatives, delta: f64) -> bool {
    closed_form_first(d, delta) || (delta <= 0.0 && closed_form_second(d, delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QrCheck {
    pub holds: bool,
    /// `k |f_z| - |f_zbar|`
    pub slack: f64,
}

/// `|f_zbar| <= k |f_z|`, up to `1e-12`.
pub fn quasiregular_check(d: &ComplexDerivatives, k: f64) -> Result<QrCheck> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::BadParam(format!("k must lie in [0, 1), got {k}")));
    }
    let slack = k * d.fz.norm() - d.fzbar.norm();
    Ok(QrCheck { holds: slack >= -1e-12, slack })
}

/// `K = (1 + k) / (1 - k)`.
pub fn distortion_from_k(k: f64) -> f64 {
    (1.0 + k) / (1.0 - k)
}

/// `k = (K - 1) / (K + 1)`.
pub fn k_from_distortion(big_k: f64) -> f64 {
    (big_k - 1.0) / (big_k + 1.0)
}

/// `tau_K = 2 sqrt(K) / (K + 1)`.
pub fn tau_for_k(big_k: f64) -> Result<f64> {
    if !(big_k >= 1.0) || !big_k.is_finite() {
        return Err(Error::BadParam(format!("K must be finite and >= 1, got {big_k}")));
    }
    Ok(2.0 * big_k.sqrt() / (big_k + 1.0))
}

/// Matched distortion parameters `K`, `k` and `tau_K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QrParams {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub k: f64,
    pub tau: f64,
}

impl QrParams {
    pub fn from_distortion(big_k: f64) -> Result<Self> {
        let tau = tau_for_k(big_k)?;
        Ok(QrParams { big_k, k: k_from_distortion(big_k), tau })
    }

    pub fn from_k(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::BadParam(format!("k must lie in [0, 1), got {k}")));
        }
        let big_k = distortion_from_k(k);
        Ok(QrParams { big_k, k, tau: tau_for_k(big_k)? })
    }
}

/// `cos(pi - arccos tau + arcsin k)`, the cone level implied by
/// `re f_z >= -tau |f_z|` together with `|f_zbar| <= k |f_z|`.
///
/// The angle is capped at `pi`: when `arccos tau <= arcsin k` no level above
/// `-1` is implied and the result is exactly `-1`. Inputs outside
/// `0 <= tau <= 1`, `0 <= k < 1` give NaN.
pub fn corollary_delta(tau: f64, k: f64) -> f64 {
    if !(0.0..=1.0).contains(&tau) || !(0.0..1.0).contains(&k) {
        return f64::NAN;
    }
    let gap = tau.acos() - k.asin();
    if gap <= 0.0 {
        -1.0
    } else {
        -gap.cos()
    }
}

/// `arccos tau > arcsin k`, equivalently `tau < sqrt(1 - k^2)`.
pub fn corollary_delta_admissible(tau: f64, k: f64) -> bool {
    tau.acos() > k.asin()
}

pub(crate) mod complex_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex64::new(v.re, v.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cd(fz: (f64, f64), fzbar: (f64, f64)) -> ComplexDerivatives {
        ComplexDerivatives::new(Complex64::new(fz.0, fz.1), Complex64::new(fzbar.0, fzbar.1))
    }

    #[test]
    fn wirtinger_examples() {
        let d = to_complex(&SquareMatrix::identity(2)).unwrap();
        assert_eq!(d, cd((1.0, 0.0), (0.0, 0.0)));
        let d = to_complex(&SquareMatrix::diag(&[1.0, -1.0]).unwrap()).unwrap();
        assert_eq!(d, cd((0.0, 0.0), (1.0, 0.0)));
        assert!(matches!(to_complex(&SquareMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rotation_is_complex_linear() {
        for i in 0..50 {
            let theta = -PI + 2.0 * PI * i as f64 / 50.0;
            let r = SquareMatrix::rotation2(theta);
            let d = to_complex(&r).unwrap();
            // R(theta) acting on h equals e^{i theta} h.
            let h = Complex64::new(0.3, -1.7);
            let direct = Complex64::from_polar(1.0, theta) * h;
            let via_matrix = r.mul_vec(&[h.re, h.im]);
            assert!((direct.re - via_matrix[0]).abs() < 1e-14 && (direct.im - via_matrix[1]).abs() < 1e-14);
            assert!((d.fz - Complex64::from_polar(1.0, theta)).norm() < 1e-15);
            assert!(d.fzbar.norm() < 1e-15);
        }
    }

    #[test]
    fn matrix_roundtrip_and_action() {
        let d = cd((0.7, -1.1), (0.2, 0.45));
        let back = to_complex(&d.to_matrix()).unwrap();
        assert!((back.fz - d.fz).norm() < 1e-14 && (back.fzbar - d.fzbar).norm() < 1e-14);
        let h = Complex64::new(-0.4, 2.0);
        let w = d.to_matrix().mul_vec(&[h.re, h.im]);
        let z = d.apply(h);
        assert!((z.re - w[0]).abs() < 1e-14 && (z.im - w[1]).abs() < 1e-14);
    }

    #[test]
    fn membership_examples() {
        let v = cond_membership(&cd((1.0, 0.0), (0.0, 0.0)), 0.0, 1e-9).unwrap();
        assert_eq!(v.status, ConeStatus::Inside);
        let v = cond_membership(&cd((0.0, 1.0), (0.0, 0.0)), 0.0, 1e-6).unwrap();
        assert_eq!(v.status, ConeStatus::Boundary);
        let d = cd((0.0, 0.0), (1.0, 0.0));
        let v = cond_membership(&d, -0.5, 1e-9).unwrap();
        assert_eq!(v.status, ConeStatus::Outside);
        assert!((membership_margin_sweep(&d, 4096) + 1.0).abs() < 1e-12);
        assert!(cond_membership(&d, 1.0, 1e-9).is_err());
    }

    #[test]
    fn sector_examples() {
        assert!(cond_sector(&cd((1.0, 0.0), (0.0, 0.0)), 0.0));
        assert!(cond_sector(&cd((0.0, 0.0), (0.0, 0.0)), 0.7));
        assert!(!cond_sector(&cd((0.0, 0.0), (0.3, 0.0)), -0.7));
        // f_z = 1, f_zbar = k: holds iff delta <= sqrt(1 - k^2).
        for i in 0..20 {
            let k = i as f64 / 20.0;
            let t = (1.0 - k * k).sqrt();
            for &delta in &[t - 1e-3, t + 1e-3] {
                if delta >= 1.0 {
                    continue;
                }
                let d = cd((1.0, 0.0), (k, 0.0));
                assert_eq!(cond_sector(&d, delta), delta <= t, "k={k} delta={delta}");
                let sweep = membership_margin_sweep(&d, 100_000);
                assert_eq!(sweep >= delta, delta <= t);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(cond_closed_form(&cd((1.0, 0.0), (0.0, 0.0)), 0.0));
        assert!(cond_closed_form(&cd((0.0, 1.0), (0.0, 0.0)), 0.0));
        let d = cd((-1.0, 0.0), (0.0, 0.0));
        assert!(!closed_form_first(&d, -0.5) && !closed_form_second(&d, -0.5));
        assert!(!cond_closed_form(&d, -0.5));
    }

    #[test]
    fn second_branch_only_admitted_for_nonpositive_delta() {
        let d = cd((1.0, 0.0), (0.99, 0.0));
        assert!(closed_form_second(&d, 0.9));
        assert!(!cond_sector(&d, 0.9));
        assert!(membership_margin_sweep(&d, 100_000) < 0.9 - 0.1);
        assert!(!cond_closed_form(&d, 0.9));
    }

    #[test]
    fn quasiregular_examples() {
        assert!(quasiregular_check(&cd((1.0, 0.0), (0.0, 0.0)), 0.0).unwrap().holds);
        assert!(!quasiregular_check(&cd((1.0, 0.0), (1.0, 0.0)), 0.5).unwrap().holds);
        assert!(quasiregular_check(&cd((1.0, 0.0), (0.0, 0.0)), 1.0).is_err());
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_for_k(1.0).unwrap(), 1.0);
        assert!((tau_for_k(4.0).unwrap() - 0.8).abs() < 1e-15);
        assert!(tau_for_k(1e6).unwrap() < 0.002);
        assert!(tau_for_k(0.5).is_err());
        let mut last = 1.0;
        for i in 1..1000 {
            let t = tau_for_k(1.0 + i as f64 * 0.5).unwrap();
            assert!(t < last);
            last = t;
        }
        let p = QrParams::from_k(0.6).unwrap();
        assert!((p.big_k - 4.0).abs() < 1e-12 && (p.tau - 0.8).abs() < 1e-12);
        let q = QrParams::from_distortion(4.0).unwrap();
        assert!((q.k - 0.6).abs() < 1e-15);
    }

    #[test]
    fn corollary_delta_examples() {
        assert!(corollary_delta(0.0, 0.0).abs() < 1e-15);
        // arccos 0.8 = arcsin 0.6, so the angle is pi.
        assert!((corollary_delta(0.8, 0.6) + 1.0).abs() < 1e-15);
        assert!(corollary_delta(0.5, 0.6) > -1.0);
        assert!(corollary_delta_admissible(0.5, 0.6));
        assert!(corollary_delta(1.5, 0.2).is_nan());
        // Past the admissible range the angle would exceed pi.
        assert_eq!(corollary_delta(1.0, 0.5), -1.0);
    }

    #[test]
    fn json_uses_re_im() {
        let d = cd((1.0, -2.0), (0.5, 0.0));
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"fz":{"re":1.0,"im":-2.0},"fzbar":{"re":0.5,"im":0.0}}"#);
        let back: ComplexDerivatives = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
