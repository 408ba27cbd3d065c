//! Singular values without singular vectors.
//!
//! `n = 2`: closed form from the conformal/anticonformal split of the matrix,
//! with the small value recovered from the determinant.
//! `n = 3`: largest eigenvalues of the symmetric PSD matrices `A^T A` and
//! `cof(A)^T cof(A)` (trigonometric cubic), giving `s1` and `s1 s2`; the
//! smallest value again comes from the determinant.
//! `4 <= n <= 6`: cyclic one-sided Jacobi, smallest value from the determinant.

use serde::{Deserialize, Serialize};

use crate::linalg::SquareMatrix;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 80;

/// Singular values in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub sigma: Vec<f64>,
}

impl SingularSpectrum {
    /// Operator norm `s1`.
    pub fn largest(&self) -> f64 {
        self.sigma[0]
    }

    pub fn smallest(&self) -> f64 {
        *self.sigma.last().unwrap()
    }

    /// `s1 s2 ... sn`, i.e. `|det A|`.
    pub fn product(&self) -> f64 {
        self.sigma.iter().product()
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

pub fn singular_values(a: &SquareMatrix) -> SingularSpectrum {
    let sigma = match a.dim() {
        2 => svd2(a).to_vec(),
        3 => svd3(a).to_vec(),
        _ => {
            let mut s = jacobi_one_sided(a);
            let n = s.len();
            let head: f64 = s[..n - 1].iter().product();
            if head > 0.0 {
                s[n - 1] = (a.determinant().abs() / head).min(s[n - 2]);
            }
            s
        }
    };
    SingularSpectrum { sigma }
}

fn svd2(a: &SquareMatrix) -> [f64; 2] {
    let (a11, a12, a21, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    // |f_z| and |f_zbar| of the associated complex-linear map.
    let q = (0.5 * (a11 + a22)).hypot(0.5 * (a21 - a12));
    let r = (0.5 * (a11 - a22)).hypot(0.5 * (a21 + a12));
    let s1 = q + r;
    if s1 == 0.0 {
        return [0.0, 0.0];
    }
    let s2 = (a.determinant().abs() / s1).min(s1);
    [s1, s2]
}

fn svd3(a: &SquareMatrix) -> [f64; 3] {
    let ata = gram3(a.as_slice());
    let s1 = largest_eigenvalue_sym3(&ata).max(0.0).sqrt();
    if s1 == 0.0 {
        return [0.0; 3];
    }
    let cof = a.cofactor3();
    let s12 = largest_eigenvalue_sym3(&gram3(&cof)).max(0.0).sqrt();
    if s12 == 0.0 {
        return [s1, 0.0, 0.0];
    }
    let s2 = (s12 / s1).min(s1);
    let s3 = (a.determinant().abs() / s12).min(s2);
    [s1, s2, s3]
}

/// Upper triangle of `M^T M` for a row-major 3x3 `M`: `[g00, g01, g02, g11, g12, g22]`.
fn gram3(m: &[f64]) -> [f64; 6] {
    let col = |j: usize| [m[j], m[3 + j], m[6 + j]];
    let (c0, c1, c2) = (col(0), col(1), col(2));
    let d = |x: &[f64; 3], y: &[f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    [d(&c0, &c0), d(&c0, &c1), d(&c0, &c2), d(&c1, &c1), d(&c1, &c2), d(&c2, &c2)]
}

/// Largest eigenvalue of a symmetric 3x3 matrix given by its upper triangle.
fn largest_eigenvalue_sym3(g: &[f64; 6]) -> f64 {
    let [a, b, c, d, e, f] = *g;
    let scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    // Work on the scaled matrix to keep the cubic's coefficients O(1).
    let (a, b, c, d, e, f) = (a / scale, b / scale, c / scale, d / scale, e / scale, f / scale);
    let p1 = b * b + c * c + e * e;
    let q = (a + d + f) / 3.0;
    let (da, dd, df) = (a - q, d - q, f - q);
    let p2 = da * da + dd * dd + df * df + 2.0 * p1;
    if p2 == 0.0 {
        return q * scale;
    }
    let p = (p2 / 6.0).sqrt();
    let (ba, bb, bc, bd, be, bf) = (da / p, b / p, c / p, dd / p, e / p, df / p);
    let det_b = ba * (bd * bf - be * be) - bb * (bb * bf - be * bc) + bc * (bb * be - bd * bc);
    let r = (0.5 * det_b).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let mut lambda = q + 2.0 * p * phi.cos();

    // One Newton step on the characteristic polynomial when it helps.
    let charpoly = |x: f64| {
        let (xa, xd, xf) = (a - x, d - x, f - x);
        xa * (xd * xf - e * e) - b * (b * xf - e * c) + c * (b * e - xd * c)
    };
    let h = 1e-7 * lambda.abs().max(1e-300);
    let val = charpoly(lambda);
    let slope = (charpoly(lambda + h) - charpoly(lambda - h)) / (2.0 * h);
    if slope != 0.0 && slope.is_finite() {
        let cand = lambda - val / slope;
        if (cand - lambda).abs() <= 1e-8 * lambda.abs() && charpoly(cand).abs() < val.abs() {
            lambda = cand;
        }
    }
    lambda * scale
}

fn jacobi_one_sided(a: &SquareMatrix) -> Vec<f64> {
    let n = a.dim();
    // Columns of A, rotated in place until mutually orthogonal.
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a.get(i, j)).collect()).collect();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|x| x * x).sum();
                let beta: f64 = cols[j].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    sigma
}
