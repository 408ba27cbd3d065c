//! Dense square matrices of small dimension.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;

/// Dense row-major `n x n` real matrix with `2 <= n <= 6` and finite entries.
///
/// Serializes as a JSON array of rows.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidDimension(n));
        }
        if data.len() != n * n {
            return Err(Error::EntryCount { expected: n * n, actual: data.len() });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: pos / n, col: pos % n });
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::EntryCount { expected: n, actual: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::new(n, data)
    }

    pub fn zeros(n: usize) -> Self {
        assert!((MIN_DIM..=MAX_DIM).contains(&n), "dimension {n} out of range");
        SquareMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            data[i * n + i] = x;
        }
        Self::new(n, data)
    }

    /// Planar rotation by `theta` radians (counter-clockwise).
    pub fn rotation2(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        SquareMatrix { n: 2, data: vec![c, -s, s, c] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        self.data.chunks(self.n).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// `A^T x`
    pub fn tmul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate().take(n) {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.data[i * n + j] * xi;
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        SquareMatrix { n: self.n, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// `A + c I`, touching only the diagonal.
    pub fn add_scalar_identity(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += c;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }

    /// Determinant. Closed forms for `n <= 3` (with fused products for `n = 2`),
    /// LU with partial pivoting above that.
    pub fn determinant(&self) -> f64 {
        let a = &self.data;
        match self.n {
            2 => diff_of_products(a[0], a[3], a[1], a[2]),
            3 => {
                let c0 = diff_of_products(a[4], a[8], a[5], a[7]);
                let c1 = diff_of_products(a[5], a[6], a[3], a[8]);
                let c2 = diff_of_products(a[3], a[7], a[4], a[6]);
                a[0] * c0 + a[1] * c1 + a[2] * c2
            }
            _ => self.lu_determinant(),
        }
    }

    fn lu_determinant(&self) -> f64 {
        let n = self.n;
        let mut m = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i * n + k].abs().total_cmp(&m[j * n + k].abs())).unwrap();
            if m[p * n + k] == 0.0 {
                return 0.0;
            }
            if p != k {
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = m[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let f = m[i * n + k] / piv;
                if f != 0.0 {
                    for j in k..n {
                        m[i * n + j] -= f * m[k * n + j];
                    }
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting; `None` when singular.
    pub fn inverse(&self) -> Option<SquareMatrix> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs())).unwrap();
            if a[p * n + k] == 0.0 {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                    inv.swap(k * n + j, p * n + j);
                }
            }
            let piv = a[k * n + k];
            for j in 0..n {
                a[k * n + j] /= piv;
                inv[k * n + j] /= piv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k];
                if f != 0.0 {
                    for j in 0..n {
                        a[i * n + j] -= f * a[k * n + j];
                        inv[i * n + j] -= f * inv[k * n + j];
                    }
                }
            }
        }
        SquareMatrix::new(n, inv).ok()
    }

    /// Cofactor matrix for `n = 3`: entry `(i, j)` is the signed minor of `a_ij`.
    pub(crate) fn cofactor3(&self) -> [f64; 9] {
        debug_assert_eq!(self.n, 3);
        let a = &self.data;
        [
            diff_of_products(a[4], a[8], a[5], a[7]),
            diff_of_products(a[5], a[6], a[3], a[8]),
            diff_of_products(a[3], a[7], a[4], a[6]),
            diff_of_products(a[2], a[7], a[1], a[8]),
            diff_of_products(a[0], a[8], a[2], a[6]),
            diff_of_products(a[1], a[6], a[0], a[7]),
            diff_of_products(a[1], a[5], a[2], a[4]),
            diff_of_products(a[2], a[3], a[0], a[5]),
            diff_of_products(a[0], a[4], a[1], a[3]),
        ]
    }
}

/// `a*b - c*d` with one rounding error (Kahan's algorithm on fused multiply-add).
#[inline]
pub fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let cd = c * d;
    let err = (-c).mul_add(d, cd);
    let dop = a.mul_add(b, -cd);
    dop + err
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n)).finish()
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SquareMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(SquareMatrix::new(1, vec![1.0]), Err(Error::InvalidDimension(1)));
        assert_eq!(SquareMatrix::new(7, vec![0.0; 49]), Err(Error::InvalidDimension(7)));
        assert!(matches!(SquareMatrix::new(2, vec![0.0; 3]), Err(Error::EntryCount { .. })));
        assert!(matches!(SquareMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0]]), Err(Error::EntryCount { .. })));
        assert_eq!(SquareMatrix::new(2, vec![0.0, f64::NAN, 0.0, 0.0]), Err(Error::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn determinants_agree_across_methods() {
        let m = SquareMatrix::from_rows(&[[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [-2.0, 0.0, 1.5]]).unwrap();
        assert!((m.determinant() - m.lu_determinant()).abs() < 1e-12);
        let d = SquareMatrix::diag(&[4.0, 2.0, 1.0, 0.5, 3.0]).unwrap();
        assert!((d.determinant() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = SquareMatrix::from_rows(&[
            [2.0, -1.0, 0.5, 0.0],
            [0.3, 4.0, 1.0, -1.0],
            [-2.0, 0.0, 1.5, 0.2],
            [0.0, 1.0, 0.0, 1.0],
        ])
        .unwrap();
        let p = m.matmul(&m.inverse().unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p.get(i, j) - e).abs() < 1e-12);
            }
        }
        assert!(SquareMatrix::zeros(3).inverse().is_none());
    }

    #[test]
    fn json_is_row_major() {
        let m = SquareMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1.0,2.0],[3.0,4.0]]");
        let back: SquareMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SquareMatrix>("[[1.0,2.0]]").is_err());
    }

    #[test]
    fn cofactor_matches_inverse() {
        let m = SquareMatrix::from_rows(&[[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [-2.0, 0.0, 1.5]]).unwrap();
        let c = m.cofactor3();
        let inv = m.inverse().unwrap();
        let det = m.determinant();
        for i in 0..3 {
            for j in 0..3 {
                // inverse = adj / det, adj = cof^T
                assert!((inv.get(j, i) * det - c[i * 3 + j]).abs() < 1e-12);
            }
        }
    }
}
