//! Negative real eigenvalues, decided on the characteristic polynomial.

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Eigenvalues closer than this to zero make the sign undecidable.
pub const ZERO_EIGEN_TOL: f64 = 1e-10;

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0.0 {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn lead(&self) -> f64 {
        *self.0.last().unwrap_or(&0.0)
    }

    fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly((0..len).map(|i| self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0)).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    fn scale(&self, c: f64) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect())
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![0.0]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect())
    }

    fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Remainder of `self / divisor`.
    fn rem(&self, divisor: &Poly) -> Poly {
        let mut r = self.0.clone();
        let d = &divisor.0;
        let dl = divisor.lead();
        let dd = divisor.degree();
        while r.len() > dd && r.len() > 1 {
            let shift = r.len() - 1 - dd;
            let f = r[r.len() - 1] / dl;
            for (i, &c) in d.iter().enumerate() {
                r[shift + i] -= f * c;
            }
            r.pop();
        }
        if r.is_empty() {
            r.push(0.0);
        }
        Poly(r).trim()
    }
}

/// `det(t I - A)` by Laplace expansion over column subsets.
pub fn characteristic_polynomial(a: &SquareMatrix) -> Poly {
    let n = a.dim();
    let entry = |i: usize, j: usize| {
        if i == j {
            Poly(vec![-a.get(i, j), 1.0])
        } else {
            Poly(vec![-a.get(i, j)])
        }
    };
    // minors[S]: determinant of rows (n - |S|)..n against the columns in S.
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
    minors[0] = Some(Poly(vec![1.0]));
    for mask in 1usize..(1 << n) {
        let row = n - mask.count_ones() as usize;
        let mut acc = Poly(vec![0.0]);
        let mut pos = 0;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = minors[mask & !(1 << j)].as_ref().unwrap();
            let term = entry(row, j).mul(sub);
            acc = if pos % 2 == 0 { acc.add(&term) } else { acc.add(&term.scale(-1.0)) };
            pos += 1;
        }
        minors[mask] = Some(acc);
    }
    minors[(1 << n) - 1].take().unwrap().trim()
}

struct Sturm(Vec<Poly>);

impl Sturm {
    fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative().trim()];
        loop {
            let k = seq.len();
            if seq[k - 1].degree() == 0 {
                break;
            }
            let r = seq[k - 2].rem(&seq[k - 1]);
            let tol = 1e-10 * seq[k - 2].max_abs().max(seq[k - 1].max_abs());
            if r.max_abs() <= tol {
                break;
            }
            let neg = r.scale(-1.0 / r.max_abs());
            seq.push(neg);
        }
        Sturm(seq)
    }

    fn sign_changes_at(&self, x: f64) -> usize {
        count_changes(self.0.iter().map(|p| p.eval(x)))
    }

    fn sign_changes_at_neg_inf(&self) -> usize {
        count_changes(self.0.iter().map(|p| {
            let s = p.lead();
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }
}

fn count_changes<I: Iterator<Item = f64>>(vals: I) -> usize {
    let mut changes = 0;
    let mut last = 0.0f64;
    for v in vals.filter(|v| *v != 0.0) {
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Number of distinct real eigenvalues of `a` in `(-inf, -ZERO_EIGEN_TOL]`.
pub fn count_negative_real_eigenvalues(a: &SquareMatrix) -> Result<usize> {
    let p = characteristic_polynomial(a);
    // Rescale t = R x so that every root lies in [-1, 1].
    let bound = 1.0 + p.0[..p.degree()].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let scaled =
        Poly(p.0.iter().enumerate().map(|(i, c)| c * bound.powi(i as i32) / bound.powi(p.degree() as i32)).collect());
    let tol = ZERO_EIGEN_TOL / bound;
    let sturm = Sturm::new(&scaled);
    let near_zero = sturm.sign_changes_at(-tol) as i64 - sturm.sign_changes_at(tol) as i64;
    if near_zero != 0 || scaled.eval(-tol) == 0.0 || scaled.eval(tol) == 0.0 {
        return Err(Error::IllConditioned { tol: ZERO_EIGEN_TOL });
    }
    let negative = sturm.sign_changes_at_neg_inf() as i64 - sturm.sign_changes_at(-tol) as i64;
    Ok(negative.max(0) as usize)
}

/// Distinct real eigenvalues, isolated by Sturm bisection.
pub(crate) fn real_eigenvalues(a: &SquareMatrix) -> Vec<f64> {
    let p = characteristic_polynomial(a);
    let bound = 1.0 + p.0[..p.degree()].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let sturm = Sturm::new(&p);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound, bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm.sign_changes_at(lo) as i64 - sturm.sign_changes_at(hi) as i64;
        if count <= 0 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * bound {
            roots.push(mid);
            continue;
        }
        if count == 1 && p.eval(lo) * p.eval(hi) < 0.0 {
            let (mut l, mut h) = (lo, hi);
            let sl = p.eval(l).signum();
            for _ in 0..200 {
                let m = 0.5 * (l + h);
                if m <= l || m >= h {
                    break;
                }
                if p.eval(m).signum() == sl {
                    l = m;
                } else {
                    h = m;
                }
            }
            roots.push(0.5 * (l + h));
            continue;
        }
        stack.push((lo, mid));
        stack.push((mid, hi));
    }
    roots.sort_by(|x, y| x.total_cmp(y));
    roots
}

/// True iff `a` has a real eigenvalue in `(-inf, 0)`.
pub fn has_negative_real_eigenvalue(a: &SquareMatrix) -> Result<bool> {
    count_negative_real_eigenvalues(a).map(|c| c > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_of_small_matrices() {
        let a = SquareMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        // t^2 - 5t - 2
        assert_eq!(characteristic_polynomial(&a), Poly(vec![-2.0, -5.0, 1.0]));
        let d = SquareMatrix::diag(&[5.0, -2.0, 3.0]).unwrap();
        let p = characteristic_polynomial(&d);
        for r in [5.0, -2.0, 3.0] {
            assert!(p.eval(r).abs() < 1e-12);
        }
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn charpoly_6x6_companion() {
        // Companion matrix of (t-1)(t+2)(t-3)(t+0.5)(t-4)(t+5).
        let roots = [1.0, -2.0, 3.0, -0.5, 4.0, -5.0];
        let mut coeffs = Poly(vec![1.0]);
        for r in roots {
            coeffs = coeffs.mul(&Poly(vec![-r, 1.0]));
        }
        let mut m = SquareMatrix::zeros(6);
        for i in 1..6 {
            m.set(i, i - 1, 1.0);
        }
        for i in 0..6 {
            m.set(i, 5, -coeffs.0[i]);
        }
        let p = characteristic_polynomial(&m);
        for (x, y) in p.0.iter().zip(&coeffs.0) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(count_negative_real_eigenvalues(&m).unwrap(), 3);
    }

    #[test]
    fn spec_cases() {
        assert!(has_negative_real_eigenvalue(&SquareMatrix::scalar(3, -1.0)).unwrap());
        let rot = SquareMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(!has_negative_real_eigenvalue(&rot).unwrap());
        let d = SquareMatrix::diag(&[5.0, -2.0, 3.0]).unwrap();
        assert!(has_negative_real_eigenvalue(&d).unwrap());
        assert!(!has_negative_real_eigenvalue(&SquareMatrix::identity(6)).unwrap());
    }

    #[test]
    fn near_zero_eigenvalue_is_ill_conditioned() {
        let d = SquareMatrix::diag(&[1.0, 1e-12]).unwrap();
        assert!(matches!(has_negative_real_eigenvalue(&d), Err(Error::IllConditioned { .. })));
        assert!(matches!(has_negative_real_eigenvalue(&SquareMatrix::zeros(3)), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn repeated_negative_root() {
        let a = SquareMatrix::from_rows(&[[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, -1.0]]).unwrap();
        assert_eq!(count_negative_real_eigenvalues(&a).unwrap(), 1);
        let b = SquareMatrix::diag(&[-3.0, -3.0, 2.0, 2.0]).unwrap();
        assert!(has_negative_real_eigenvalue(&b).unwrap());
    }
}
