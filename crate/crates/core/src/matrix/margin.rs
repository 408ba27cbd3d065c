//! The cone margin `m(A) = inf { <A x, x> / |A x| : |x| = 1, A x != 0 }`.
//!
//! `A` lies in the cone of level `delta` exactly when `delta <= m(A)`.
//!
//! Estimation sweeps the unit sphere and refines the best candidates:
//! an angular grid with golden-section search for `n = 2`, a Fibonacci
//! sphere with Newton polishing in a tangent chart for `n = 3`, and random
//! restarts of the same polisher for `n > 3`. Directions with
//! `|A x| < 1e-14 |A|` are skipped since the inequality is vacuous there.
//!
//! Certified mode (`n <= 3`) runs a depth-first branch and bound over sphere
//! cells. On a great-circle arc where `|A x| >= eta`, the objective has second
//! derivative at most `4 s1/eta + 9 s1^2/eta^2`, so each cell gets the lower
//! bound `g(c) - |grad g(c)| r - H r^2 / 2`. Cells are split until every bound
//! is within the requested resolution of the best value seen.

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, SquareMatrix};
use crate::matrix::svd::singular_values;
use crate::rng::{unit_vector, SuiteRng};

const SKIP_RELATIVE: f64 = 1e-14;
const GRID_2D: usize = 4096;
const GRID_3D: usize = 16384;
const POLISH_CANDIDATES_3D: usize = 4;
const RESTARTS_HIGH_DIM: usize = 64;
const RESTART_SEED: u64 = 0x6d61_7267_696e;
const CERTIFY_INITIAL_2D: usize = 4096;
const CERTIFY_INITIAL_FACE: usize = 32;
const CERTIFY_BUDGET: u64 = 40_000_000;
const ROUNDING_SLACK: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginEstimate {
    /// Estimated `m(A)`; `+inf` for the zero matrix.
    pub value: f64,
    /// Unit vector attaining (approximately) the margin.
    pub witness: Vec<f64>,
    /// Rigorous bound on `|value - m(A)|`, present in certified mode.
    pub error_bound: Option<f64>,
    /// Objective evaluations spent.
    pub evaluations: u64,
}

/// Computes the cone margin. `resolution` is the target absolute error; with
/// `certify` set (only `n <= 3`) the returned `error_bound` is rigorous.
pub fn inclusion_margin(a: &SquareMatrix, resolution: f64, certify: bool) -> Result<MarginEstimate> {
    if !(resolution > 0.0) {
        return Err(Error::BadParam(format!("resolution must be positive, got {resolution}")));
    }
    let n = a.dim();
    if certify && n > 3 {
        return Err(Error::CertificationUnavailable(format!("dimension {n} > 3")));
    }
    if a.is_zero() {
        let mut witness = vec![0.0; n];
        witness[0] = 1.0;
        return Ok(MarginEstimate {
            value: f64::INFINITY,
            witness,
            error_bound: certify.then_some(0.0),
            evaluations: 0,
        });
    }
    let sigma1 = singular_values(a).largest();
    let obj = Objective { a, skip: SKIP_RELATIVE * sigma1 };
    let mut estimate = match n {
        2 => estimate_2d(&obj),
        3 => estimate_3d(&obj),
        _ => estimate_restarts(&obj),
    };
    if n > 2 {
        let mut best = Best { value: estimate.value, witness: estimate.witness, evaluations: estimate.evaluations };
        refine_special(&obj, sigma1, &mut best);
        estimate = best.finish();
    }
    if certify {
        certify_margin(&obj, sigma1, resolution, estimate)
    } else {
        Ok(estimate)
    }
}

/// `g(x) = <A x, x> / (|A x| |x|)` with its tangential gradient.
struct Objective<'a> {
    a: &'a SquareMatrix,
    skip: f64,
}

impl Objective<'_> {
    fn value(&self, x: &[f64]) -> Option<f64> {
        let y = self.a.mul_vec(x);
        let ny = norm(&y);
        let nx = norm(x);
        if ny < self.skip * nx || ny == 0.0 {
            return None;
        }
        Some((dot(&y, x) / (ny * nx)).clamp(-1.0, 1.0))
    }

    /// Value, tangential gradient and `|A x|` at a unit vector.
    fn value_grad(&self, x: &[f64]) -> Option<(f64, Vec<f64>, f64)> {
        let y = self.a.mul_vec(x);
        let q = norm(&y);
        if q < self.skip || q == 0.0 {
            return None;
        }
        let p = dot(&y, x);
        let aty = self.a.tmul_vec(&y);
        let atx = self.a.tmul_vec(x);
        let mut grad: Vec<f64> = (0..x.len()).map(|i| (y[i] + atx[i]) / q - p * aty[i] / (q * q * q)).collect();
        let radial = dot(&grad, x);
        grad.iter_mut().zip(x).for_each(|(g, xi)| *g -= radial * xi);
        Some(((p / q).clamp(-1.0, 1.0), grad, q))
    }

    fn eval_or_inf(&self, x: &[f64]) -> f64 {
        self.value(x).unwrap_or(f64::INFINITY)
    }
}

#[derive(Default)]
struct Best {
    value: f64,
    witness: Vec<f64>,
    evaluations: u64,
}

impl Best {
    fn new() -> Self {
        Best { value: f64::INFINITY, witness: Vec::new(), evaluations: 0 }
    }

    fn offer(&mut self, value: f64, x: &[f64]) {
        if value < self.value {
            self.value = value;
            self.witness = normalized(x);
        }
    }

    fn finish(self) -> MarginEstimate {
        MarginEstimate { value: self.value, witness: self.witness, error_bound: None, evaluations: self.evaluations }
    }
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let nx = norm(x);
    x.iter().map(|v| v / nx).collect()
}

fn angle_point(theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c, s]
}

fn estimate_2d(obj: &Objective) -> MarginEstimate {
    let step = std::f64::consts::PI / GRID_2D as f64;
    static CIRCLE: std::sync::OnceLock<Vec<[f64; 2]>> = std::sync::OnceLock::new();
    let circle = CIRCLE.get_or_init(|| (0..GRID_2D).map(|i| angle_point(i as f64 * step)).collect());
    let m = obj.a.as_slice();
    let vals: Vec<f64> = circle
        .iter()
        .map(|p| {
            let y = [m[0] * p[0] + m[1] * p[1], m[2] * p[0] + m[3] * p[1]];
            let ny = (y[0] * y[0] + y[1] * y[1]).sqrt();
            let nx = (p[0] * p[0] + p[1] * p[1]).sqrt();
            if ny < obj.skip * nx || ny == 0.0 {
                f64::INFINITY
            } else {
                ((y[0] * p[0] + y[1] * p[1]) / (ny * nx)).clamp(-1.0, 1.0)
            }
        })
        .collect();
    let mut best = Best::new();
    best.evaluations = GRID_2D as u64;

    // Local minima of the cyclic grid (period pi), lowest first.
    let mut minima: Vec<usize> = (0..GRID_2D)
        .filter(|&i| {
            let prev = vals[(i + GRID_2D - 1) % GRID_2D];
            let next = vals[(i + 1) % GRID_2D];
            vals[i].is_finite() && vals[i] <= prev && vals[i] <= next
        })
        .collect();
    minima.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    minima.dedup_by(|a, b| a.abs_diff(*b) <= 1);
    if minima.is_empty() {
        if let Some(i) = (0..GRID_2D).filter(|&i| vals[i].is_finite()).min_by(|&i, &j| vals[i].total_cmp(&vals[j])) {
            minima.push(i);
        }
    }
    for &i in minima.iter().take(4) {
        let center = i as f64 * step;
        best.offer(vals[i], &angle_point(center));
        let f = |t: f64| obj.eval_or_inf(&angle_point(t));
        let (t, v, evals) = golden_section(f, center - step, center + step);
        best.evaluations += evals;
        best.offer(v, &angle_point(t));
    }
    if let Some(t) = extremal_angle_2d(obj.a) {
        let x = angle_point(t);
        if let Some(v) = obj.value(&x) {
            best.offer(v, &x);
        }
        best.evaluations += 1;
    }
    best.finish()
}

/// Direction of the exact minimizer for a 2x2 matrix, from its complex form
/// `A h = alpha h + beta conj(h)`: with `h = e^{i phi}` the objective is
/// `cos arg(alpha + beta e^{-2 i phi})`, minimized where the circle
/// `alpha + beta S^1` is tangent to a ray from 0 or crosses the negative axis.
fn extremal_angle_2d(a: &SquareMatrix) -> Option<f64> {
    let m = a.as_slice();
    let (ar, ai) = (0.5 * (m[0] + m[3]), 0.5 * (m[2] - m[1]));
    let (br, bi) = (0.5 * (m[0] - m[3]), 0.5 * (m[2] + m[1]));
    let (na, nb) = (ar.hypot(ai), br.hypot(bi));
    if nb == 0.0 || na == nb {
        return None;
    }
    let crossing = || {
        let disc = nb * nb - ai * ai;
        (disc >= 0.0).then(|| ar - disc.sqrt()).filter(|x| *x < 0.0).map(|x| (x - ar, -ai))
    };
    let offset = if nb < na {
        let psi = ai.atan2(ar);
        let side = if psi >= 0.0 { 1.0 } else { -1.0 };
        let theta = psi + side * (nb / na).asin();
        if theta.abs() > std::f64::consts::PI {
            crossing()?
        } else {
            let r = (na - nb).sqrt() * (na + nb).sqrt();
            (r * theta.cos() - ar, r * theta.sin() - ai)
        }
    } else {
        crossing()?
    };
    // e^{it} = offset / beta, and phi = -t / 2.
    let t = (offset.1 * br - offset.0 * bi).atan2(offset.0 * br + offset.1 * bi);
    Some(-0.5 * t)
}

/// Golden-section search for a minimum on `[lo, hi]`.
fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64, u64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut evals = 2;
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 <= f2 {
        (x1, f1, evals)
    } else {
        (x2, f2, evals)
    }
}

fn fibonacci_sphere(count: usize) -> impl Iterator<Item = [f64; 3]> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count).map(move |i| {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let (s, c) = (i as f64 * golden_angle).sin_cos();
        [r * c, r * s, z]
    })
}

fn estimate_3d(obj: &Objective) -> MarginEstimate {
    let m = obj.a.as_slice();
    let eval = |p: &[f64; 3]| {
        let y = [
            m[0] * p[0] + m[1] * p[1] + m[2] * p[2],
            m[3] * p[0] + m[4] * p[1] + m[5] * p[2],
            m[6] * p[0] + m[7] * p[1] + m[8] * p[2],
        ];
        let ny = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let nx = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if ny < obj.skip * nx || ny == 0.0 {
            f64::INFINITY
        } else {
            ((y[0] * p[0] + y[1] * p[1] + y[2] * p[2]) / (ny * nx)).clamp(-1.0, 1.0)
        }
    };
    static SPHERE: std::sync::OnceLock<Vec<[f64; 3]>> = std::sync::OnceLock::new();
    let sphere = SPHERE.get_or_init(|| fibonacci_sphere(GRID_3D).collect());
    let mut scored: Vec<(f64, [f64; 3])> = sphere.iter().map(|p| (eval(p), *p)).collect();
    let keep = 256.min(scored.len());
    scored.select_nth_unstable_by(keep - 1, |a, b| a.0.total_cmp(&b.0));
    scored.truncate(keep);
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = Best::new();
    best.evaluations = GRID_3D as u64;
    // The objective is even, so seeds closer than ~0.1 rad up to sign are duplicates.
    let mut seeds: Vec<[f64; 3]> = Vec::new();
    for (v, p) in &scored {
        if seeds.len() == POLISH_CANDIDATES_3D || !v.is_finite() {
            break;
        }
        if seeds.iter().any(|q| (q[0] * p[0] + q[1] * p[1] + q[2] * p[2]).abs() > 0.995) {
            continue;
        }
        seeds.push(*p);
        best.offer(*v, p);
        let (pv, px, evals) = polish(obj, p);
        best.evaluations += evals;
        best.offer(pv, &px);
    }
    best.finish()
}

fn estimate_restarts(obj: &Objective) -> MarginEstimate {
    let n = obj.a.dim();
    let mut rng = SuiteRng::seed_from_u64(RESTART_SEED);
    let mut best = Best::new();
    for _ in 0..RESTARTS_HIGH_DIM {
        let start = unit_vector(&mut rng, n);
        if let Some(v) = obj.value(&start) {
            best.offer(v, &start);
        }
        let (pv, px, evals) = polish(obj, &start);
        best.evaluations += evals + 1;
        best.offer(pv, &px);
    }
    best.finish()
}

/// Inverse iteration with `B^-1` from `start`.
fn inverse_iteration(b: &SquareMatrix, start: &[f64], steps: usize) -> Option<Vec<f64>> {
    let inv = b.inverse()?;
    let mut x = normalized(start);
    for _ in 0..steps {
        let y = inv.mul_vec(&x);
        let ny = norm(&y);
        if !(ny.is_finite() && ny > 0.0) {
            return None;
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    Some(x)
}

/// Directions where narrow basins of the objective live: real eigenvectors
/// (the objective is exactly `-1` at eigenvectors of negative eigenvalues)
/// and the right singular vector of the smallest singular value.
fn special_directions(a: &SquareMatrix, sigma1: f64) -> Vec<Vec<f64>> {
    let n = a.dim();
    let start: Vec<f64> = (0..n).map(|i| 1.0 + 0.37 * i as f64).collect();
    let mut dirs = Vec::new();
    for mu in super::spectrum::real_eigenvalues(a) {
        let eta = 1e-10 * sigma1.max(mu.abs());
        if let Some(v) = inverse_iteration(&a.add_scalar_identity(-(mu + eta)), &start, 8) {
            dirs.push(v);
        }
    }
    let gram = a.transpose().matmul(a);
    let tr: f64 = (0..n).map(|i| gram.get(i, i)).sum();
    if let Some(v) = inverse_iteration(&gram.add_scalar_identity(1e-15 * tr), &start, 30) {
        dirs.push(v);
    }
    dirs
}

/// Points in the spherical cap of angular radius `rho` about unit `center`.
fn cap_points(center: &[f64], rho: f64, count: usize) -> Vec<Vec<f64>> {
    let basis = tangent_basis(center);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let r = rho * ((i as f64 + 0.5) / count as f64).sqrt();
            let phi = golden * i as f64;
            let mut p: Vec<f64> = center.iter().map(|c| c * r.cos()).collect();
            // Spread over the first two tangent directions, then the rest.
            for (k, b) in basis.iter().enumerate() {
                let w = match k {
                    0 => phi.cos(),
                    1 => phi.sin(),
                    _ => ((k as f64 + 1.0) * phi).sin() * 0.5,
                };
                p.iter_mut().zip(b).for_each(|(pi, bi)| *pi += r.sin() * w * bi);
            }
            normalized(&p)
        })
        .collect()
}

/// Searches caps around [`special_directions`] and polishes the best points.
fn refine_special(obj: &Objective, sigma1: f64, best: &mut Best) {
    let a = obj.a;
    let sn = super::svd::singular_values(a).smallest();
    let rho = (20.0 * sn / sigma1).clamp(1e-9, 0.2);
    for d in special_directions(a, sigma1) {
        if let Some(v) = obj.value(&d) {
            best.offer(v, &d);
        }
        let mut pts: Vec<(f64, Vec<f64>)> =
            cap_points(&d, rho, 512).into_iter().map(|p| (obj.eval_or_inf(&p), p)).collect();
        best.evaluations += pts.len() as u64 + 1;
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (v, p) in pts.iter().take(2) {
            if !v.is_finite() {
                continue;
            }
            best.offer(*v, p);
            let (pv, px, evals) = polish(obj, p);
            best.evaluations += evals;
            best.offer(pv, &px);
        }
    }
}

/// Orthonormal basis of the tangent space at unit `x`.
fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs()));
    for &k in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for _ in 0..2 {
            let d = dot(&v, x);
            v.iter_mut().zip(x).for_each(|(a, b)| *a -= d * b);
            for b in &basis {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(a, c)| *a -= d * c);
            }
        }
        let nv = norm(&v);
        if nv > 1e-6 {
            basis.push(v.into_iter().map(|a| a / nv).collect());
        }
    }
    basis
}

fn chart_point(x: &[f64], basis: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let mut p = x.to_vec();
    for (b, &uk) in basis.iter().zip(u) {
        p.iter_mut().zip(b).for_each(|(pi, bi)| *pi += uk * bi);
    }
    normalized(&p)
}

/// Gradient of `u -> g(normalize(x + sum u_k e_k))`.
fn chart_grad(obj: &Objective, x: &[f64], basis: &[Vec<f64>], u: &[f64]) -> Option<Vec<f64>> {
    let mut raw = x.to_vec();
    for (b, &uk) in basis.iter().zip(u) {
        raw.iter_mut().zip(b).for_each(|(pi, bi)| *pi += uk * bi);
    }
    let r = norm(&raw);
    let xi: Vec<f64> = raw.iter().map(|v| v / r).collect();
    let (_, grad, _) = obj.value_grad(&xi)?;
    // grad is tangential at xi, so d xi / d u_k contributes e_k / r.
    Some(basis.iter().map(|b| dot(&grad, b) / r).collect())
}

/// Damped Newton iteration in a tangent chart re-centred every step.
fn polish(obj: &Objective, start: &[f64]) -> (f64, Vec<f64>, u64) {
    let mut x = normalized(start);
    let mut evals = 0u64;
    let Some(mut fx) = obj.value(&x) else {
        return (f64::INFINITY, x, 1);
    };
    for _ in 0..60 {
        let basis = tangent_basis(&x);
        let m = basis.len();
        let zero = vec![0.0; m];
        let Some(g) = chart_grad(obj, &x, &basis, &zero) else { break };
        evals += 1;
        let gnorm = norm(&g);
        if gnorm < 1e-15 {
            break;
        }
        let h = 1e-6;
        let mut hess = vec![0.0; m * m];
        let mut hess_ok = true;
        for l in 0..m {
            let mut up = zero.clone();
            up[l] = h;
            let mut dn = zero.clone();
            dn[l] = -h;
            match (chart_grad(obj, &x, &basis, &up), chart_grad(obj, &x, &basis, &dn)) {
                (Some(gp), Some(gm)) => {
                    for k in 0..m {
                        hess[k * m + l] = (gp[k] - gm[k]) / (2.0 * h);
                    }
                }
                _ => hess_ok = false,
            }
            evals += 2;
        }
        for k in 0..m {
            for l in 0..k {
                let s = 0.5 * (hess[k * m + l] + hess[l * m + k]);
                hess[k * m + l] = s;
                hess[l * m + k] = s;
            }
        }
        let neg_g: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut dir = if hess_ok { cholesky_solve(&hess, m, &neg_g) } else { None }.unwrap_or_else(|| neg_g.clone());
        let dn = norm(&dir);
        if dn > 0.2 {
            dir.iter_mut().for_each(|v| *v *= 0.2 / dn);
        }
        let slope = dot(&g, &dir);
        if slope >= 0.0 {
            dir = neg_g.iter().map(|v| v * 0.2 / gnorm.max(1.0)).collect();
        }
        let slope = dot(&g, &dir);
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let cand: Vec<f64> = dir.iter().map(|v| v * t).collect();
            let p = chart_point(&x, &basis, &cand);
            evals += 1;
            if let Some(v) = obj.value(&p) {
                if v <= fx + 1e-4 * t * slope {
                    accepted = Some((v, p, t * norm(&dir)));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((v, p, step)) => {
                let improvement = fx - v;
                fx = v;
                x = p;
                if step < 1e-14 || improvement <= 0.0 {
                    break;
                }
            }
            None => break,
        }
    }
    (fx, x, evals)
}

fn cholesky_solve(a: &[f64], m: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = a[i * m + j];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / l[j * m + j];
            }
        }
    }
    let mut y = vec![0.0; m];
    for i in 0..m {
        let s: f64 = (0..i).map(|k| l[i * m + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * m + i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|k| l[k * m + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * m + i];
    }
    Some(x)
}

/// A sphere cell: its centre and bounds on the chord and arc length to any
/// point it contains.
struct Cell {
    center: Vec<f64>,
    chord: f64,
    arc: f64,
    shape: CellShape,
}

enum CellShape {
    /// Angular interval `[theta - half, theta + half]`.
    Arc { theta: f64, half: f64 },
    /// Square `[u, u + side] x [v, v + side]` on the cube face normal to `axis`.
    Face { axis: usize, u: f64, v: f64, side: f64 },
}

impl Cell {
    fn arc(theta: f64, half: f64) -> Self {
        Cell {
            center: angle_point(theta).to_vec(),
            chord: 2.0 * (half / 2.0).sin(),
            arc: half,
            shape: CellShape::Arc { theta, half },
        }
    }

    fn face(axis: usize, u: f64, v: f64, side: f64) -> Self {
        let mut p = [0.0; 3];
        let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
        p[axis] = 1.0;
        p[i] = u + side / 2.0;
        p[j] = v + side / 2.0;
        // Radial projection onto the sphere is 1-Lipschitz outside the unit ball.
        let chord = side / std::f64::consts::SQRT_2;
        Cell {
            center: normalized(&p),
            chord,
            arc: 2.0 * (chord / 2.0).min(1.0).asin(),
            shape: CellShape::Face { axis, u, v, side },
        }
    }

    fn split(&self) -> Vec<Cell> {
        match self.shape {
            CellShape::Arc { theta, half } => {
                let q = half / 2.0;
                vec![Cell::arc(theta - q, q), Cell::arc(theta + q, q)]
            }
            CellShape::Face { axis, u, v, side } => {
                let s = side / 2.0;
                vec![
                    Cell::face(axis, u, v, s),
                    Cell::face(axis, u + s, v, s),
                    Cell::face(axis, u, v + s, s),
                    Cell::face(axis, u + s, v + s, s),
                ]
            }
        }
    }
}

fn certify_margin(obj: &Objective, sigma1: f64, resolution: f64, estimate: MarginEstimate) -> Result<MarginEstimate> {
    let n = obj.a.dim();
    let s1 = sigma1 * (1.0 + 1e-12);
    let mut best_value = estimate.value;
    let mut best_witness = estimate.witness;
    let mut evaluations = estimate.evaluations;
    let mut min_lower = f64::INFINITY;

    let mut stack: Vec<Cell> = if n == 2 {
        let half = std::f64::consts::PI / (2 * CERTIFY_INITIAL_2D) as f64;
        (0..CERTIFY_INITIAL_2D).map(|i| Cell::arc((2 * i + 1) as f64 * half, half)).collect()
    } else {
        let side = 2.0 / CERTIFY_INITIAL_FACE as f64;
        let mut cells = Vec::new();
        for axis in 0..3 {
            for i in 0..CERTIFY_INITIAL_FACE {
                for j in 0..CERTIFY_INITIAL_FACE {
                    cells.push(Cell::face(axis, -1.0 + i as f64 * side, -1.0 + j as f64 * side, side));
                }
            }
        }
        cells
    };

    while let Some(cell) = stack.pop() {
        evaluations += 1;
        if evaluations > CERTIFY_BUDGET {
            return Err(Error::CertificationUnavailable(format!(
                "evaluation budget {CERTIFY_BUDGET} exhausted at resolution {resolution:e} (best {best_value}, lower {min_lower})"
            )));
        }
        let lower = match obj.value_grad(&cell.center) {
            Some((g, grad, q)) => {
                if g < best_value {
                    best_value = g;
                    best_witness = cell.center.clone();
                }
                let eta = q - s1 * cell.chord;
                if eta > 0.0 {
                    let curvature = 4.0 * s1 / eta + 9.0 * s1 * s1 / (eta * eta);
                    g - norm(&grad) * cell.arc - 0.5 * curvature * cell.arc * cell.arc - ROUNDING_SLACK
                } else {
                    -1.0
                }
            }
            None => -1.0,
        }
        .max(-1.0);
        if lower >= best_value - resolution {
            min_lower = min_lower.min(lower);
        } else {
            stack.extend(cell.split());
        }
    }
    Ok(MarginEstimate {
        value: best_value,
        witness: best_witness,
        error_bound: Some((best_value - min_lower).max(0.0)),
        evaluations,
    })
}
