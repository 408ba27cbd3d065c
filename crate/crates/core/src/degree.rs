//! Planar degree and injectivity probes.
//!
//! Winding numbers are computed from principal argument increments along a
//! sampled circle, doubling the sample count until every increment is below
//! `pi / 2`. Collision search only ever falsifies injectivity.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, SquareMatrix};
use crate::rng::split_rng;
use crate::zoo::{Mapping, PlaneMapping};

pub const WINDING_START_SAMPLES: usize = 256;
pub const WINDING_MAX_SAMPLES: usize = 1 << 20;
/// Minimum separation of a collision witness.
pub const COLLISION_SEPARATION: f64 = 1e-3;
pub const PROBE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub winding: i64,
    pub samples_used: usize,
    pub min_boundary_distance: f64,
    pub max_step: f64,
}

/// Winding number of `f` restricted to the circle `|z - center| = radius`
/// about `target`.
pub fn winding_number(f: &PlaneMapping, center: Complex64, radius: f64, target: Complex64) -> Result<WindingReport> {
    winding_number_fn(|z| f.eval(z), center, radius, target, WINDING_START_SAMPLES)
}

/// Same as [`winding_number`] for an arbitrary continuous map, starting from
/// `start_samples` points.
pub fn winding_number_fn<F>(
    f: F,
    center: Complex64,
    radius: f64,
    target: Complex64,
    start_samples: usize,
) -> Result<WindingReport>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::BadParam(format!("radius must be positive, got {radius}")));
    }
    let mut samples = start_samples.max(8);
    while samples <= WINDING_MAX_SAMPLES {
        let w: Vec<Complex64> = (0..samples)
            .into_par_iter()
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / samples as f64;
                f(center + Complex64::from_polar(radius, t)).map(|v| v - target)
            })
            .collect::<Result<_>>()?;
        let min_dist = w.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if min_dist < 1e-9 * radius {
            return Err(Error::TargetOnImage { distance: min_dist });
        }
        let mut total = 0.0f64;
        let mut comp = 0.0f64;
        let mut max_step = 0.0f64;
        for j in 0..samples {
            let step = (w[(j + 1) % samples] / w[j]).arg();
            max_step = max_step.max(step.abs());
            // Neumaier summation.
            let t = total + step;
            comp += if total.abs() >= step.abs() { (total - t) + step } else { (step - t) + total };
            total = t;
        }
        if max_step < std::f64::consts::FRAC_PI_2 {
            let turns = (total + comp) / std::f64::consts::TAU;
            return Ok(WindingReport {
                winding: turns.round() as i64,
                samples_used: samples,
                min_boundary_distance: min_dist,
                max_step,
            });
        }
        samples *= 2;
    }
    Err(Error::Inconclusive(format!("argument steps stayed above pi/2 at {WINDING_MAX_SAMPLES} samples")))
}

/// Topological index at `point`: the winding of `f` about `f(point)` on
/// circles of radius `r`, `r/2`, `r/4`, which must agree.
pub fn index_at(f: &PlaneMapping, point: Complex64, radius: f64) -> Result<i64> {
    let target = f.eval(point)?;
    let values = [1.0, 0.5, 0.25]
        .iter()
        .map(|s| winding_number(f, point, radius * s, target).map(|r| r.winding))
        .collect::<Result<Vec<_>>>()?;
    if values.iter().all(|&v| v == values[0]) {
        Ok(values[0])
    } else {
        Err(Error::Inconclusive(format!("index did not stabilize across radii: {values:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub image_gap: f64,
    pub point_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CollisionOutcome {
    Found(CollisionWitness),
    /// No witness within the budget. This says nothing about injectivity.
    NotFound {
        pairs_tried: usize,
    },
}

/// Accepts `(x1, x2)` as a witness if `|f(x1) - f(x2)| <= tol` and
/// `|x1 - x2| >= COLLISION_SEPARATION`.
pub fn check_witness<M: Mapping + ?Sized>(f: &M, x1: &[f64], x2: &[f64], tol: f64) -> Result<Option<CollisionWitness>> {
    let y1 = f.eval_real(x1)?;
    let y2 = f.eval_real(x2)?;
    let image_gap = norm(&sub(&y1, &y2));
    let point_gap = norm(&sub(x1, x2));
    Ok((image_gap <= tol && point_gap >= COLLISION_SEPARATION).then(|| CollisionWitness {
        x1: x1.to_vec(),
        x2: x2.to_vec(),
        image_gap,
        point_gap,
    }))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn jacobian_or_fd<M: Mapping + ?Sized>(f: &M, x: &[f64]) -> Option<SquareMatrix> {
    if let Ok(j) = f.jacobian(x) {
        return Some(j);
    }
    let n = f.dim();
    let h = 1e-7;
    let mut j = SquareMatrix::zeros(n);
    for c in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[c] += h;
        xm[c] -= h;
        let fp = f.eval_real(&xp).ok()?;
        let fm = f.eval_real(&xm).ok()?;
        for r in 0..n {
            j.set(r, c, (fp[r] - fm[r]) / (2.0 * h));
        }
    }
    Some(j)
}

/// Levenberg-Marquardt on `|f(x) - y|^2` from `x`, staying inside the domain.
fn pull_to_preimage<M: Mapping + ?Sized>(f: &M, y: &[f64], mut x: Vec<f64>, tol: f64) -> Vec<f64> {
    let n = f.dim();
    let Ok(fx) = f.eval_real(&x) else { return x };
    let mut r = sub(&fx, y);
    let mut cost = norm(&r);
    let mut mu = 1e-3;
    for _ in 0..100 {
        if cost <= tol {
            break;
        }
        let Some(j) = jacobian_or_fd(f, &x) else { break };
        let jtr = j.tmul_vec(&r);
        let jtj = j.transpose().matmul(&j);
        let mut improved = false;
        for _ in 0..30 {
            let scale = (0..n).map(|i| jtj.get(i, i)).fold(0.0f64, f64::max).max(1e-300);
            let Some(inv) = jtj.add_scalar_identity(mu * scale).inverse() else {
                mu *= 10.0;
                continue;
            };
            let step = inv.mul_vec(&jtr);
            let cand: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a - s).collect();
            if let Ok(fc) = f.eval_real(&cand) {
                let rc = sub(&fc, y);
                let c = norm(&rc);
                if c < cost {
                    x = cand;
                    r = rc;
                    cost = c;
                    mu = (mu * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    x
}

fn random_point_in_box<R: Rng>(rng: &mut R, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter().zip(hi).map(|(l, h)| rng.gen_range(*l..*h)).collect()
}

/// Seeded search for two separated points with nearly equal images.
///
/// Pair `i` draws `x1` and a start point from the box with the stream
/// `(seed, i)`, then descends `|f(x1) - f(x2)|` in `x2` alone. The first pair
/// in index order that yields a witness is returned.
pub fn collision_search<M: Mapping + ?Sized>(
    f: &M,
    lo: &[f64],
    hi: &[f64],
    pairs: usize,
    seed: u64,
    tol: f64,
) -> Result<CollisionOutcome> {
    let n = f.dim();
    if lo.len() != n || hi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: lo.len().min(hi.len()) });
    }
    if lo.iter().zip(hi).any(|(l, h)| !(l < h)) {
        return Err(Error::BadParam("collision box is empty".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::BadParam(format!("tolerance must be positive, got {tol}")));
    }
    let found = (0..pairs).into_par_iter().find_map_first(|i| {
        let mut rng = split_rng(seed, i as u64);
        let x1 = random_point_in_box(&mut rng, lo, hi);
        let start = random_point_in_box(&mut rng, lo, hi);
        if !f.contains(&x1) || !f.contains(&start) {
            return None;
        }
        let y1 = f.eval_real(&x1).ok()?;
        let x2 = pull_to_preimage(f, &y1, start, 0.5 * tol);
        check_witness(f, &x1, &x2, tol).ok().flatten()
    });
    Ok(match found {
        Some(w) => CollisionOutcome::Found(w),
        None => CollisionOutcome::NotFound { pairs_tried: pairs },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiminfRow {
    pub r: f64,
    pub min_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiminfReport {
    pub rows: Vec<LiminfRow>,
    pub overall_min: f64,
    /// Whether the minimum ratio is nonincreasing as `r` shrinks.
    pub nonincreasing: bool,
}

/// Unit directions used by the probe: a circle for `n = 2`, a Fibonacci
/// lattice for `n = 3`, seeded Gaussian directions above.
pub fn probe_directions(n: usize, count: usize) -> Vec<Vec<f64>> {
    match n {
        2 => (0..count)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    vec![r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
        _ => (0..count).map(|i| crate::rng::unit_vector(&mut split_rng(0x5EED, i as u64), n)).collect(),
    }
}

/// `min |f(x) - f(a)| / r` over sampled spheres `|x - a| = r`.
pub fn liminf_probe<M: Mapping + ?Sized>(f: &M, a: &[f64], radii: &[f64]) -> Result<LiminfReport> {
    let n = f.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: a.len() });
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadParam("radii must be positive and decreasing".into()));
    }
    let fa = f.eval_real(a)?;
    let dirs = probe_directions(n, PROBE_SAMPLES);
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let ratios = dirs
            .par_iter()
            .map(|d| {
                let x: Vec<f64> = a.iter().zip(d).map(|(ai, di)| ai + r * di).collect();
                f.eval_real(&x).map(|fx| norm(&sub(&fx, &fa)) / r)
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(LiminfRow { r, min_ratio: ratios.into_iter().fold(f64::INFINITY, f64::min) });
    }
    let overall_min = rows.iter().map(|x| x.min_ratio).fold(f64::INFINITY, f64::min);
    let nonincreasing = rows.windows(2).all(|w| w[1].min_ratio <= w[0].min_ratio);
    Ok(LiminfReport { rows, overall_min, nonincreasing })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityRow {
    pub h: f64,
    /// `I(h) = int_h^1 s^(n - 2 - q) ds`
    #[serde(rename = "I")]
    pub integral: f64,
    /// `I(h / 2) - I(h)`
    pub increment: f64,
}

/// Partial integrals of `s^(-q) s^(n-2)` over `[h, 1]`, in closed form.
pub fn radial_integrability(n: usize, q: f64, h_list: &[f64]) -> Result<Vec<IntegrabilityRow>> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::BadParam(format!("q must be positive, got {q}")));
    }
    if h_list.iter().any(|h| !(*h > 0.0 && *h < 1.0)) || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadParam("cutoffs must be decreasing in (0, 1)".into()));
    }
    let e = n as f64 - 1.0 - q;
    Ok(h_list
        .iter()
        .map(|&h| {
            let (integral, increment) = if e == 0.0 {
                (-h.ln(), std::f64::consts::LN_2)
            } else {
                let lh = h.ln();
                (-(e * lh).exp_m1() / e, (e * lh).exp() * -(-e * std::f64::consts::LN_2).exp_m1() / e)
            };
            IntegrabilityRow { h, integral, increment }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{ball_example, branchex_case1, branchex_case2, linear_map};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_square() {
        let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(winding_number(&id, c(0.0, 0.0), 1.0, c(0.0, 0.0)).unwrap().winding, 1);
        let sq = branchex_case1(0.0).unwrap();
        let r = winding_number(&sq, c(0.0, 0.0), 1.0, c(0.0, 0.0)).unwrap();
        assert_eq!(r.winding, 2);
        assert!(r.max_step < std::f64::consts::FRAC_PI_2 && r.min_boundary_distance > 0.0);
        let f = branchex_case1(0.6).unwrap();
        assert_eq!(winding_number(&f, c(0.0, 0.0), 0.1, c(0.0, 0.0)).unwrap().winding, 2);
    }

    #[test]
    fn target_on_image_is_rejected() {
        let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(winding_number(&id, c(0.0, 0.0), 1.0, c(1.0, 0.0)), Err(Error::TargetOnImage { .. })));
    }

    #[test]
    fn indices() {
        let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
        let conj = linear_map(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(index_at(&id, c(0.3, -0.2), 0.1).unwrap(), 1);
        assert_eq!(index_at(&conj, c(0.0, 0.0), 0.1).unwrap(), -1);
        assert_eq!(index_at(&branchex_case2(0.5).unwrap(), c(0.0, 0.0), 0.1).unwrap(), 2);
    }

    #[test]
    fn collisions() {
        let f = branchex_case1(0.6).unwrap();
        let w = check_witness(&f, &[0.4, 0.2], &[-0.4, -0.2], 1e-12).unwrap().unwrap();
        assert_eq!(w.image_gap, 0.0);
        let b = ball_example(3, 0.5).unwrap();
        assert!(check_witness(&b, &[0.0, 0.0, 0.3], &[0.0, 0.0, -0.3], 0.0).unwrap().is_some());
        let out = collision_search(&f, &[-1.0, -1.0], &[1.0, 1.0], 64, 3, 1e-9).unwrap();
        assert!(matches!(out, CollisionOutcome::Found(_)));
        let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
        let out = collision_search(&id, &[-1.0, -1.0], &[1.0, 1.0], 64, 3, 1e-9).unwrap();
        assert_eq!(out, CollisionOutcome::NotFound { pairs_tried: 64 });
    }

    #[test]
    fn liminf_identity() {
        let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
        let rep = liminf_probe(&id, &[0.2, 0.1], &[0.1, 0.01, 0.001]).unwrap();
        for row in &rep.rows {
            assert!((row.min_ratio - 1.0).abs() < 1e-9);
        }
        assert!(liminf_probe(&id, &[0.0, 0.0], &[0.01, 0.1]).is_err());
    }

    #[test]
    fn integrability_tables() {
        let t = radial_integrability(3, 2.0, &[0.5, 0.25, 0.125]).unwrap();
        for row in &t {
            assert!((row.integral - (1.0 / row.h).ln()).abs() < 1e-15);
            assert_eq!(row.increment, std::f64::consts::LN_2);
        }
        let t = radial_integrability(3, 1.5, &[0.1, 0.01, 1e-4]).unwrap();
        for row in &t {
            assert!((row.integral - 2.0 * (1.0 - row.h.sqrt())).abs() < 1e-14);
        }
        assert!(t[2].increment < t[1].increment && t[1].increment < t[0].increment);
        let t = radial_integrability(2, 0.5, &[1e-8]).unwrap();
        assert!((t[0].integral - 2.0).abs() < 1e-3);
        assert!(radial_integrability(3, 0.0, &[0.5]).is_err());
        assert!(radial_integrability(3, 1.0, &[0.25, 0.5]).is_err());
    }
}
