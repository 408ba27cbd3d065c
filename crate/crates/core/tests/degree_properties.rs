use invertibility_core::degree::*;
use invertibility_core::matrix::angular_factor;
use invertibility_core::zoo::*;
use invertibility_core::Error;
use num_complex::Complex64;
use std::f64::consts::{LN_2, TAU};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Plain dense winding count, used as an oracle.
fn dense_winding(f: &PlaneMapping, center: Complex64, radius: f64, target: Complex64) -> i64 {
    let n = 1 << 16;
    let w: Vec<Complex64> = (0..n)
        .map(|j| f.eval(center + Complex64::from_polar(radius, TAU * j as f64 / n as f64)).unwrap() - target)
        .collect();
    let total: f64 = (0..n).map(|j| (w[(j + 1) % n] / w[j]).arg()).sum();
    (total / TAU).round() as i64
}

fn whole_plane_zoo() -> Vec<PlaneMapping> {
    let mut v = vec![];
    for k in [0.0, 0.3, 0.6, std::f64::consts::FRAC_1_SQRT_2] {
        v.push(branchex_case1(k).unwrap());
    }
    for eps in [0.25, 0.5, 0.9] {
        v.push(branchex_case2(eps).unwrap());
    }
    v.push(linear_map(c(1.0, 0.0), c(0.0, 0.0)));
    v.push(linear_map(c(0.0, 0.0), c(1.0, 0.0)));
    v.push(linear_map(c(0.3, -1.2), c(0.5, 0.1)));
    v
}

#[test]
fn trivial_windings() {
    let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
    let r = winding_number(&id, c(0.0, 0.0), 1.0, c(0.0, 0.0)).unwrap();
    assert_eq!(r.winding, 1);
    assert!(r.max_step < std::f64::consts::FRAC_PI_2 && r.min_boundary_distance > 0.0);
    assert_eq!(winding_number(&id, c(0.0, 0.0), 1.0, c(3.0, 0.0)).unwrap().winding, 0);
    let sq = branchex_case1(0.0).unwrap();
    assert_eq!(winding_number(&sq, c(0.0, 0.0), 1.0, c(0.0, 0.0)).unwrap().winding, 2);
    let f = branchex_case1(0.6).unwrap();
    assert_eq!(winding_number(&f, c(0.0, 0.0), 0.1, c(0.0, 0.0)).unwrap().winding, 2);
    assert!(matches!(winding_number(&id, c(0.0, 0.0), 1.0, c(1.0, 0.0)), Err(Error::TargetOnImage { .. })));
    assert!(winding_number(&id, c(0.0, 0.0), 0.0, c(1.0, 0.0)).is_err());
}

#[test]
fn windings_match_dense_oracle_and_are_stable_under_doubling() {
    let targets = [c(0.0, 0.0), c(0.05, 0.02), c(-0.3, 0.4), c(2.0, -1.0)];
    for f in whole_plane_zoo() {
        for center in [c(0.0, 0.0), c(0.2, -0.1), c(-0.7, 0.5)] {
            for radius in [0.05, 0.5, 1.3] {
                for &t in &targets {
                    let Ok(rep) = winding_number(&f, center, radius, t) else { continue };
                    assert_eq!(
                        rep.winding,
                        dense_winding(&f, center, radius, t),
                        "{} {center} {radius} {t}",
                        f.label()
                    );
                    let again = winding_number_fn(|z| f.eval(z), center, radius, t, 2 * rep.samples_used).unwrap();
                    assert_eq!(again.winding, rep.winding);
                }
            }
        }
    }
}

#[test]
fn squaring_doubles_the_winding() {
    for theta in [0.0, 0.7, 2.0, -2.9] {
        for conj in [false, true] {
            let u = Complex64::from_polar(1.0, theta);
            let f = if conj { linear_map(c(0.0, 0.0), u) } else { linear_map(u, c(0.0, 0.0)) };
            for radius in [0.1, 1.0, 7.0] {
                let w = winding_number(&f, c(0.0, 0.0), radius, c(0.0, 0.0)).unwrap().winding;
                let w2 = winding_number_fn(|z| f.eval(z).map(|v| v * v), c(0.0, 0.0), radius, c(0.0, 0.0), 256)
                    .unwrap()
                    .winding;
                assert_eq!(w, if conj { -1 } else { 1 });
                assert_eq!(w2, 2 * w);
            }
        }
    }
}

#[test]
fn indices_of_linear_maps() {
    let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
    let conj = linear_map(c(0.0, 0.0), c(1.0, 0.0));
    for p in [c(0.0, 0.0), c(1.0, -2.0), c(-0.3, 0.8), c(5.0, 5.0)] {
        assert_eq!(index_at(&id, p, 0.1).unwrap(), 1);
        assert_eq!(index_at(&conj, p, 0.1).unwrap(), -1);
    }
}

#[test]
fn branch_points_of_the_examples() {
    for eps in [0.25, 0.5, 0.9] {
        let f = branchex_case2(eps).unwrap();
        assert_eq!(index_at(&f, c(0.0, 0.0), 0.1).unwrap(), 2);
        for p in [c(0.5, 0.3), c(-0.4, 0.2), c(0.3, -0.6), c(-1.0, -0.1)] {
            assert_eq!(index_at(&f, p, 0.01).unwrap(), 1, "eps={eps} p={p}");
        }
    }
    for k in [0.0, 0.3, 0.6] {
        let f = branchex_case1(k).unwrap();
        assert_eq!(index_at(&f, c(0.0, 0.0), 0.1).unwrap(), 2);
        for p in [c(0.5, 0.3), c(-0.4, 0.2), c(0.3, -0.6), c(0.7, 0.0), c(0.0, -0.4)] {
            assert_eq!(index_at(&f, p, 0.01).unwrap(), 1, "k={k} p={p}");
        }
    }
}

#[test]
fn regularized_winding_is_homotopy_invariant() {
    let f = branchex_case1(0.6).unwrap();
    let radius = 0.5;
    let lambdas: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
    let mut windings = vec![];
    for &l in &lambdas {
        let g = if l == 0.0 { f.clone() } else { f.regularize(l).unwrap() };
        match winding_number(&g, c(0.0, 0.0), radius, c(0.0, 0.0)) {
            Ok(r) => windings.push((l, r.winding, r.min_boundary_distance)),
            Err(Error::TargetOnImage { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    for w in windings.windows(2) {
        let ((l0, w0, m0), (l1, w1, _)) = (w[0], w[1]);
        // The homotopy moves boundary values by at most (l1 - l0) * radius.
        if (l1 - l0) * radius < m0 {
            assert_eq!(w0, w1, "lambda {l0} -> {l1}");
        }
    }
    assert_eq!(windings.first().unwrap().1, 2);
    assert_eq!(windings.last().unwrap().1, 1);
}

fn margin_floor(f: &PlaneMapping, center: Complex64, half: f64) -> f64 {
    let mut grid = GridSpec::square(half, 60, 1e-4, 3);
    grid.lo = vec![center.re - half, center.im - half];
    grid.hi = vec![center.re + half, center.im + half];
    let samples = sample_field(f, &grid).unwrap();
    let mut floor = summarize(&samples).min_margin.unwrap();
    if let Ok(d) = f.deriv(center) {
        let m = invertibility_core::matrix::inclusion_margin(&d.to_matrix(), 1e-10, false).unwrap().value;
        floor = floor.min(m);
    }
    floor
}

#[test]
fn regularized_liminf_bound() {
    let mut cases: Vec<(PlaneMapping, Complex64)> = vec![];
    for f in whole_plane_zoo() {
        for a in [c(0.0, 0.0), c(0.4, 0.3), c(-0.5, 0.2)] {
            cases.push((f.clone(), a));
        }
    }
    for a in [c(1.0, 0.0), c(0.8, 0.5)] {
        cases.push((power_half_plane(), a));
    }
    let mut nontrivial = 0;
    for (f, a) in cases {
        let delta = margin_floor(&f, a, 0.12);
        for lambda in [0.1, 1.0, 4.0] {
            let g = f.regularize(lambda).unwrap();
            // Quadratic terms are negligible once r is small against lambda.
            let radii = [0.1 * lambda.min(1.0), 0.01 * lambda.min(1.0), 0.001 * lambda.min(1.0)];
            let rep = liminf_probe(&g, &[a.re, a.im], &radii).unwrap();
            let bound = lambda * angular_factor(delta) / 2.0;
            if bound > 1e-3 {
                nontrivial += 1;
            }
            for row in &rep.rows {
                assert!(row.min_ratio >= bound - 1e-6, "{} a={a} lambda={lambda}: {row:?} < {bound}", f.label());
            }
        }
    }
    assert!(nontrivial > 20);
}

#[test]
fn liminf_of_the_identity_and_the_ball_axis() {
    let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
    let rep = liminf_probe(&id, &[0.3, -0.2], &[0.1, 0.01, 0.001]).unwrap();
    for row in &rep.rows {
        assert!((row.min_ratio - 1.0).abs() < 1e-9);
    }
    for n in [2, 3] {
        let f = ball_example(n, 0.4).unwrap();
        let mut a = vec![0.0; n];
        a[n - 1] = 0.3;
        let rep = liminf_probe(&f, &a, &[0.1, 0.01, 0.001]).unwrap();
        // The lattice misses the axis by about sqrt(4 pi / 4096) in three dimensions.
        let cap = if n == 2 { 1e-9 } else { 0.05 };
        assert!(rep.rows.iter().all(|row| row.min_ratio < cap), "{rep:?}");
        for r in [0.1, 0.01, 0.001] {
            let mut x = a.clone();
            x[n - 1] += r;
            assert_eq!(f.eval_real(&x).unwrap(), vec![0.0; n]);
        }
        let mut off = vec![0.0; n];
        off[0] = 0.5;
        let rep = liminf_probe(&f, &off, &[0.1, 0.01, 0.001]).unwrap();
        assert!(rep.overall_min > 0.1, "{rep:?}");
    }
    assert!(liminf_probe(&id, &[0.0, 0.0], &[0.01, 0.1]).is_err());
    assert!(liminf_probe(&id, &[0.0], &[0.1]).is_err());
}

#[test]
fn collision_witnesses() {
    let f = branchex_case1(0.6).unwrap();
    for z in [c(0.3, 0.4), c(-1.0, 0.2), c(0.01, -0.7)] {
        let w = check_witness(&f, &[z.re, z.im], &[-z.re, -z.im], 1e-12).unwrap().unwrap();
        assert_eq!(w.image_gap, 0.0);
    }
    assert!(check_witness(&f, &[0.0, 0.0], &[0.0, 0.0], 1e-12).unwrap().is_none());
    match collision_search(&f, &[-1.0, -1.0], &[1.0, 1.0], 64, 9, 1e-9).unwrap() {
        CollisionOutcome::Found(w) => {
            assert!(w.image_gap <= 1e-9 && w.point_gap >= COLLISION_SEPARATION);
        }
        other => panic!("{other:?}"),
    }
    for n in [2, 3, 4] {
        let b = ball_example(n, 0.4).unwrap();
        let mut x = vec![0.0; n];
        x[n - 1] = 0.3;
        let mut y = x.clone();
        y[n - 1] = -0.3;
        assert_eq!(b.eval_real(&x).unwrap(), vec![0.0; n]);
        assert!(check_witness(&b, &x, &y, 0.0).unwrap().is_some());
    }
    let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
    assert_eq!(
        collision_search(&id, &[-1.0, -1.0], &[1.0, 1.0], 200, 9, 1e-9).unwrap(),
        CollisionOutcome::NotFound { pairs_tried: 200 }
    );
    let a = collision_search(&f, &[-1.0, -1.0], &[1.0, 1.0], 64, 5, 1e-9).unwrap();
    assert_eq!(a, collision_search(&f, &[-1.0, -1.0], &[1.0, 1.0], 64, 5, 1e-9).unwrap());
}

/// Midpoint-rule oracle for `int_h^1 s^(n-2-q) ds` after substituting `s = e^u`.
fn quadrature(n: usize, q: f64, h: f64) -> f64 {
    let m = 200_000;
    let (a, b) = (h.ln(), 0.0);
    let du = (b - a) / m as f64;
    (0..m).map(|i| ((n as f64 - 1.0 - q) * (a + (i as f64 + 0.5) * du)).exp() * du).sum()
}

#[test]
fn radial_integrability_tables() {
    let h: Vec<f64> = (1..=20).map(|j| 0.5f64.powi(j)).collect();
    for n in [2usize, 3, 4] {
        let critical = radial_integrability(n, n as f64 - 1.0, &h).unwrap();
        for row in &critical {
            assert_eq!(row.increment, LN_2);
            assert!((row.integral + row.h.ln()).abs() < 1e-12);
        }
        let sub = radial_integrability(n, n as f64 - 1.5, &h).unwrap();
        assert!(sub.windows(2).all(|w| w[1].increment < w[0].increment));
        assert!(sub.last().unwrap().increment < 1e-3);
        for row in sub.iter().chain(&critical) {
            let q = if critical.contains(row) { n as f64 - 1.0 } else { n as f64 - 1.5 };
            let exact = quadrature(n, q, row.h);
            assert!((row.integral - exact).abs() < 1e-8 * exact.max(1.0));
            let next = quadrature(n, q, row.h / 2.0);
            assert!((row.increment - (next - exact)).abs() < 1e-8);
        }
    }
    let r = radial_integrability(3, 1.5, &[0.25, 0.01]).unwrap();
    assert!((r[0].integral - 2.0 * (1.0 - 0.5)).abs() < 1e-14);
    let r = radial_integrability(2, 0.5, &[1e-12]).unwrap();
    assert!((r[0].integral - 2.0).abs() < 1e-5);
    assert!(radial_integrability(1, 0.5, &[0.5]).is_err());
    assert!(radial_integrability(3, 0.0, &[0.5]).is_err());
    assert!(radial_integrability(3, 1.0, &[0.1, 0.5]).is_err());
}

#[test]
fn reports_serialize() {
    let id = linear_map(c(1.0, 0.0), c(0.0, 0.0));
    let r = winding_number(&id, c(0.0, 0.0), 1.0, c(0.0, 0.0)).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<WindingReport>(&s).unwrap(), r);
    let f = branchex_case1(0.6).unwrap();
    let w = check_witness(&f, &[0.2, 0.1], &[-0.2, -0.1], 1e-12).unwrap().unwrap();
    let s = serde_json::to_string(&CollisionOutcome::Found(w.clone())).unwrap();
    assert!(s.contains("\"outcome\":\"found\""));
    assert_eq!(serde_json::from_str::<CollisionOutcome>(&s).unwrap(), CollisionOutcome::Found(w));
}
