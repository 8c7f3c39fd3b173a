use std::f64::consts::PI;

use beurling_lab::geometry::Domain;
use beurling_lab::operators::*;
use beurling_lab::parallel::Exec;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn mi(a: i32, b: i32) -> MultiIndex {
    MultiIndex::new(a, b)
}

fn square() -> Domain {
    Domain::square(c(0.0, 0.0), 0.5)
}

/// Points at distance at least `margin` from the boundary.
fn interior_probes(domain: &Domain, count: usize, margin: f64, seed: u64) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    while out.len() < count {
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if domain.contains(z) && domain.boundary_distance(z) > margin {
            out.push(z);
        }
    }
    out
}

#[test]
fn kernel_examples() {
    assert!((kernel(mi(-2, 0), c(0.0, 1.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
    let z = c(1.0, 1.0);
    assert!((kernel(mi(-3, 1), z).unwrap() - z.conj() / z.powi(3)).norm() < 1e-15);
    assert_eq!(kernel(mi(0, 0), c(0.3, -2.0)).unwrap(), c(1.0, 0.0));
    assert!(kernel(mi(-1, 0), c(0.0, 0.0)).is_err());
}

#[test]
fn principal_value_examples() {
    let disk = Domain::unit_disk();
    let b = t_char_pv(&disk, mi(-2, 0), c(0.3, -0.4), &[0.1, 0.05, 0.01]).unwrap();
    assert!((b.value / -PI).norm() < 1e-6);
    let h = t_char_pv(&Domain::upper_half_plane(), mi(-3, 0), c(0.0, 1.0), &[]).unwrap();
    assert!(h.value.norm() < 1e-6, "{}", h.value);
    let out = t_char_pv(&disk, mi(-2, 0), c(2.0, 0.0), &[]).unwrap();
    assert!((out.value / -PI - c(-0.25, 0.0)).norm() < 1e-6);
    assert!(t_char_pv(&disk, mi(-2, 0), c(1.0, 0.0), &[]).is_err());
}

#[test]
fn contour_agrees_with_principal_values() {
    for domain in [Domain::unit_disk(), square()] {
        for z in interior_probes(&domain, 8, 0.05, 1) {
            for (g, tol) in [(mi(-2, 0), 1e-6), (mi(-3, 1), 1e-5)] {
                let a = t_char_contour(&domain, g, z).unwrap().value;
                let b = t_char_pv(&domain, g, z, &[]).unwrap().value;
                let scale = a.norm().max(b.norm()).max(1.0);
                assert!((a - b).norm() < tol * scale, "{g} at {z}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn closed_forms_agree_with_contour() {
    for domain in [Domain::unit_disk(), square(), Domain::disk(c(0.2, -0.1), 0.7)] {
        for z in interior_probes(&domain, 6, 0.05, 2) {
            for g in [mi(-2, 0), mi(-3, 1), mi(-4, 2), mi(-3, 0), mi(-1, 0), mi(0, -2), mi(1, 2)] {
                let a = t_char_contour(&domain, g, z).unwrap().value;
                let b = t_char_closed(&domain, g, z).unwrap().value;
                assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "{g} at {z}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn annulus_cancellation() {
    // ∫_{ρ₁<|w|<ρ₂} w^{j₁} w̄^{j₂-1} dm vanishes unless j₂ = j₁ + 1.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 10 {
        let (j1, j2) = (rng.gen_range(0..6), rng.gen_range(1..7));
        if j2 == j1 + 1 {
            continue;
        }
        let g = mi(j1, j2 - 1);
        let v = |r: f64| t_char_contour(&Domain::disk(c(0.0, 0.0), r), g, c(0.0, 0.0)).unwrap().value;
        let ann = v(1.3) - v(0.4);
        let scale = 1.3f64.powi(j1 + j2 + 1);
        assert!(ann.norm() < 1e-12 * scale, "({j1}, {j2}): {ann}");
        done += 1;
    }
    let area = t_char_contour(&Domain::disk(c(0.0, 0.0), 1.0), mi(0, 0), c(0.0, 0.0)).unwrap().value;
    assert!((area - c(PI, 0.0)).norm() < 1e-12);
}

fn wirtinger_fd(f: impl Fn(C) -> C, z: C, h: f64) -> (C, C) {
    let dx = (f(z + h) - f(z - h)) / (2.0 * h);
    let dy = (f(z + C::i() * h) - f(z - C::i() * h)) / (2.0 * h);
    (0.5 * (dx - C::i() * dy), 0.5 * (dx + C::i() * dy))
}

#[test]
fn ladder_matches_finite_differences() {
    let dom = square();
    let step = 1e-4;
    let cases = [
        (mi(-2, 0), mi(1, 0)),
        (mi(-3, 1), mi(1, 0)),
        (mi(-3, 1), mi(0, 1)),
        (mi(-2, 1), mi(0, 1)),
        (mi(-4, 2), mi(0, 1)),
        (mi(-2, 0), mi(0, 1)),
        (mi(-1, 0), mi(0, 1)),
    ];
    for z in interior_probes(&dom, 5, 20.0 * step, 4) {
        for (g, a) in cases {
            let f = |w: C| t_char_contour(&dom, g, w).unwrap().value;
            let (dz, dzb) = wirtinger_fd(f, z, step);
            let got = if a.g1 == 1 { dz } else { dzb };
            let want = match derivative_ladder(g, a).unwrap() {
                LadderCase::Reduce { constant, index } => t_char_contour(&dom, index, z).unwrap().value * constant,
                LadderCase::Zero => c(0.0, 0.0),
                LadderCase::Identity { constant } => c(constant, 0.0),
            };
            let scale = want.norm().max(1.0);
            assert!((got - want).norm() < 1e-3 * scale, "{g}, {a} at {z}: {got} vs {want}");
        }
    }
}

#[test]
fn density_examples() {
    let disk = Domain::unit_disk();
    let one = FnDensity(|_| c(1.0, 0.0));
    let a = t_f(&disk, mi(0, 0), &one, c(0.7, 0.1)).unwrap().value;
    assert!((a.re - PI).abs() < 1e-6 * PI);
    assert!(t_f(&disk, mi(-1, 0), &one, c(0.0, 0.0)).unwrap().value.norm() < 1e-9);
    let half = t_f(&disk, mi(-1, 0), &one, c(0.5, 0.0)).unwrap().value;
    assert!((half - c(PI * 0.5, 0.0)).norm() < 1e-7, "{half}");
}

#[test]
fn young_bound_on_grid() {
    let disk = Domain::unit_disk();
    let f = FnDensity(|w: C| c((3.0 * w.re).cos(), w.im * w.re));
    let n = 20;
    let h = 2.0 / n as f64;
    let nodes: Vec<C> = (0..n * n)
        .map(|k| c(-1.0 + h * (0.5 + (k % n) as f64), -1.0 + h * (0.5 + (k / n) as f64)))
        .filter(|z| disk.contains(*z))
        .collect();
    for g in [mi(-1, 0), mi(0, -1), mi(1, 0), mi(1, 1)] {
        for p in [1.0, 2.0, 4.0] {
            let lp = |vals: &[f64]| (vals.iter().map(|v| v.powf(p)).sum::<f64>() * h * h).powf(1.0 / p);
            let tf: Vec<f64> = Exec::default().map(&nodes, |z| t_f(&disk, g, &f, *z).unwrap().value.norm());
            let fv: Vec<f64> = nodes.iter().map(|z| f.0(*z).norm()).collect();
            let bound = 2f64.powi(g.homogeneity() + 2) * lp(&fv);
            assert!(lp(&tf) <= bound * (1.0 + 1e-9), "{g}, p = {p}: {} > {bound}", lp(&tf));
        }
    }
}

const BOX: f64 = 2.048;

fn mollified_grid(domain: &Domain, n: usize) -> GridFunction {
    let m = Mollified::of(domain, 0.02).unwrap();
    GridFunction::from_fn(n, 2.0 * BOX / n as f64, c(-BOX, -BOX), move |z| c(m.value(z), 0.0), Exec::default()).unwrap()
}

#[test]
fn oracle_triangle_on_disk_and_square() {
    let n = 1024;
    for (domain, seed) in [(Domain::unit_disk(), 5), (square(), 6)] {
        let f = mollified_grid(&domain, n);
        let fft = fft_beurling(&f, Exec::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut count = 0;
        let mut worst: f64 = 0.0;
        while count < 20 {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let z = fft.node(i, j);
            if !domain.contains(z) || domain.boundary_distance(z) < 0.15 {
                continue;
            }
            let pv = t_char_pv(&domain, mi(-2, 0), z, &[]).unwrap().value / -PI;
            let ct = t_char_contour(&domain, mi(-2, 0), z).unwrap().value / -PI;
            let ff = fft.get(i, j);
            let d = (pv - ct).norm().max((pv - ff).norm()).max((ct - ff).norm());
            worst = worst.max(d);
            count += 1;
        }
        eprintln!("triangle worst {worst:e}");
        assert!(worst < 1e-3);
    }
}

#[test]
fn fft_is_linear() {
    let n = 256;
    let h = 4.0 / n as f64;
    let ex = Exec::default();
    let f = GridFunction::from_fn(n, h, c(-2.0, -2.0), |z| c((-(z.norm_sqr()) * 20.0).exp(), 0.0), ex).unwrap();
    let g = GridFunction::from_fn(n, h, c(-2.0, -2.0), |z| c(0.0, z.re * (-(z - 0.2).norm_sqr() * 30.0).exp()), ex).unwrap();
    let (a, b) = (c(0.7, -1.2), c(-0.3, 2.0));
    let lhs = fft_beurling(&f.combine(&g, |x, y| a * x + b * y).unwrap(), ex).unwrap();
    let bf = fft_beurling(&f, ex).unwrap();
    let bg = fft_beurling(&g, ex).unwrap();
    let rhs = bf.combine(&bg, |x, y| a * x + b * y).unwrap();
    // The free-space correction lives on a support-dependent disk.
    let disks = [&f, &g].map(|u| correction_disk(u).unwrap());
    let mut d: f64 = 0.0;
    for k in 0..n * n {
        let z = lhs.node(k % n, k / n);
        if disks.iter().all(|(c0, r)| (z - c0).norm() <= *r) {
            d = d.max((lhs.data[k] - rhs.data[k]).norm());
        }
    }
    assert!(d < 1e-12 * lhs.sup(), "{d}");
}

#[test]
fn second_iterate_matches_direct_quadrature() {
    let n = 256;
    let h = 4.096 / n as f64;
    let sigma = 0.15;
    let center = c(0.1, -0.05);
    let bump = move |z: C| c((-(z - center).norm_sqr() / (2.0 * sigma * sigma)).exp(), 0.0);
    let f = GridFunction::from_fn(n, h, c(-2.048, -2.048), bump, Exec::default()).unwrap();
    let b2 = fft_beurling_iterate(&f, 2, Exec::default()).unwrap();
    let (idx, k) = beurling_iterate_index(2).unwrap();
    for (i, j) in [(128, 128), (120, 140), (150, 110), (100, 100), (160, 131)] {
        let z = b2.node(i, j);
        let direct = t_f_plane(idx, &FnDensity(bump), z, 12.0 * sigma + (z - center).norm()).unwrap().value * k;
        let got = b2.get(i, j);
        eprintln!("B2 {z}: {got} vs {direct}");
        assert!((got - direct).norm() < 1e-3 * direct.norm(), "{z}: {got} vs {direct}");
    }
    let b1 = fft_beurling_iterate(&f, 1, Exec::default()).unwrap();
    let b1p = fft_beurling(&f, Exec::default()).unwrap();
    let (c0, r) = correction_disk(&f).unwrap();
    let mut d: f64 = 0.0;
    for k in 0..n * n {
        if (b1.node(k % n, k / n) - c0).norm() <= r {
            d = d.max((b1.data[k] - b1p.data[k]).norm());
        }
    }
    eprintln!("B1 routes {:e}", d / b1p.sup());
    assert!(d < 1e-5 * b1p.sup());
}

#[test]
fn graph_contour_agrees_with_principal_values() {
    use beurling_lab::geometry::DomainSpec;
    let spec: DomainSpec = serde_json::from_str(r#"{"variant":"graph","shape":{"kind":"bump","eps":0.1},"n":2,"R":1.0}"#).unwrap();
    let graph = spec.build().unwrap();
    let poly = Domain::PolyGraph(beurling_lab::approx::Poly1D::monomial(vec![0.0, 0.1, 0.2]));
    for (domain, gammas) in [(graph, vec![mi(-2, 0), mi(-3, 1), mi(-4, 1)]), (poly, vec![mi(-3, 0), mi(-4, 1)])] {
        for z in [c(0.1, 0.3), c(-0.6, 0.5), c(1.5, 0.2), c(0.0, 2.0)] {
            for &g in &gammas {
                let a = t_char_contour(&domain, g, z).unwrap().value;
                let b = t_char_pv(&domain, g, z, &[]).unwrap().value;
                assert!((a - b).norm() < 1e-6 * a.norm().max(1.0), "{g} at {z}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn flat_polynomial_examples() {
    use beurling_lab::approx::Poly1D;
    let (rho_int, rho_ext) = (0.05, 0.2);
    let zero = flat_poly_bound_probe(
        &Poly1D::zero(),
        FlatnessBounds { n: 2, delta: 1.0, r: 1.0 },
        0,
        c(0.0, rho_int / 2.0),
        rho_int,
        rho_ext,
    )
    .unwrap();
    assert!(zero.result.value.norm() < 1e-9);
    let line = flat_poly_bound_probe(
        &Poly1D::monomial(vec![0.001, 0.3]),
        FlatnessBounds { n: 1, delta: 1.0, r: 1.0 },
        2,
        c(0.01, 0.02),
        rho_int,
        rho_ext,
    )
    .unwrap();
    assert!(line.result.value.norm() < 1e-6);
    // Quadratic P bounds a parabola, a null quadrature domain: every value vanishes.
    let sweep = |coeffs: Vec<f64>, n: usize| -> Vec<f64> {
        (0..=6)
            .map(|j2| {
                flat_poly_bound_probe(
                    &Poly1D::monomial(coeffs.clone()),
                    FlatnessBounds { n, delta: 1.0, r: 1.0 },
                    j2,
                    c(0.01, 0.02),
                    rho_int,
                    rho_ext,
                )
                .unwrap()
                .ratio
            })
            .collect()
    };
    assert!(sweep(vec![0.0, 0.0, 0.3], 2).iter().all(|r| *r < 1e-12));
    let ratios = sweep(vec![0.0, 0.0, 0.1, 0.15], 3);
    eprintln!("cubic ratios {ratios:?}");
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r <= 1.0), "{ratios:?}");
}

#[test]
fn index_and_ladder_examples() {
    for (m, g, k) in [(1, mi(-2, 0), -1.0), (2, mi(-3, 1), 2.0), (3, mi(-4, 2), -3.0)] {
        let (idx, c0) = beurling_iterate_index(m).unwrap();
        assert_eq!(idx, g);
        assert!((c0 - c(k / PI, 0.0)).norm() < 1e-15);
    }
    assert!(beurling_iterate_index(0).is_err());
    assert!(matches!(derivative_ladder(mi(-1, 0), mi(0, 1)).unwrap(), LadderCase::Identity { .. }));
    assert_eq!(derivative_ladder(mi(-2, 0), mi(0, 1)).unwrap(), LadderCase::Zero);
    assert_eq!(
        derivative_ladder(mi(-2, 0), mi(1, 0)).unwrap(),
        LadderCase::Reduce { constant: -2.0, index: mi(-3, 0) }
    );
    assert!(derivative_ladder(mi(-2, -1), mi(1, 0)).is_err());
}
