use std::collections::HashSet;

use beurling_lab::approx::Poly1D;
use beurling_lab::geometry::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn graph(coeffs: Vec<f64>, r: f64) -> Domain {
    DomainSpec::Graph { shape: GraphShape::Polynomial { coeffs }, n: 2, delta: None, r }.build().unwrap()
}

fn bump(eps: f64) -> Domain {
    DomainSpec::Graph { shape: GraphShape::Bump { eps }, n: 2, delta: None, r: 1.0 }.build().unwrap()
}

#[test]
fn contains_examples() {
    assert!(Domain::unit_disk().contains(C::new(0.0, 0.0)));
    assert!(!graph(vec![0.0], 1.0).contains(C::new(0.0, -1.0)));
    let parabola = graph(vec![0.0, 0.0, 0.25], 1.0);
    assert!(parabola.contains(C::new(0.5, 0.1)));
    assert!(!parabola.contains(C::new(0.5, 0.05)));
}

#[test]
fn whitney_invariants_on_test_domains() {
    let unit = Rect::square(C::new(0.0, 0.0), 1.0);
    let cases = [
        (Domain::unit_disk(), unit, 2f64.powi(-8)),
        (Domain::square(C::new(0.0, 0.0), 0.5), unit, 2f64.powi(-6)),
        (bump(0.1), Rect::new(-2.0, 2.0, -1.0, 3.0), 2f64.powi(-6)),
        (bump(0.2), Rect::new(-2.0, 2.0, -1.0, 3.0), 2f64.powi(-6)),
        (graph(vec![0.0, 0.0, 0.05], 1.0), Rect::new(-2.0, 2.0, -1.0, 3.0), 2f64.powi(-6)),
    ];
    for (d, bbox, min) in cases {
        let w = build_whitney(&d, 1.0, min, bbox).unwrap();
        let c = w.check(128);
        assert!(c.passed(500), "{d:?}: {c:?}");
        assert_eq!(c.distance_failures + c.neighbour_failures, 0);
    }
}

/// Top-down dyadic enumeration of `[-1/2, 1/2]²` with exact distances to the
/// square's boundary.
fn square_oracle(c_w: f64, min_level: i32) -> (usize, f64) {
    let dist = |q: &DyadicCube| {
        let r = q.rect();
        (r.x0 + 0.5).min(0.5 - r.x1).min(r.y0 + 0.5).min(0.5 - r.y1)
    };
    let mut stack: Vec<DyadicCube> = DyadicCube::tiling(&Rect::square(C::new(0.0, 0.0), 0.5), 1);
    let (mut count, mut area) = (0, 0.0);
    while let Some(q) = stack.pop() {
        let (d, l) = (dist(&q), q.side());
        if d >= c_w * l && d <= 4.0 * c_w * l {
            count += 1;
            area += l * l;
        } else if q.level < min_level {
            stack.extend(q.children());
        }
    }
    (count, area)
}

#[test]
fn square_covering_matches_enumeration() {
    let sq = Domain::square(C::new(0.0, 0.0), 0.5);
    let opts = WhitneyOptions { balance: false, ..WhitneyOptions::default() };
    let w = build_whitney_with(&sq, 1.0, 2f64.powi(-6), Rect::square(C::new(0.0, 0.0), 0.5), opts).unwrap();
    let (count, area) = square_oracle(1.0, 6);
    assert_eq!(w.cubes.len(), count);
    assert!((w.covered_area() - area).abs() < 1e-12, "{} {area}", w.covered_area());
    let distinct: HashSet<_> = w.cubes.iter().collect();
    assert_eq!(distinct.len(), w.cubes.len());
}

#[test]
fn half_plane_cubes_sit_in_their_band() {
    let hp = Domain::upper_half_plane();
    let w = build_whitney(&hp, 1.0, 2f64.powi(-7), Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap();
    let tol = w.sample_spacing;
    for q in &w.cubes {
        let (y, l) = (q.rect().y0, q.side());
        assert!(y > 0.0);
        assert!(l >= y / 4.0 - tol && l <= y + tol, "{q:?}");
    }
}

#[test]
fn windows_examples() {
    let g = bump(0.1);
    let ws = window_decomposition(&g, 1.0, 2, f64::INFINITY).unwrap();
    assert_eq!(ws.len(), 1);
    assert_eq!(ws[0].center, C::new(0.0, 0.0));
    assert_eq!(ws[0].angle, 0.0);
    for x in [-0.7, 0.0, 0.3] {
        assert_eq!(ws[0].eval(x), g.graph_height(x).unwrap());
    }
    let disk = window_decomposition(&Domain::unit_disk(), 0.2, 2, f64::INFINITY).unwrap();
    let m = disk.len() as f64;
    assert!(m * 0.02 >= std::f64::consts::TAU && m * 0.01 <= std::f64::consts::TAU * 1.2, "{m}");
    for w in &disk {
        assert_eq!(w.verify(&Domain::unit_disk(), 32), 0);
    }
    let sq = Domain::square(C::new(0.0, 0.0), 0.5);
    assert!(window_decomposition(&sq, 0.05, 1, 1.0).is_ok());
}

#[test]
fn projection_examples() {
    let q = DyadicCube::containing(C::new(0.1, 0.6), 1);
    assert_eq!(q.rect(), Rect::new(0.0, 0.5, 0.5, 1.0));
    let i = vertical_projection(&q);
    assert_eq!((i.start(), i.end()), (0.0, 0.5));
    let q = DyadicCube::containing(C::new(-0.1, 0.1), 2);
    let i = vertical_projection(&q);
    assert_eq!((i.start(), i.end()), (-0.25, 0.0));
}

#[test]
fn symmetric_difference_examples() {
    let region = Rect::square(C::new(0.0, 0.0), 1.0);
    let hp = Domain::upper_half_plane();
    assert_eq!(symmetric_difference_area(&hp, &hp, &region, 0.01).unwrap().area, 0.0);
    for c in [-0.5, 0.25, 0.75] {
        let line = Domain::PolyGraph(Poly1D::monomial(vec![c]));
        let a = symmetric_difference_area(&hp, &line, &region, 0.01).unwrap();
        assert!((a.area - 2.0 * c.abs()).abs() <= a.error.max(1e-12), "{c}: {a:?}");
    }
    let a = symmetric_difference_area(&graph(vec![0.0, 0.0, 0.25], 1.0), &graph(vec![0.0], 1.0), &region, 0.01).unwrap();
    assert!((a.area - 1.0 / 6.0).abs() <= a.error, "{a:?}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn inward_normal_points_are_inside(t in -3.5f64..3.5, s in 1e-3f64..0.2, eps in 0.0f64..0.2) {
        let d = bump(eps);
        let (p, tangent) = d.graph_point(t);
        let normal = C::new(0.0, 1.0) * tangent / tangent.norm();
        prop_assert!(d.contains(p + normal * s), "{p} {normal}");
        let disk = Domain::unit_disk();
        let b = C::from_polar(1.0, t);
        prop_assert!(disk.contains(b * (1.0 - s)) && !disk.contains(b * (1.0 + s)));
    }

    #[test]
    fn area_is_symmetric_and_additive(c in -0.9f64..0.9, a in 0.05f64..0.3) {
        let p = graph(vec![0.0, 0.0, a], 1.0);
        let line = Domain::PolyGraph(Poly1D::monomial(vec![c]));
        let whole = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let (l, r) = (Rect::new(-1.0, 0.0, -1.0, 1.0), Rect::new(0.0, 1.0, -1.0, 1.0));
        let ab = symmetric_difference_area(&p, &line, &whole, 0.02).unwrap();
        let ba = symmetric_difference_area(&line, &p, &whole, 0.02).unwrap();
        prop_assert!((ab.area - ba.area).abs() <= ab.error + ba.error + 1e-12);
        let parts = symmetric_difference_area(&p, &line, &l, 0.02).unwrap().area
            + symmetric_difference_area(&p, &line, &r, 0.02).unwrap().area;
        prop_assert!((parts - ab.area).abs() <= 2.0 * ab.error + 1e-9);
    }
}
