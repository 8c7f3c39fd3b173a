use beurling_lab::approx::*;
use beurling_lab::parallel::Exec;
use proptest::prelude::*;

/// Least-squares fit of `f` by `1, x` from `m` midpoint samples of `I`.
fn dense_linear_fit(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> (f64, f64) {
    let h = (b - a) / m as f64;
    let xs: Vec<f64> = (0..m).map(|i| a + (i as f64 + 0.5) * h).collect();
    let n = m as f64;
    let (sx, sy) = (xs.iter().sum::<f64>(), xs.iter().map(|&x| f(x)).sum::<f64>());
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().map(|&x| x * f(x)).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ((sy - slope * sx) / n, slope)
}

#[test]
fn projection_examples() {
    let iv = Interval::new(-1.0, 1.0);
    let cube = approx_poly(&|x: f64| x * x * x, iv, 3).unwrap();
    let c = cube.poly.to_monomial();
    for (k, want) in [0.0, 0.0, 0.0, 1.0].iter().enumerate() {
        assert!((c[k] - want).abs() < 1e-12, "{c:?}");
    }
    for (g, want) in [(Box::new(|x: f64| x * x) as Box<dyn Fn(f64) -> f64>, 1.0 / 3.0), (Box::new(|x: f64| x.abs()), 0.5)] {
        let fit = approx_poly(&|x| g(x), iv, 1).unwrap();
        let (c0, c1) = dense_linear_fit(&g, -1.0, 1.0, 10_000);
        assert!((c0 - want).abs() < 1e-6 && c1.abs() < 1e-9);
        for x in [-0.9, 0.0, 0.4] {
            assert!((fit.poly.eval(x) - want).abs() < 1e-12);
        }
        assert!(fit.residuals_ok(TOL_FIT));
    }
}

#[test]
fn beta_examples() {
    let iv = Interval::new(-1.0 / 3.0, 1.0 / 3.0);
    let b = beta(&|x: f64| x * x, iv, 1).unwrap();
    // Brute force: |I|^{-2} ∫_{-1}^{1} |x² - c0 - c1 x| with the dense fit.
    let (c0, c1) = dense_linear_fit(|x| x * x, -1.0, 1.0, 10_000);
    let m = 200_000;
    let h = 2.0 / m as f64;
    let l1: f64 = (0..m)
        .map(|i| {
            let x = -1.0 + (i as f64 + 0.5) * h;
            (x * x - c0 - c1 * x).abs() * h
        })
        .sum();
    let oracle = l1 / (iv.len() * iv.len());
    assert!((b.value - oracle).abs() < 1e-6, "{} {oracle}", b.value);
    assert!((b.value - 2.0 / 3f64.sqrt()).abs() < 1e-6);
    let poly = beta(&|x: f64| 2.0 - x + 0.5 * x * x, iv, 2).unwrap();
    assert!(poly.value <= 1e-10);
}

#[test]
fn residuals_change_sign_on_corpus() {
    let iv = Interval::new(-1.0, 1.0);
    let corpus = sign_change_corpus();
    assert_eq!(corpus.len(), 20);
    for f in &corpus {
        for n in 0..=3 {
            let fit = approx_poly(&f.as_fn(), iv, n).unwrap();
            assert!(fit.residuals_ok(TOL_FIT), "{} n={n}: {:?}", f.label(), fit.residuals);
            assert!(residual_sign_changes(&f.as_fn(), &fit, 1000) >= n + 1, "{} n={n}", f.label());
        }
    }
}

#[test]
fn chain_constants_are_moderate() {
    let outer = Interval::new(-1.0, 1.0);
    for f in sign_change_corpus() {
        for n in 0..=4 {
            for inner in [Interval::new(-0.5, 0.5), Interval::new(0.0, 1.0), Interval::new(-1.0, -0.75)] {
                let c = chain_constant(&f.as_fn(), inner, outer, n).unwrap();
                assert!(c <= 100.0, "{} n={n}: {c}", f.label());
            }
        }
    }
}

#[test]
fn besov_estimators_cross_check() {
    let ex = Exec::default();
    for f in besov_corpus() {
        let c = besov_cross_check(&f.as_fn(), 1.5, 2.0, 1, 10, ex).unwrap();
        assert!(c.ratio >= 0.25 && c.ratio <= 4.0, "{}: {c:?}", f.label());
    }
    for coeffs in [vec![1.0], vec![0.5, -2.0]] {
        let f = TestFunction::Polynomial { coeffs };
        let c = besov_cross_check(&f.as_fn(), 1.5, 2.0, 1, 8, ex).unwrap();
        assert!(c.betas < 1e-8 && c.differences < 1e-8, "{c:?}");
    }
}

#[test]
fn abs_level_sums_scale_with_the_exponent() {
    // Only the interval straddling 0 carries β ≍ ℓ, so the level-j sum is
    // ≍ (ℓ / ℓ^{s-1})^p ℓ = ℓ^{(2-s)p+1}.
    let (s, p) = (1.2, 2.0);
    let grid = DyadicGrid::new(Interval::new(-1.0, 1.0), 2, 12);
    let r = besov_betas(&|x: f64| x.abs(), s, p, 1, &grid, Exec::default()).unwrap();
    let tail: Vec<(f64, f64)> = r.level_sums.iter().skip(4).map(|&(j, v)| (j as f64, v.log2())).collect();
    let n = tail.len() as f64;
    let (mx, my) = (tail.iter().map(|t| t.0).sum::<f64>() / n, tail.iter().map(|t| t.1).sum::<f64>() / n);
    let slope = tail.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / tail.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    let expected = (1.0 + 1.0 / p - s) * p;
    assert!((-slope - expected).abs() < 0.1 * expected, "{slope} vs {expected}");
}

#[test]
fn sine_bump_level_sums_decay() {
    // A smooth f has β ≍ ℓ^n, so level sums shrink by 2^{-p(n+1-s)}.
    let (s, p, n) = (1.5, 2.0, 1);
    let rate = 2f64.powf(-p * (n as f64 + 1.0 - s));
    let f = TestFunction::SineBump { freq: 1.0, width: 0.8 };
    let grid = DyadicGrid::new(Interval::new(-1.0, 1.0), 0, 11);
    let r = besov_betas(&f.as_fn(), s, p, n, &grid, Exec::default()).unwrap();
    let sums: Vec<f64> = r.level_sums.iter().map(|l| l.1).collect();
    for w in sums[7..].windows(2) {
        assert!((w[1] / w[0] - rate).abs() < 0.1 * rate, "{sums:?}");
    }
    let shallow = besov_betas(&f.as_fn(), s, p, n, &DyadicGrid::new(Interval::new(-1.0, 1.0), 0, 9), Exec::default()).unwrap();
    let tail = r.value.powf(p) - shallow.value.powf(p);
    let predicted = sums[9] * (rate + rate * rate);
    assert!((tail - predicted).abs() < 0.1 * predicted, "{tail} {predicted}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quadrature_order_does_not_matter(a in -1.0f64..0.5, len in 0.1f64..1.5, n in 0usize..4, k in 0usize..20) {
        let f = &sign_change_corpus()[k];
        let iv = Interval::new(a, a + len);
        let lo = approx_poly_with_order(&f.as_fn(), iv, n, 4 * (n + 1)).unwrap();
        let hi = approx_poly_with_order(&f.as_fn(), iv, n, 8 * (n + 1) + 3).unwrap();
        let (x, y) = (lo.poly.to_monomial(), hi.poly.to_monomial());
        for (u, v) in x.iter().zip(&y) {
            prop_assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()));
        }
    }

    #[test]
    fn beta_is_translation_invariant(t in -2.0f64..2.0, a in -0.5f64..0.3, n in 0usize..3) {
        let g = |x: f64| (3.0 * x).sin() + x.abs();
        let iv = Interval::new(a, a + 0.2);
        let b0 = beta(&g, iv, n).unwrap().value;
        let b1 = beta(&|x: f64| g(x - t), iv.translate(t), n).unwrap().value;
        prop_assert!((b0 - b1).abs() <= 1e-8 * b0.max(1e-12));
    }

    #[test]
    fn estimators_are_homogeneous(lambda in -3.0f64..3.0, k in 0usize..10) {
        let f = &besov_corpus()[k];
        let ex = Exec::Sequential;
        let grid = DyadicGrid::new(Interval::new(-2.0, 2.0), 0, 6);
        let b0 = besov_betas(&f.as_fn(), 1.5, 2.0, 1, &grid, ex).unwrap().value;
        let b1 = besov_betas(&|x| lambda * f.eval(x), 1.5, 2.0, 1, &grid, ex).unwrap().value;
        prop_assert!((b1 - lambda.abs() * b0).abs() <= 1e-8 * b0);
        let iv = Interval::new(-3.0, 3.0);
        let d0 = besov_differences(&f.as_fn(), 1.5, 2.0, 2.0, 2, iv, 1e-2, 4.0, ex).unwrap().value;
        let d1 = besov_differences(&|x| lambda * f.eval(x), 1.5, 2.0, 2.0, 2, iv, 1e-2, 4.0, ex).unwrap().value;
        prop_assert!((d1 - lambda.abs() * d0).abs() <= 1e-8 * d0);
    }
}
