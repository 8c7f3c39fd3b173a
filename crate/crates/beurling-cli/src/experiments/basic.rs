use anyhow::{bail, Result};
use beurling_lab::approx::{
    approx_poly, besov_corpus, besov_cross_check, beta, residual_sign_changes, DyadicGrid, Interval, TestFunction,
    TOL_FIT,
};
use beurling_lab::geometry::{build_whitney, DomainSpec};
use beurling_lab::operators::{
    derivative_ladder, fft_beurling, t_char_closed, t_char_contour, t_char_pv, GridFunction, LadderCase, Mollified,
    MultiIndex,
};
use beurling_lab::parallel::Exec;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::{default_box, pt, rect_of};
use crate::config::{check_positive, ExperimentConfig};
use crate::report::{fmt, ExperimentReport, Table};

fn unit_disk() -> DomainSpec {
    DomainSpec::Disk { center: [0.0, 0.0], radius: 1.0 }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhitneyParams {
    pub c_w: f64,
    /// `[x0, x1, y0, y1]`; defaults to the domain's bounding square.
    pub bbox: Option<[f64; 4]>,
    /// Grid side for the `20Q` overlap count.
    pub samples: usize,
}

impl Default for WhitneyParams {
    fn default() -> Self {
        WhitneyParams { c_w: 1.0, bbox: None, samples: 128 }
    }
}

/// Whitney covering with its exhaustive invariant check. `depth` sets the
/// truncation scale `2^{-depth}` (default 6).
pub fn run_whitney(cfg: &ExperimentConfig, _exec: Exec) -> Result<ExperimentReport> {
    let p: WhitneyParams = cfg.params()?;
    check_positive(&[("c_w", p.c_w)])?;
    let (_, d) = cfg.domain_or(unit_disk())?;
    let depth = cfg.depth.unwrap_or(6);
    let bbox = p.bbox.map(rect_of).unwrap_or_else(|| default_box(&d));
    let w = build_whitney(&d, p.c_w, 0.5f64.powi(depth as i32), bbox)?;
    let check = w.check(p.samples);
    let mut r = ExperimentReport::new("whitney", "Whitney covering invariants", cfg);
    let mut t = Table::new("cubes", &["level", "kx", "ky", "side", "distance"]);
    for (q, &dist) in w.cubes.iter().zip(w.distances()) {
        let cells = vec![q.level.to_string(), q.kx.to_string(), q.ky.to_string(), fmt(q.side()), fmt(dist)];
        t.push(cells, "boundary-sample", dist, w.sample_spacing);
    }
    r.tables.push(t);
    r.exact("cubes", check.cubes as f64);
    r.exact("distance_failures", check.distance_failures as f64);
    r.exact("neighbour_failures", check.neighbour_failures as f64);
    r.exact("overlap_20q", check.overlap_20q as f64);
    r.exact("balance_splits", w.balance_splits as f64);
    r.scalar("covered_area", w.covered_area(), "dyadic-sum", w.collar_area);
    r.exact("collar_area", w.collar_area);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetaParams {
    pub function: TestFunction,
    pub interval: [f64; 2],
    pub n: usize,
}

impl Default for BetaParams {
    fn default() -> Self {
        BetaParams {
            function: TestFunction::Polynomial { coeffs: vec![0.0, 0.0, 1.0] },
            interval: [-1.0 / 3.0, 1.0 / 3.0],
            n: 1,
        }
    }
}

/// Approximating polynomial and β-coefficients on an interval and on its
/// dyadic subintervals down to level `depth` (default 4).
pub fn run_beta(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: BetaParams = cfg.params()?;
    let iv = Interval::new(p.interval[0], p.interval[1]);
    let f = p.function.as_fn();
    let mut r = ExperimentReport::new("beta", "Approximating polynomials and beta coefficients", cfg);
    let wide = iv.dilate(3.0);
    let fit = approx_poly(&f, wide, p.n)?;
    let mut t = Table::new("fit", &["j", "coefficient", "residual"]);
    for (j, (c, res)) in fit.poly.to_monomial().iter().zip(&fit.residuals).enumerate() {
        t.push(vec![j.to_string(), fmt(*c), fmt(*res)], "gauss-legendre", *c, res.abs());
    }
    r.tables.push(t);
    let b = beta(&f, iv, p.n)?;
    r.scalar("beta", b.value, "adaptive-gauss", 1e-8 * b.value);
    r.scalar("max_residual", fit.max_residual(), "gauss-legendre", 0.0);
    r.exact("residuals_ok", fit.residuals_ok(TOL_FIT) as u8 as f64);
    r.exact("sign_changes", residual_sign_changes(&f, &fit, 1000) as f64);
    r.scalar("sup_constant", fit.sup_constant, "sampled", 0.0);
    let grid = DyadicGrid::new(iv, 0, cfg.depth.unwrap_or(4));
    let rows = exec.map(&grid.intervals(), |&(j, k, sub)| beta(&f, sub, p.n).map(|b| (j, k, sub, b.value)));
    let mut t = Table::new("betas", &["level", "index", "a", "b", "beta"]);
    for row in rows {
        let (j, k, sub, v) = row?;
        t.push(vec![j.to_string(), k.to_string(), fmt(sub.a), fmt(sub.b), fmt(v)], "adaptive-gauss", v, 1e-8 * v);
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub n: usize,
    /// Corpus to cross-check; the built-in ten functions when empty.
    pub functions: Vec<TestFunction>,
    /// Polynomials of degree ≤ n, which both estimators must annihilate.
    pub polynomials: Vec<Vec<f64>>,
}

impl Default for BesovParams {
    fn default() -> Self {
        BesovParams { s: 1.5, p: 2.0, n: 1, functions: vec![], polynomials: vec![vec![1.0], vec![0.5, -2.0]] }
    }
}

/// β-based against difference-based Besov seminorms; `depth` (default 10)
/// sets the finest dyadic level and the smallest step `4·2^{-depth}`. Each
/// error estimate is the change from `depth - 1`.
pub fn run_besov(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: BesovParams = cfg.params()?;
    check_positive(&[("s", p.s), ("p", p.p)])?;
    let depth = cfg.depth.unwrap_or(10);
    if depth < 2 {
        bail!("besov needs depth ≥ 2");
    }
    let corpus = if p.functions.is_empty() { besov_corpus() } else { p.functions.clone() };
    let mut r = ExperimentReport::new("besov", "Besov seminorm estimators cross-check", cfg);
    let mut t = Table::new("cross_check", &["function", "betas", "differences", "ratio"]);
    // (ratio, error) at the extremes.
    let (mut lo, mut hi) = ((f64::INFINITY, 0.0), (0.0f64, 0.0));
    for f in &corpus {
        let c = besov_cross_check(&f.as_fn(), p.s, p.p, p.n, depth, exec)?;
        let c0 = besov_cross_check(&f.as_fn(), p.s, p.p, p.n, depth - 1, exec)?;
        let err = (c.ratio - c0.ratio).abs();
        if c.ratio < lo.0 {
            lo = (c.ratio, err);
        }
        if c.ratio > hi.0 {
            hi = (c.ratio, err);
        }
        t.push(vec![f.label(), fmt(c.betas), fmt(c.differences), fmt(c.ratio)], "beta-sum/differences", c.ratio, err);
    }
    let mut worst = 0.0f64;
    for coeffs in &p.polynomials {
        let f = TestFunction::Polynomial { coeffs: coeffs.clone() };
        let c = besov_cross_check(&f.as_fn(), p.s, p.p, p.n, depth, exec)?;
        worst = worst.max(c.betas).max(c.differences);
        t.push(vec![f.label(), fmt(c.betas), fmt(c.differences), fmt(c.ratio)], "beta-sum/differences", 0.0, 0.0);
    }
    r.tables.push(t);
    r.scalar("ratio_min", lo.0, "beta-sum/differences", lo.1);
    r.scalar("ratio_max", hi.0, "beta-sum/differences", hi.1);
    r.scalar("polynomial_max", worst, "beta-sum/differences", 0.0);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformParams {
    pub gamma: [i32; 2],
    pub points: Vec<[f64; 2]>,
    /// Add the mollified FFT value (bounded domains, `γ = (-2, 0)`).
    pub fft: bool,
    pub width: f64,
    pub half_box: f64,
    /// Check `D^α T^γ χ` from the ladder against central differences of
    /// contour values with step `fd_step`.
    pub alpha: Option<[i32; 2]>,
    pub fd_step: f64,
}

impl Default for TransformParams {
    fn default() -> Self {
        TransformParams {
            gamma: [-2, 0],
            points: vec![[0.0, 0.0], [0.3, 0.1], [-0.2, 0.35], [2.0, 0.0]],
            fft: true,
            width: 0.02,
            half_box: 2.048,
            alpha: None,
            fd_step: 1e-4,
        }
    }
}

/// `T^γ χ_Ω` at probe points by every applicable method. `depth` sets the
/// FFT grid `2^depth` (default 10).
pub fn run_transform(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: TransformParams = cfg.params()?;
    let (_, d) = cfg.domain_or(unit_disk())?;
    let gamma = MultiIndex::new(p.gamma[0], p.gamma[1]);
    let mut r = ExperimentReport::new("transform", "Operator family values by method", cfg);
    let mut t = Table::new("values", &["x", "y", "re", "im"]);
    let push = |t: &mut Table, z: C, v: C, method: &str, err: f64| {
        t.push(vec![fmt(z.re), fmt(z.im), fmt(v.re), fmt(v.im)], method, v.norm(), err);
    };
    let fft = if p.fft && d.is_bounded() && gamma == MultiIndex::new(-2, 0) {
        check_positive(&[("width", p.width), ("half_box", p.half_box)])?;
        let n = 1usize << cfg.depth.unwrap_or(10);
        let m = Mollified::of(&d, p.width)?;
        let h = 2.0 * p.half_box / n as f64;
        let g = GridFunction::from_fn(n, h, C::new(-p.half_box, -p.half_box), |z| C::new(m.value(z), 0.0), exec)?;
        Some(fft_beurling(&g, exec)?)
    } else {
        None
    };
    let mut spread = 0.0f64;
    for &q in &p.points {
        let z = pt(q);
        let mut vals = vec![];
        for res in [t_char_pv(&d, gamma, z, &[]), t_char_contour(&d, gamma, z), t_char_closed(&d, gamma, z)] {
            match res {
                Ok(e) => {
                    push(&mut t, z, e.value, e.method.tag(), e.error);
                    vals.push(e.value);
                }
                Err(e) => r.notes.push(format!("{z}: {e}")),
            }
        }
        if let Some(b) = &fft {
            // B = -(1/π) T^{(-2,0)}.
            let v = b.interpolate(z) * -std::f64::consts::PI;
            let err = vals.first().map_or(f64::NAN, |w| (v - w).norm());
            push(&mut t, z, v, "fft", err);
        }
        for a in &vals {
            for b in &vals {
                spread = spread.max((a - b).norm());
            }
        }
        if let Some(al) = p.alpha {
            let alpha = MultiIndex::new(al[0], al[1]);
            let ladder = match derivative_ladder(gamma, alpha)? {
                LadderCase::Zero => C::new(0.0, 0.0),
                LadderCase::Identity { constant } => C::new(constant, 0.0),
                LadderCase::Reduce { constant, index } => t_char_contour(&d, index, z)?.value * constant,
            };
            let fd = wirtinger_fd(|w| t_char_contour(&d, gamma, w).map(|e| e.value), z, alpha, p.fd_step)?;
            push(&mut t, z, ladder, "ladder", (ladder - fd).norm());
            push(&mut t, z, fd, "finite-difference", (ladder - fd).norm());
        }
    }
    r.tables.push(t);
    r.scalar("method_spread", spread, "max-pairwise", 0.0);
    Ok(r)
}

/// `∂^{α₁} ∂̄^{α₂} f(z)` by nested central differences, `|α| ≤ 2`.
fn wirtinger_fd(f: impl Fn(C) -> beurling_lab::Result<C>, z: C, alpha: MultiIndex, h: f64) -> Result<C> {
    let i = C::new(0.0, 1.0);
    let d = |g: &dyn Fn(C) -> Result<C>, w: C, conj: bool| -> Result<C> {
        let fx = (g(w + h)? - g(w - h)?) / (2.0 * h);
        let fy = (g(w + i * h)? - g(w - i * h)?) / (2.0 * h);
        Ok(if conj { (fx + i * fy) * 0.5 } else { (fx - i * fy) * 0.5 })
    };
    let base = |w: C| -> Result<C> { Ok(f(w)?) };
    match (alpha.g1, alpha.g2) {
        (1, 0) => d(&base, z, false),
        (0, 1) => d(&base, z, true),
        (a, b) if a + b == 2 => {
            let first = |w: C| d(&base, w, a == 0);
            d(&first, z, b >= 1)
        }
        _ => bail!("finite differences support |α| ≤ 2"),
    }
}
