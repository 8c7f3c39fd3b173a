use anyhow::{bail, Context, Result};
use beurling_lab::approx::{approx_poly, beta, Interval, Poly1D};
use beurling_lab::beltrami::{iterate_gradient, Route};
use beurling_lab::geometry::{
    build_whitney, symmetric_difference_area, vertical_projection, Domain, DomainSpec, GraphShape, Rect,
};
use beurling_lab::norms::{besov_norm_normal, lemma_norm_beta_check};
use beurling_lab::operators::{flat_poly_bound_probe, t_char_closed, t_char_contour, FlatnessBounds, MultiIndex};
use beurling_lab::parallel::Exec;
use num_complex::Complex64 as C;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{default_box, pt};
use crate::config::{check_positive, ExperimentConfig};
use crate::report::{fmt, ExperimentReport, Table};

fn bump_spec(eps: f64, n: usize, r: f64) -> DomainSpec {
    let shape = if eps == 0.0 { GraphShape::Polynomial { coeffs: vec![0.0] } } else { GraphShape::Bump { eps } };
    DomainSpec::Graph { shape, n: n.max(2), delta: None, r }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem1Params {
    pub n: u32,
    pub p: f64,
    /// Bump amplitudes; used when no domain is configured.
    pub eps: Vec<f64>,
    #[serde(rename = "R")]
    pub r: f64,
    /// Also run the unit disk.
    pub disk: bool,
    pub besov_depth: u32,
}

impl Default for Theorem1Params {
    fn default() -> Self {
        Theorem1Params { n: 1, p: 4.0, eps: vec![0.0, 0.05, 0.1, 0.2], r: 1.0, disk: true, besov_depth: 12 }
    }
}

struct Lhs {
    lp: f64,
    hom: f64,
    err: f64,
    nodes: usize,
}

/// `‖Bχ_Ω‖_{L^p}` and `‖∇^n Bχ_Ω‖_{L^p}` over midpoint nodes of
/// `Ω ∩ window` farther than `2h` from `∂Ω`; the error is the change in the
/// gradient part when the collar doubles.
fn sobolev_lhs(d: &Domain, window: Rect, h: f64, n: u32, p: f64, exec: Exec) -> Result<Lhs> {
    let (nx, ny) = ((window.width() / h).round() as usize, (window.height() / h).round() as usize);
    let pts: Vec<(C, f64)> = (0..nx * ny)
        .map(|k| C::new(window.x0 + ((k % nx) as f64 + 0.5) * h, window.y0 + ((k / nx) as f64 + 0.5) * h))
        .filter(|&z| d.contains(z))
        .map(|z| (z, d.boundary_distance(z)))
        .filter(|&(_, dist)| dist > 2.0 * h)
        .collect();
    let b = MultiIndex { g1: -2, g2: 0 };
    let vals = exec.map(&pts, |&(z, _)| -> beurling_lab::Result<(f64, f64)> {
        let t = match t_char_closed(d, b, z) {
            Ok(v) => v.value,
            Err(beurling_lab::Error::Unsupported(_)) => t_char_contour(d, b, z)?.value,
            Err(e) => return Err(e),
        };
        Ok(((t / std::f64::consts::PI).norm(), iterate_gradient(d, n, 1, z, Route::Auto)?))
    });
    let (mut lp, mut hom, mut hom_wide) = (0.0, 0.0, 0.0);
    for ((_, dist), v) in pts.iter().zip(vals) {
        let (a, g) = v?;
        lp += a.powf(p);
        hom += g.powf(p);
        if *dist > 4.0 * h {
            hom_wide += g.powf(p);
        }
    }
    let cell = h * h;
    let (lp, hom, wide) = ((lp * cell).powf(1.0 / p), (hom * cell).powf(1.0 / p), (hom_wide * cell).powf(1.0 / p));
    Ok(Lhs { lp, hom, err: (hom - wide).abs(), nodes: pts.len() })
}

fn window_for(d: &Domain, r: f64) -> Rect {
    match d {
        Domain::Graph(a) => {
            let top = (0..=512).map(|i| a.eval(-4.0 * r + 8.0 * r * i as f64 / 512.0)).fold(0.0, f64::max);
            Rect::new(-4.0 * r, 4.0 * r, 0.0f64.min(top - 2.0 * r) .min(0.0), top + 2.0 * r)
        }
        _ => default_box(d),
    }
}

/// Sobolev norm of `Bχ_Ω` against the boundary Besov norm of the normal.
/// `depth` sets the node spacing `R·2^{-depth}` (default 3).
pub fn run_theorem1(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: Theorem1Params = cfg.params()?;
    check_positive(&[("p", p.p), ("R", p.r)])?;
    if p.n == 0 {
        bail!("theorem1 needs n ≥ 1");
    }
    let h = p.r * 0.5f64.powi(cfg.depth.unwrap_or(3) as i32);
    let s = p.n as f64 - 1.0 / p.p;
    let mut cases: Vec<(String, f64, Domain)> = vec![];
    if let Some(spec) = cfg.domain_spec()? {
        cases.push(("configured".into(), f64::NAN, spec.build()?));
    } else {
        for &e in &p.eps {
            cases.push((format!("bump({e})"), e, bump_spec(e, p.n as usize, p.r).build()?));
        }
        if p.disk {
            cases.push(("disk".into(), f64::NAN, Domain::unit_disk()));
        }
    }
    let mut r = ExperimentReport::new("theorem1", "Sobolev norm of the Beurling transform against the Besov norm of the normal", cfg);
    let mut t = Table::new("ratios", &["case", "eps", "lhs_lp", "lhs_hom", "rhs_lp", "rhs_hom", "ratio", "ratio_hom", "nodes"]);
    let mut bump_ratios = vec![];
    for (name, eps, d) in &cases {
        let lhs = sobolev_lhs(d, window_for(d, p.r), h, p.n, p.p, exec).with_context(|| format!("LHS for {name}"))?;
        let rhs = besov_norm_normal(d, s, p.p, p.besov_depth, exec).with_context(|| format!("RHS for {name}"))?;
        let ratio = (lhs.lp + lhs.hom) / rhs.value;
        let ratio_hom = if rhs.homogeneous > 0.0 { lhs.hom / rhs.homogeneous } else { 0.0 };
        let err = lhs.err / rhs.value;
        t.push(
            vec![
                name.clone(),
                fmt(*eps),
                fmt(lhs.lp),
                fmt(lhs.hom),
                fmt(rhs.lp_part),
                fmt(rhs.homogeneous),
                fmt(ratio),
                fmt(ratio_hom),
                lhs.nodes.to_string(),
            ],
            "contour+ladder/besov-normal",
            ratio,
            err,
        );
        if name == "disk" {
            r.scalar("disk_ratio", ratio, "closed-form/besov-normal", err);
        } else if *eps > 0.0 {
            bump_ratios.push(ratio);
        } else {
            r.scalar(&format!("ratio_{name}"), ratio, "contour+ladder/besov-normal", err);
        }
    }
    if !bump_ratios.is_empty() {
        let lo = bump_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = bump_ratios.iter().cloned().fold(0.0, f64::max);
        r.scalar("bump_ratio_min", lo, "contour+ladder/besov-normal", 0.0);
        r.scalar("bump_ratio_max", hi, "contour+ladder/besov-normal", 0.0);
        r.scalar("bump_ratio_spread", hi / lo, "contour+ladder/besov-normal", 0.0);
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterstitialParams {
    pub n: usize,
    /// Amplitude of `A(x) = ε sin(πx/R) b(x/4R)`, `b` the standard bump.
    pub eps: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub cubes: usize,
    pub j_max: u32,
    pub c_w: f64,
    /// Whitney truncation `2^{-whitney_depth}`.
    pub whitney_depth: u32,
}

impl Default for InterstitialParams {
    fn default() -> Self {
        InterstitialParams { n: 1, eps: 0.1, r: 1.0, cubes: 50, j_max: 4, c_w: 1.0, whitney_depth: 5 }
    }
}

fn sine_bump_spec(eps: f64, n: usize, r: f64) -> DomainSpec {
    let m = 4096;
    let (x0, dx) = (-4.0 * r, 8.0 * r / m as f64);
    let y = (0..=m)
        .map(|i| {
            let x = x0 + i as f64 * dx;
            let t = x / (4.0 * r);
            let b = if t.abs() < 1.0 { (1.0 - 1.0 / (1.0 - t * t)).exp() } else { 0.0 };
            eps * (std::f64::consts::PI * x / r).sin() * b
        })
        .collect();
    DomainSpec::Graph { shape: GraphShape::Samples { x0, dx, y }, n, delta: None, r }
}

/// Area between a graph domain and the approximating-polynomial domain of a
/// Whitney cube, in vertical strips, against the β-sum over the intervals
/// between `π(Q)` and `2^{j+1}π(Q)`. `depth` sets the column spacing
/// `ℓ(Q)·2^{-depth}` (default 6).
pub fn run_claim_interstitial(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: InterstitialParams = cfg.params()?;
    check_positive(&[("R", p.r), ("c_w", p.c_w)])?;
    let (_, d) = cfg.domain_or(sine_bump_spec(p.eps, p.n, p.r))?;
    if d.graph_height(0.0).is_none() {
        bail!("interstitial needs a graph domain");
    }
    let a = |x: f64| d.graph_height(x).expect("graph");
    let depth = cfg.depth.unwrap_or(6);
    let bbox = Rect::new(-2.0 * p.r, 2.0 * p.r, -p.r, 2.0 * p.r);
    let w = build_whitney(&d, p.c_w, 0.5f64.powi(p.whitney_depth as i32), bbox)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picks = sample(&mut rng, w.cubes.len(), p.cubes.min(w.cubes.len())).into_vec();
    picks.sort_unstable();
    let support = 4.0 * p.r;
    let rows = exec.map(&picks, |&k| -> beurling_lab::Result<Vec<[f64; 9]>> {
        let q = w.cubes[k];
        let iv = vertical_projection(&q);
        let (l, c) = (iv.len(), q.center());
        let poly = approx_poly(&a, Interval::new(iv.start(), iv.end()).dilate(3.0), p.n)?.poly;
        let omq = Domain::PolyGraph(poly.clone());
        let mut out = vec![];
        for j in 0..=p.j_max {
            let half = 2f64.powi(j as i32) * l;
            let (x0, x1) = (c.re - half, c.re + half);
            if x0 < -support || x1 > support {
                break;
            }
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..=256 {
                let x = x0 + (x1 - x0) * i as f64 / 256.0;
                let (u, v) = (a(x), poly.eval(x));
                lo = lo.min(u.min(v));
                hi = hi.max(u.max(v));
            }
            let margin = 0.5 * (hi - lo) + l;
            let region = Rect::new(x0, x1, lo - margin, hi + margin);
            let area = symmetric_difference_area(&omq, &d, &region, l * 0.5f64.powi(depth as i32))?;
            let mut rhs = 0.0;
            let mut anc = iv;
            for _ in 0..=j + 1 {
                if anc.is_within_span(c.re - half, c.re + half) {
                    let b = beta(&a, Interval::new(anc.start(), anc.end()), p.n)?.value;
                    rhs += b / anc.len().powi(p.n as i32 - 1) * half.powi(p.n as i32 + 1);
                }
                anc = anc.parent();
            }
            let ratio = if rhs > 0.0 { area.area / rhs } else { 0.0 };
            out.push([q.level as f64, q.kx as f64, q.ky as f64, j as f64, area.area, rhs, ratio, area.error, l]);
        }
        Ok(out)
    });
    let mut r = ExperimentReport::new("interstitial", "Interstitial area between a graph and its approximating polynomial", cfg);
    let mut t = Table::new("ratios", &["level", "kx", "ky", "j", "lhs", "rhs", "ratio"]);
    let (mut worst, mut monotone_violations, mut ratios) = (0.0f64, 0usize, vec![]);
    for row in rows {
        let row = row?;
        for (i, v) in row.iter().enumerate() {
            if i > 0 && v[5] < row[i - 1][5] {
                monotone_violations += 1;
            }
            worst = worst.max(v[6]);
            ratios.push(v[6]);
            let cells = vec![
                (v[0] as i32).to_string(),
                (v[1] as i64).to_string(),
                (v[2] as i64).to_string(),
                (v[3] as u32).to_string(),
                fmt(v[4]),
                fmt(v[5]),
                fmt(v[6]),
            ];
            t.push(cells, "column-quadrature/beta-sum", v[4], v[7]);
        }
    }
    ratios.sort_by(f64::total_cmp);
    r.exact("rows", ratios.len() as f64);
    r.exact("cubes", picks.len() as f64);
    r.exact("rhs_monotone_violations", monotone_violations as f64);
    r.scalar("ratio_max", worst, "column-quadrature/beta-sum", 0.0);
    r.scalar("ratio_median", ratios.get(ratios.len() / 2).copied().unwrap_or(0.0), "column-quadrature/beta-sum", 0.0);
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatPolyParams {
    pub n_values: Vec<usize>,
    pub j2_max: i32,
    pub rho_int: f64,
    pub rho_ext: Vec<f64>,
    pub delta: f64,
    #[serde(rename = "R")]
    pub r: f64,
    /// Random coefficient vectors per degree, drawn within the flatness limits.
    pub samples: usize,
    pub z: [f64; 2],
}

impl Default for FlatPolyParams {
    fn default() -> Self {
        FlatPolyParams {
            n_values: vec![1, 2, 3],
            j2_max: 6,
            rho_int: 0.05,
            rho_ext: vec![0.2, 0.1],
            delta: 1.0,
            r: 1.0,
            samples: 4,
            z: [0.01, 0.02],
        }
    }
}

/// Transforms of domains bounded by flat polynomial graphs, normalized by
/// the flatness envelope `(1 + 16√ρ_ext)^{j₂} / ρ_int^n`.
pub fn run_flat_poly(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: FlatPolyParams = cfg.params()?;
    check_positive(&[("rho_int", p.rho_int), ("delta", p.delta), ("R", p.r)])?;
    let z = pt(p.z);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jobs = vec![];
    for &n in &p.n_values {
        let bounds = FlatnessBounds { n, delta: p.delta, r: p.r };
        let lim = bounds.limits(p.rho_int);
        let mut drawn = 0;
        for _ in 0..100 * p.samples.max(1) {
            if drawn == p.samples {
                break;
            }
            let coeffs: Vec<f64> = lim.iter().map(|&l| rng.gen_range(-0.5..=0.5) * l).collect();
            if z.im <= Poly1D::monomial(coeffs.clone()).eval(z.re) {
                continue;
            }
            for &rho_ext in &p.rho_ext {
                for j2 in 0..=p.j2_max {
                    jobs.push((n, bounds, drawn, coeffs.clone(), rho_ext, j2));
                }
            }
            drawn += 1;
        }
    }
    let results = exec.map(&jobs, |(_, bounds, _, coeffs, rho_ext, j2)| {
        flat_poly_bound_probe(&Poly1D::monomial(coeffs.clone()), *bounds, *j2, z, p.rho_int, *rho_ext)
    });
    let mut r = ExperimentReport::new("flatpoly", "Transforms of flat polynomial graph domains", cfg);
    let mut t = Table::new("ratios", &["n", "rho_ext", "sample", "j2", "abs_value", "ratio"]);
    // (max, its error estimate) per key.
    let mut maxima: std::collections::BTreeMap<String, (f64, f64)> = Default::default();
    let mut bump = |key: String, v: f64, e: f64| {
        let m = maxima.entry(key).or_insert((0.0, 0.0));
        if v >= m.0 {
            *m = (v, e);
        }
    };
    for ((n, _, k, coeffs, rho_ext, j2), res) in jobs.iter().zip(results) {
        let rep = res.with_context(|| format!("n = {n}, j2 = {j2}, rho_ext = {rho_ext}, coefficients {coeffs:?}"))?;
        let v = rep.result.value.norm();
        t.push(
            vec![n.to_string(), fmt(*rho_ext), k.to_string(), j2.to_string(), fmt(v), fmt(rep.ratio)],
            rep.result.method.tag(),
            v,
            rep.result.error,
        );
        let ratio_err = if v > 0.0 { rep.ratio * rep.result.error / v } else { rep.result.error };
        bump(format!("max_ratio_n{n}_rho_ext{rho_ext}"), rep.ratio, ratio_err);
        if *n == 1 {
            bump("max_value_n1".into(), v, rep.result.error);
        }
    }
    for (k, (v, e)) in maxima {
        r.scalar(&k, v, "contour", e);
    }
    for &rho_ext in &p.rho_ext {
        r.exact(&format!("envelope_rho_ext{rho_ext}"), (1.0 + 16.0 * rho_ext.sqrt()).powi(p.j2_max));
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppendixParams {
    pub n: usize,
    pub p: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl Default for AppendixParams {
    fn default() -> Self {
        AppendixParams { n: 2, p: 2.0, r: 0.2 }
    }
}

/// β-sums of the window charts against their Besov norms and the boundary
/// Besov norm of the normal. `depth` is the number of dyadic levels (default
/// 4); errors are the change from `depth - 1`.
pub fn run_lemma_appendix(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: AppendixParams = cfg.params()?;
    check_positive(&[("p", p.p), ("R", p.r)])?;
    let (_, d) = cfg.domain_or(DomainSpec::Disk { center: [0.0, 0.0], radius: 1.0 })?;
    let depth = cfg.depth.unwrap_or(4).max(2);
    let a = lemma_norm_beta_check(&d, p.n, p.p, p.r, depth, exec)?;
    let b = lemma_norm_beta_check(&d, p.n, p.p, p.r, depth - 1, exec)?;
    let mut r = ExperimentReport::new("appendix", "Window beta sums against chart and boundary Besov norms", cfg);
    r.exact("windows", a.windows as f64);
    r.exact("distinct_charts", a.distinct as f64);
    r.scalar("delta", a.delta, "sampled", 0.0);
    r.scalar("lhs", a.lhs, "beta-sum", (a.lhs - b.lhs).abs());
    r.scalar("mid", a.mid, "beta-sum", (a.mid - b.mid).abs());
    r.scalar("lhs_over_mid", a.lhs_over_mid, "beta-sum", (a.lhs_over_mid - b.lhs_over_mid).abs());
    if let (Some(rhs), Some(m)) = (a.rhs, a.mid_over_rhs) {
        let (rb, mb) = (b.rhs.unwrap_or(f64::NAN), b.mid_over_rhs.unwrap_or(f64::NAN));
        r.scalar("rhs", rhs, "besov-normal", (rhs - rb).abs());
        r.scalar("mid_over_rhs", m, "beta-sum/besov-normal", (m - mb).abs());
    } else {
        r.notes.push("boundary Besov norm unsupported for this domain".into());
    }
    let mut t = Table::new("levels", &["depth", "lhs", "mid", "lhs_over_mid"]);
    for (k, x) in [(depth - 1, &b), (depth, &a)] {
        t.push(
            vec![k.to_string(), fmt(x.lhs), fmt(x.mid), fmt(x.lhs_over_mid)],
            "beta-sum",
            x.lhs_over_mid,
            (a.lhs_over_mid - b.lhs_over_mid).abs(),
        );
    }
    r.tables.push(t);
    Ok(r)
}
