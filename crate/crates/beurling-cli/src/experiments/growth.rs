use anyhow::{bail, Result};
use beurling_lab::beltrami::{
    corner_divergence, iterate_growth, neumann_h, principal_solution, BeltramiCoefficient, GrowthSampling, MuSpec,
    PrincipalSolution, Route, SeriesState,
};
use beurling_lab::geometry::DomainSpec;
use beurling_lab::operators::GridFunction;
use beurling_lab::parallel::Exec;
use serde::{Deserialize, Serialize};

use super::{default_box, rect_of};
use crate::config::{check_positive, ExperimentConfig};
use crate::report::{fmt, ExperimentReport, Table};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IteratesParams {
    pub n: u32,
    pub p: f64,
    pub m_max: i32,
    pub collar: f64,
    pub corner_collar: f64,
    pub route: Route,
    /// `[x0, x1, y0, y1]`; defaults to the domain's bounding square.
    pub window: Option<[f64; 4]>,
}

impl Default for IteratesParams {
    fn default() -> Self {
        IteratesParams { n: 1, p: 4.0, m_max: 8, collar: 0.05, corner_collar: 0.1, route: Route::Contour, window: None }
    }
}

/// Norms of `∇^n B^m χ_Ω` for `m ≤ m_max` and the fitted exponential base.
/// `depth` gives `2^depth` nodes per side (default 5); errors compare against
/// half as many nodes.
pub fn run_iterates(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: IteratesParams = cfg.params()?;
    check_positive(&[("p", p.p)])?;
    let (_, d) = cfg.domain_or(DomainSpec::Disk { center: [0.0, 0.0], radius: 1.0 })?;
    let nodes = 1usize << cfg.depth.unwrap_or(5);
    let s = GrowthSampling {
        window: p.window.map(rect_of).unwrap_or_else(|| default_box(&d)),
        nodes,
        collar: p.collar,
        corner_collar: p.corner_collar,
        route: p.route,
    };
    let fine = iterate_growth(&d, p.n, p.p, p.m_max, &s, exec)?;
    let coarse = iterate_growth(&d, p.n, p.p, p.m_max, &GrowthSampling { nodes: nodes / 2, ..s }, exec)?;
    let method = match p.route {
        Route::Pv => "pv-quadrature+ladder",
        _ => "contour+ladder",
    };
    let mut r = ExperimentReport::new("iterates", "Growth of Beurling iterate norms", cfg);
    let mut t = Table::new("norms", &["m", "norm"]);
    for ((m, v), (_, w)) in fine.norms.iter().zip(&coarse.norms) {
        t.push(vec![m.to_string(), fmt(*v)], method, *v, (v - w).abs());
    }
    r.exact("samples", fine.samples as f64);
    r.exact("vanishing", fine.vanishing as u8 as f64);
    r.scalar("base", fine.base, "nnls-fit", (fine.base - coarse.base).abs());
    if let Some(f) = fine.fit {
        r.scalar("fit_c", f.c, "nnls-fit", coarse.fit.map_or(f64::NAN, |g| (f.c - g.c).abs()));
        r.scalar("fit_k", f.k, "nnls-fit", coarse.fit.map_or(f64::NAN, |g| (f.k - g.k).abs()));
        r.scalar("fit_log_rms", f.log_rms, "nnls-fit", 0.0);
    }
    if p.p <= 2.0 {
        r.notes.push("p ≤ 2 is exploratory".into());
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CornerParams {
    pub p_values: Vec<f64>,
    /// Corner radii in units of `4h`, doubling: `4h·2^k` for `k < deltas`.
    pub deltas: u32,
    /// Skip the `2N` rerun that supplies the error estimate.
    pub skip_refinement: bool,
}

impl Default for CornerParams {
    fn default() -> Self {
        CornerParams { p_values: vec![2.0, 3.0, 4.0], deltas: 5, skip_refinement: false }
    }
}

/// `‖∂Bχ_Q‖_{L^p}` on the unit square away from the corners, with the
/// log-log slope against the corner radius. `depth` gives `2^depth` nodes per
/// side (default 10); errors are the change at `2^{depth+1}` with the same
/// radii.
pub fn run_corner(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: CornerParams = cfg.params()?;
    if p.deltas < 2 {
        bail!("corner needs at least two radii");
    }
    let nodes = 1usize << cfg.depth.unwrap_or(10);
    let h = 1.0 / nodes as f64;
    let deltas: Vec<f64> = (0..p.deltas as i32).map(|k| 4.0 * h * 2f64.powi(k)).collect();
    let mut r = ExperimentReport::new("corner", "Corner growth of the derivative of the Beurling transform of a square", cfg);
    let mut t = Table::new("norms", &["p", "delta", "norm"]);
    for &pp in &p.p_values {
        let a = corner_divergence(pp, &deltas, nodes, exec)?;
        let b = if p.skip_refinement { None } else { Some(corner_divergence(pp, &deltas, 2 * nodes, exec)?) };
        for (k, (dl, v)) in a.norms.iter().enumerate() {
            let err = b.as_ref().map_or(0.0, |b| (b.norms[k].1 - v).abs());
            t.push(vec![fmt(pp), fmt(*dl), fmt(*v)], "closed-form-polygon", *v, err);
        }
        let err = b.as_ref().map_or(0.0, |b| (b.slope - a.slope).abs());
        r.scalar(&format!("slope_p{pp}"), a.slope, "closed-form-polygon", err);
        if let Some(e) = a.expected_slope {
            r.exact(&format!("expected_slope_p{pp}"), e);
        }
        r.scalar(&format!("power_rms_p{pp}"), a.power_rms, "least-squares", 0.0);
        r.scalar(&format!("log_rms_p{pp}"), a.log_rms, "least-squares", 0.0);
    }
    r.tables.push(t);
    Ok(r)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeltramiParams {
    pub mu: MuSpec,
    pub half_box: f64,
    pub tol: f64,
    pub max_terms: usize,
    /// Rerun at twice the mollification width to estimate its effect.
    pub width_check: bool,
}

impl Default for BeltramiParams {
    fn default() -> Self {
        BeltramiParams {
            mu: MuSpec::Disk { k: 0.3, radius: 1.0, width: 0.02 },
            half_box: 2.048,
            tol: 1e-10,
            max_terms: 40,
            width_check: true,
        }
    }
}

struct Solved {
    mu: BeltramiCoefficient,
    state: SeriesState,
    f: PrincipalSolution,
}

fn solve(spec: &MuSpec, n: usize, p: &BeltramiParams, exec: Exec) -> Result<Solved> {
    let mu = BeltramiCoefficient::from_spec(spec, n, p.half_box, exec)?;
    let state = neumann_h(&mu, p.tol, p.max_terms, exec)?;
    let f = principal_solution(&mu, &state, exec)?;
    Ok(Solved { mu, state, f })
}

/// Max deviation from the constant-disk solution `z + k z̄` (inside) and
/// `z + k r²/z` (outside).
fn disk_errors(d: &GridFunction, k: f64, radius: f64) -> (f64, f64) {
    let (mut inner, mut outer) = (0.0f64, 0.0f64);
    for idx in 0..d.n * d.n {
        let z = d.node(idx % d.n, idx / d.n);
        let r = z.norm() / radius;
        if r < 0.8 {
            inner = inner.max((d.data[idx] - k * z.conj()).norm());
        } else if r > 1.2 && r < 1.8 {
            outer = outer.max((d.data[idx] - k * radius * radius / z).norm());
        }
    }
    (inner, outer)
}

fn widened(spec: &MuSpec) -> MuSpec {
    match *spec {
        MuSpec::Disk { k, radius, width } => MuSpec::Disk { k, radius, width: 2.0 * width },
        MuSpec::Square { k, half_side, width } => MuSpec::Square { k, half_side, width: 2.0 * width },
        ref s => s.clone(),
    }
}

/// Neumann series for `h = (I - μB)^{-1} μ` and the principal solution.
/// `depth` gives a `2^depth` grid (default 10).
pub fn run_beltrami(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let p: BeltramiParams = cfg.params()?;
    check_positive(&[("tol", p.tol), ("half_box", p.half_box)])?;
    let n = 1usize << cfg.depth.unwrap_or(10);
    let s = solve(&p.mu, n, &p, exec)?;
    let alt = if p.width_check && widened(&p.mu) != p.mu { Some(solve(&widened(&p.mu), n, &p, exec)?) } else { None };
    let rel = |x: &Solved| x.state.h.combine(&x.mu.mu, |a, b| a - b).map(|d| d.norm_l2() / x.mu.mu.norm_l2());
    let h_mu = rel(&s)?;
    let width_err = |a: f64, b: Option<f64>| b.map_or(0.0, |b| (a - b).abs());
    let mut r = ExperimentReport::new("beltrami", "Neumann series for the Beltrami equation", cfg);
    r.scalar("h_minus_mu", h_mu, "fft", width_err(h_mu, alt.as_ref().map(rel).transpose()?));
    r.scalar("max_term_ratio", s.state.max_term_ratio(), "fft", 0.0);
    r.scalar("isometry", beurling_lab::beltrami::isometry_ratio(&s.mu.mu, exec)?, "fft-periodic", 0.0);
    r.exact("terms", s.state.term_norms.len() as f64);
    r.scalar("residual_median", s.f.residual_median, "finite-difference", 0.0);
    r.scalar("residual_max", s.f.residual_max, "finite-difference", 0.0);
    r.scalar("edge_max", s.f.edge_max, "cauchy-fft", 0.0);
    r.scalar("edge_model", s.f.edge_model, "moment", 0.0);
    if let MuSpec::Disk { k, radius, .. } = p.mu {
        let (i, o) = disk_errors(&s.f.displacement, k, radius);
        let (ai, ao) = alt.as_ref().map_or((i, o), |a| disk_errors(&a.f.displacement, k, radius));
        r.scalar("inner_error", i, "cauchy-fft", (i - ai).abs());
        r.scalar("outer_error", o, "cauchy-fft", (o - ao).abs());
    }
    let mut t = Table::new("convergence", &["m", "term_norm", "residual"]);
    for (m, (tn, res)) in s.state.term_norms.iter().zip(&s.state.residuals).enumerate() {
        t.push(vec![m.to_string(), fmt(*tn), fmt(*res)], "fft", *res, 0.0);
    }
    r.tables.push(t);
    Ok(r)
}
