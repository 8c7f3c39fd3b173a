use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{Domain, Rect};
use crate::operators::{
    beurling_iterate_index, derivative_ladder, polygon_closed, t_char_closed, t_char_contour, t_char_pv, LadderCase,
    MultiIndex,
};
use crate::parallel::Exec;

/// How `T^γ χ_Ω` is evaluated at the sample nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Closed form when the domain has one, contour otherwise.
    #[default]
    Auto,
    Contour,
    Pv,
}

fn evaluate(domain: &Domain, gamma: MultiIndex, z: C, route: Route) -> Result<C> {
    Ok(match route {
        Route::Auto => match t_char_closed(domain, gamma, z) {
            Ok(v) => v.value,
            Err(crate::error::Error::Unsupported(_)) => t_char_contour(domain, gamma, z)?.value,
            Err(e) => return Err(e),
        },
        Route::Contour => t_char_contour(domain, gamma, z)?.value,
        Route::Pv => t_char_pv(domain, gamma, z, &[])?.value,
    })
}

/// `|∇^n B^m χ_Ω(z)| = Σ_{|α| = n} |D^α B^m χ_Ω(z)|` for `z ∈ Ω`.
pub fn iterate_gradient(domain: &Domain, n: u32, m: i32, z: C, route: Route) -> Result<f64> {
    let (gamma, c) = beurling_iterate_index(m)?;
    let mut s = 0.0;
    for a1 in 0..=n as i32 {
        let alpha = MultiIndex::new(a1, n as i32 - a1);
        s += match derivative_ladder(gamma, alpha)? {
            LadderCase::Zero => 0.0,
            LadderCase::Identity { constant } => (c * constant).norm(),
            LadderCase::Reduce { constant, index } => (c * constant * evaluate(domain, index, z, route)?).norm(),
        };
    }
    Ok(s)
}

/// Sampling of `Ω ∩ window` for [`iterate_growth`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSampling {
    pub window: Rect,
    /// Midpoint nodes per side of `window`.
    pub nodes: usize,
    /// Nodes closer than this to `∂Ω` are skipped.
    pub collar: f64,
    /// Nodes closer than this to a vertex of `Ω` are skipped.
    #[serde(default)]
    pub corner_collar: f64,
    pub route: Route,
}

/// `N_m ≈ C m^{n+1} (K + base^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub c: f64,
    pub k: f64,
    pub base: f64,
    /// RMS of `log(fit / N_m)`.
    pub log_rms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateGrowthReport {
    pub n: u32,
    pub p: f64,
    /// `(m, ‖∇^n B^m χ_Ω‖_{L^p})`.
    pub norms: Vec<(i32, f64)>,
    pub samples: usize,
    /// Every norm is below `1e-10`; the fit is then `None` and the base is 1.
    pub vanishing: bool,
    pub fit: Option<GrowthFit>,
    pub base: f64,
}

pub fn iterate_growth(
    domain: &Domain,
    n: u32,
    p: f64,
    m_max: i32,
    sampling: &GrowthSampling,
    exec: Exec,
) -> Result<IterateGrowthReport> {
    if n < 1 || m_max < 1 || !(p >= 1.0) || sampling.nodes == 0 || !sampling.window.is_finite() {
        return Err(invalid("need n ≥ 1, m_max ≥ 1, p ≥ 1 and a finite sampling window"));
    }
    let w = sampling.window;
    let verts = domain.vertices().unwrap_or_default();
    let (hx, hy) = (w.width() / sampling.nodes as f64, w.height() / sampling.nodes as f64);
    let pts: Vec<C> = (0..sampling.nodes * sampling.nodes)
        .map(|k| {
            let (i, j) = (k % sampling.nodes, k / sampling.nodes);
            C::new(w.x0 + (i as f64 + 0.5) * hx, w.y0 + (j as f64 + 0.5) * hy)
        })
        .filter(|&z| {
            domain.contains(z)
                && domain.boundary_distance(z) > sampling.collar
                && verts.iter().all(|v| (z - v).norm() > sampling.corner_collar)
        })
        .collect();
    if pts.is_empty() {
        return Err(invalid("no sample nodes inside the domain"));
    }
    let mut norms = vec![];
    for m in 1..=m_max {
        let vals = exec.map(&pts, |&z| iterate_gradient(domain, n, m, z, sampling.route));
        let mut s = 0.0;
        for v in vals {
            s += v?.powf(p);
        }
        norms.push((m, (s * hx * hy).powf(1.0 / p)));
    }
    let vanishing = norms.iter().all(|&(_, v)| v < 1e-10);
    let fit = if vanishing { None } else { fit_growth(&norms, n) };
    Ok(IterateGrowthReport {
        n,
        p,
        samples: pts.len(),
        vanishing,
        base: fit.map_or(1.0, |f| f.base),
        fit,
        norms,
    })
}

/// Grid search in the base with a nonnegative two-term least squares for
/// `(CK, C)` at each base, weighted relative to the data.
fn fit_growth(norms: &[(i32, f64)], n: u32) -> Option<GrowthFit> {
    let data: Vec<(f64, f64)> = norms
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(m, v)| (m as f64, v / (m as f64).powi(n as i32 + 1)))
        .collect();
    if data.is_empty() {
        return None;
    }
    let mut best: Option<(f64, GrowthFit)> = None;
    for step in 0..=3000 {
        let b = 1.0 + step as f64 * 1e-3;
        let rows: Vec<(f64, f64, f64)> = data.iter().map(|&(m, y)| (1.0 / y, b.powf(m) / y, 1.0)).collect();
        let Some((a0, a1)) = nnls2(&rows) else { continue };
        let log_rms = (data
            .iter()
            .map(|&(m, y)| ((a0 + a1 * b.powf(m)).max(1e-300) / y).ln().powi(2))
            .sum::<f64>()
            / data.len() as f64)
            .sqrt();
        let rss: f64 = rows.iter().map(|(u, v, t)| (a0 * u + a1 * v - t).powi(2)).sum();
        if best.as_ref().map_or(true, |(r, _)| rss < *r * (1.0 - 1e-12)) {
            // Without an exponential part the model is `C m^{n+1}` with base 1.
            let fit = if a1 > 0.0 {
                GrowthFit { c: a1, k: a0 / a1, base: b, log_rms }
            } else {
                GrowthFit { c: a0, k: 0.0, base: 1.0, log_rms }
            };
            best = Some((rss, fit));
        }
    }
    best.map(|(_, f)| f)
}

/// Least squares for `a0 u + a1 v ≈ t` with `a0, a1 ≥ 0`.
fn nnls2(rows: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let (mut uu, mut uv, mut vv, mut ut, mut vt) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(u, v, t) in rows {
        uu += u * u;
        uv += u * v;
        vv += v * v;
        ut += u * t;
        vt += v * t;
    }
    let rss = |a0: f64, a1: f64| rows.iter().map(|(u, v, t)| (a0 * u + a1 * v - t).powi(2)).sum::<f64>();
    let det = uu * vv - uv * uv;
    if det.abs() > 1e-14 * uu * vv {
        let a0 = (ut * vv - vt * uv) / det;
        let a1 = (vt * uu - ut * uv) / det;
        if a0 >= 0.0 && a1 >= 0.0 {
            return Some((a0, a1));
        }
    }
    let c0 = (ut / uu).max(0.0);
    let c1 = (vt / vv).max(0.0);
    if !(c0.is_finite() && c1.is_finite()) {
        return None;
    }
    Some(if rss(c0, 0.0) <= rss(0.0, c1) { (c0, 0.0) } else { (0.0, c1) })
}

#[derive(Clone, Debug, Serialize)]
pub struct CornerReport {
    pub p: f64,
    pub nodes: usize,
    /// `(δ, ‖∂Bχ_Q‖_{L^p(Q ∖ ∪ B(v, δ))})`.
    pub norms: Vec<(f64, f64)>,
    /// Least-squares slope of `log N` against `log δ`.
    pub slope: f64,
    /// `(2 - p)/p`, the pure power law of a `1/r` singularity, for `p > 2`.
    pub expected_slope: Option<f64>,
    /// RMS of `log N` about the power-law fit.
    pub power_rms: f64,
    /// RMS of `log N` about the fit `N^p = A + B log(1/δ)`.
    pub log_rms: f64,
}

const SUB: usize = 8;

/// `‖∂Bχ_Q‖_{L^p}` on the unit square `Q = (0,1)²` with discs of radius `δ`
/// around the vertices removed, on an `nodes²` midpoint grid. Cells cut by a
/// removed circle are resampled on an `8 × 8` subgrid.
pub fn corner_divergence(p: f64, deltas: &[f64], nodes: usize, exec: Exec) -> Result<CornerReport> {
    let h = 1.0 / nodes as f64;
    if !(p >= 1.0) || deltas.len() < 2 || deltas.iter().any(|&d| !(d >= 4.0 * h && d < 0.25)) {
        return Err(invalid("need p ≥ 1 and at least two δ in [4h, 1/4)"));
    }
    let verts = [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 1.0), C::new(0.0, 1.0)];
    // |∂Bχ_Q| = |(-1/π) ∂T^{(-2,0)}χ_Q| = (2/π) |T^{(-3,0)}χ_Q|.
    let g = |z: C| -> Result<f64> {
        Ok((2.0 / PI * polygon_closed(&verts, MultiIndex::new(-3, 0), z)?.norm()).powf(p))
    };
    let corner = |z: C| verts.iter().map(|v| (z - v).norm()).fold(f64::INFINITY, f64::min);
    let rows = exec.map_range(nodes, |j| -> Result<Vec<(f64, f64)>> {
        (0..nodes)
            .map(|i| {
                let z = C::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                Ok((corner(z), g(z)?))
            })
            .collect()
    });
    let mut cells = Vec::with_capacity(nodes * nodes);
    for r in rows {
        cells.extend(r?);
    }
    let half_diag = h * std::f64::consts::FRAC_1_SQRT_2;
    let mut norms = vec![];
    for &d in deltas {
        let mut s = 0.0;
        let mut cut = vec![];
        for (k, &(r, v)) in cells.iter().enumerate() {
            if r > d + half_diag {
                s += v * h * h;
            } else if r >= d - half_diag {
                cut.push(k);
            }
        }
        let parts = exec.map(&cut, |&k| -> Result<f64> {
            let (i, j) = ((k % nodes) as f64, (k / nodes) as f64);
            let sh = h / SUB as f64;
            let mut acc = 0.0;
            for b in 0..SUB {
                for a in 0..SUB {
                    let z = C::new(i * h + (a as f64 + 0.5) * sh, j * h + (b as f64 + 0.5) * sh);
                    if corner(z) > d {
                        acc += g(z)? * sh * sh;
                    }
                }
            }
            Ok(acc)
        });
        for v in parts {
            s += v?;
        }
        norms.push((d, s.powf(1.0 / p)));
    }
    let xs: Vec<f64> = norms.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|(_, v)| v.ln()).collect();
    let (a, slope) = linear_fit(&xs, &ys);
    let power_rms = rms(xs.iter().zip(&ys).map(|(x, y)| a + slope * x - y));
    let ls: Vec<f64> = norms.iter().map(|(d, _)| -d.ln()).collect();
    let np: Vec<f64> = norms.iter().map(|(_, v)| v.powf(p)).collect();
    let (a2, b2) = linear_fit(&ls, &np);
    let log_rms = rms(ls.iter().zip(&ys).map(|(l, y)| (a2 + b2 * l).max(1e-300).ln() / p - y));
    Ok(CornerReport {
        p,
        nodes,
        norms,
        slope,
        expected_slope: (p > 2.0).then(|| (2.0 - p) / p),
        power_rms,
        log_rms,
    })
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

fn rms(it: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = it.collect();
    (v.iter().map(|e| e * e).sum::<f64>() / v.len() as f64).sqrt()
}
