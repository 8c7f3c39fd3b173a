use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use super::normal::unit_normal;
use crate::approx::{beta, besov_betas, difference_seminorm, DyadicGrid, Interval};
use crate::error::{invalid, Error, Result};
use crate::geometry::{window_decomposition, DefiningFunction, Domain, LocalFunction};
use crate::parallel::Exec;
use crate::quadrature::GaussLegendre;

/// Cells of the arc-length table of a graph.
const TABLE_CELLS: usize = 8192;

/// `x ↦ τ(x)` for a graph with support `[-s, s]`, flat outside.
struct ArcTable {
    s: f64,
    dx: f64,
    tau: Vec<f64>,
    rule: GaussLegendre,
}

impl ArcTable {
    fn new(a: &DefiningFunction) -> Self {
        let s = a.support();
        let dx = 2.0 * s / TABLE_CELLS as f64;
        let rule = GaussLegendre::new(12);
        let speed = |x: f64| (1.0 + a.derivative(x, 1).powi(2)).sqrt();
        let mut tau = vec![0.0; TABLE_CELLS + 1];
        for k in 0..TABLE_CELLS {
            let x0 = -s + k as f64 * dx;
            tau[k + 1] = tau[k] + rule.integrate(speed, x0, x0 + dx);
        }
        // Centre so that τ(0) = 0.
        let mid = tau[TABLE_CELLS / 2];
        tau.iter_mut().for_each(|t| *t -= mid);
        ArcTable { s, dx, tau, rule }
    }

    fn ends(&self) -> (f64, f64) {
        (self.tau[0], self.tau[TABLE_CELLS])
    }

    /// `x(t)` by bracketing in the table and Newton inside the cell.
    fn inverse(&self, a: &DefiningFunction, t: f64) -> f64 {
        let (t0, t1) = self.ends();
        if t <= t0 {
            return -self.s + (t - t0);
        }
        if t >= t1 {
            return self.s + (t - t1);
        }
        let k = (self.tau.partition_point(|v| *v <= t) - 1).min(TABLE_CELLS - 1);
        let x0 = -self.s + k as f64 * self.dx;
        let speed = |x: f64| (1.0 + a.derivative(x, 1).powi(2)).sqrt();
        let mut x = x0 + self.dx * (t - self.tau[k]) / (self.tau[k + 1] - self.tau[k]);
        for _ in 0..4 {
            let tx = self.tau[k] + self.rule.integrate(speed, x0, x);
            x -= (tx - t) / speed(x);
        }
        x
    }
}

/// Boundary parameterized by arc length, with `I` and its concentric double.
enum ArcCurve<'a> {
    Circle { radius: f64 },
    Graph { a: &'a DefiningFunction, table: ArcTable },
    Line,
}

impl ArcCurve<'_> {
    fn interval(&self) -> Interval {
        match self {
            ArcCurve::Circle { radius } => Interval::new(0.0, TAU * radius),
            ArcCurve::Graph { table, .. } => {
                let (a, b) = table.ends();
                Interval::new(a, b)
            }
            ArcCurve::Line => Interval::new(-1.0, 1.0),
        }
    }

    /// `(N∘z)^{(order)}(t)`.
    fn normal_derivative(&self, t: f64, order: usize) -> [f64; 2] {
        match self {
            ArcCurve::Circle { radius } => {
                let ang = t / radius + order as f64 * FRAC_PI_2;
                let m = radius.powi(-(order as i32));
                [m * ang.cos(), m * ang.sin()]
            }
            ArcCurve::Line => {
                if order == 0 {
                    [0.0, -1.0]
                } else {
                    [0.0, 0.0]
                }
            }
            ArcCurve::Graph { a, table } => {
                let first = |t: f64| {
                    let x = table.inverse(a, t);
                    let (u, du) = (a.derivative(x, 1), a.derivative(x, 2));
                    let w = (1.0 + u * u).powi(2);
                    [du / w, u * du / w]
                };
                match order {
                    0 => unit_normal(a.derivative(table.inverse(a, t), 1)),
                    1 => first(t),
                    _ => {
                        let e = 1e-4 * a.r();
                        let (p, m) = (first(t + e), first(t - e));
                        [(p[0] - m[0]) / (2.0 * e), (p[1] - m[1]) / (2.0 * e)]
                    }
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BesovNormalReport {
    pub n: usize,
    pub s: f64,
    pub p: f64,
    /// `|I|`, the parameter length.
    pub length: f64,
    /// `‖N∘z‖_{L^p(I)} = |I|^{1/p}`.
    pub lp_part: f64,
    /// `‖(N∘z)^{(n-1)}‖_{Ḃ^{1-1/p}_{p,p}(2I)}`.
    pub homogeneous: f64,
    pub value: f64,
}

/// `‖N‖_{B^s_{p,p}(∂Ω)}` for `s = n - 1/p` through the arc parameter `z(t)`:
/// `‖N∘z‖_{L^p(I)}` plus the difference seminorm of `(N∘z)^{(n-1)}` on `2I`
/// (differences with both ends in `2I`). `I` is one period for a disk, the
/// arc-length image of the support for a graph, and `[-1, 1]` for a
/// half-plane. `depth` sets `h_min = |2I| 2^{-depth}`.
pub fn besov_norm_normal(domain: &Domain, s: f64, p: f64, depth: u32, exec: Exec) -> Result<BesovNormalReport> {
    if !(p >= 1.0) {
        return Err(invalid("need p ≥ 1"));
    }
    let nf = s + 1.0 / p;
    let n = nf.round() as usize;
    if (nf - n as f64).abs() > 1e-9 || n == 0 {
        return Err(invalid(format!("s + 1/p = {nf} must be a positive integer")));
    }
    if n > 3 {
        return Err(Error::Unsupported(format!("normal derivatives of order {}", n - 1)));
    }
    if depth < 2 {
        return Err(invalid("depth must be at least 2"));
    }
    let curve = match domain {
        Domain::Disk { radius, .. } => ArcCurve::Circle { radius: *radius },
        Domain::HalfPlane { .. } => ArcCurve::Line,
        Domain::Graph(a) => {
            let sup = a.support();
            for j in 0..=n {
                let scale = a.sup_derivative(j).max(1e-300);
                if a.derivative(sup, j).abs().max(a.derivative(-sup, j).abs()) > 1e-6 * scale {
                    return Err(Error::Unsupported(format!(
                        "A^({j}) does not vanish at the support edge, so N is not smooth there"
                    )));
                }
            }
            ArcCurve::Graph { a, table: ArcTable::new(a) }
        }
        _ => {
            return Err(Error::Unsupported(
                "boundary Besov norms need a smooth boundary (disk, graph or half-plane)".into(),
            ))
        }
    };
    let iv = curve.interval();
    let big = iv.dilate(2.0);
    let order = n - 1;
    let delta = |t: f64, h: f64| {
        if !(big.a..=big.b).contains(&(t + h)) {
            return 0.0;
        }
        let (u, v) = (curve.normal_derivative(t + h, order), curve.normal_derivative(t, order));
        (u[0] - v[0]).hypot(u[1] - v[1])
    };
    let h_max = big.len();
    let h_min = h_max * 0.5f64.powi(depth as i32);
    let homogeneous = difference_seminorm(&delta, 1.0 - 1.0 / p, p, p, big, (h_min, h_max), 4 * depth as usize, exec)?.value;
    let lp_part = iv.len().powf(1.0 / p);
    Ok(BesovNormalReport {
        n,
        s,
        p,
        length: iv.len(),
        lp_part,
        homogeneous,
        value: lp_part + homogeneous,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaNormReport {
    pub n: usize,
    pub p: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub windows: usize,
    /// Distinct chart functions actually evaluated.
    pub distinct: usize,
    /// Largest measured `δ` over the windows.
    pub delta: f64,
    /// `Σ_k Σ_{I ⊂ I_R/6} β_(n)(A_k, I)^p / ℓ(I)^{np-2}`.
    pub lhs: f64,
    /// `Σ_k ‖A_k‖^p_{Ḃ^{n+1-1/p}_{p,p}(I_R/3)}` by the β-sum estimator.
    pub mid: f64,
    /// `‖N‖^p_{B^{n-1/p}_{p,p}(∂Ω)}`, when the boundary is smooth enough.
    pub rhs: Option<f64>,
    pub lhs_over_mid: f64,
    pub mid_over_rhs: Option<f64>,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else if a > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Dyadic intervals `[k 2^{-j}, (k+1) 2^{-j}] ⊂ [-a, a]` for `depth + 1`
/// levels starting at the coarsest one that fits.
fn dyadic_inside(a: f64, depth: u32) -> Vec<Interval> {
    let j0 = (1.0 / a).log2().ceil() as i32;
    let mut out = vec![];
    for j in j0..=j0 + depth as i32 {
        let l = 0.5f64.powi(j);
        let k_max = (a / l).floor() as i64;
        for k in -k_max..k_max {
            out.push(Interval::new(k as f64 * l, (k + 1) as f64 * l));
        }
    }
    out
}

/// The three quantities of the window β comparison for `(n, p)` on
/// `R`-windows, with `depth + 1` dyadic levels per β-sum.
pub fn lemma_norm_beta_check(domain: &Domain, n: usize, p: f64, r: f64, depth: u32, exec: Exec) -> Result<LemmaNormReport> {
    if n == 0 || !(p >= 1.0) {
        return Err(invalid("need n ≥ 1 and p ≥ 1"));
    }
    let windows = window_decomposition(domain, r, n, f64::INFINITY)?;
    let delta = windows.iter().map(|w| w.measured_delta(2049)).fold(0.0, f64::max);
    let mut distinct: Vec<(&LocalFunction, usize)> = vec![];
    for w in &windows {
        match distinct.iter_mut().find(|(l, _)| **l == w.local) {
            Some(entry) => entry.1 += 1,
            None => distinct.push((&w.local, 1)),
        }
    }
    let small = dyadic_inside(r / 6.0, depth);
    let grid = DyadicGrid::new(Interval::new(-r / 3.0, r / 3.0), 0, depth);
    let s = n as f64 + 1.0 - 1.0 / p;
    let (mut lhs, mut mid) = (0.0, 0.0);
    for (local, count) in &distinct {
        let a = |x: f64| local.eval(x);
        let terms = exec.map(&small, |iv| {
            beta(&a, *iv, n).map(|b| b.value.powf(p) / iv.len().powf(n as f64 * p - 2.0))
        });
        let l: f64 = terms.into_iter().collect::<Result<Vec<_>>>()?.iter().sum();
        let m = besov_betas(&a, s, p, n, &grid, exec)?.value.powf(p);
        lhs += *count as f64 * l;
        mid += *count as f64 * m;
    }
    let rhs = match besov_norm_normal(domain, n as f64 - 1.0 / p, p, depth + 8, exec) {
        Ok(b) => Some(b.value.powf(p)),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(LemmaNormReport {
        n,
        p,
        r,
        windows: windows.len(),
        distinct: distinct.len(),
        delta,
        lhs,
        mid,
        rhs,
        lhs_over_mid: ratio(lhs, mid),
        mid_over_rhs: rhs.map(|v| ratio(mid, v)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_intervals_fit() {
        let ivs = dyadic_inside(1.0 / 6.0, 2);
        assert!(ivs.iter().all(|iv| iv.a >= -1.0 / 6.0 && iv.b <= 1.0 / 6.0));
        assert_eq!(ivs.iter().filter(|iv| iv.len() == 0.125).count(), 2);
        assert_eq!(ivs.len(), 2 + 4 + 10);
    }

    #[test]
    fn half_plane_normal_is_constant() {
        let r = besov_norm_normal(&Domain::upper_half_plane(), 0.5, 2.0, 8, Exec::default()).unwrap();
        assert_eq!(r.homogeneous, 0.0);
        assert!((r.lp_part - 2f64.sqrt()).abs() < 1e-15);
    }
}
