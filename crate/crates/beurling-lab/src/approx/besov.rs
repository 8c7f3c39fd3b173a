use serde::Serialize;

use super::fit::{beta, BetaRecord, Interval};
use crate::error::{invalid, Result};
use crate::parallel::Exec;
use crate::quadrature::{adaptive_gauss, GaussLegendre};

/// `Δ^i_h f(z) = Σ_j (-1)^{i-j} C(i,j) f(z + jh)`.
pub fn finite_difference(f: &impl Fn(f64) -> f64, z: f64, h: f64, i: usize) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for j in 0..=i {
        let sign = if (i - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(z + j as f64 * h);
        binom = binom * (i - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// [`finite_difference`] for `f` known only on `domain`.
pub fn finite_difference_on(
    f: &impl Fn(f64) -> f64,
    domain: Interval,
    z: f64,
    h: f64,
    i: usize,
) -> Result<f64> {
    let end = z + i as f64 * h;
    if z.min(end) < domain.a || z.max(end) > domain.b {
        return Err(invalid(format!(
            "difference segment [{z}, {end}] leaves [{}, {}]",
            domain.a, domain.b
        )));
    }
    Ok(finite_difference(f, z, h, i))
}

/// Dyadic subintervals of `base` at levels `j_min..=j_max`: level `j` splits
/// `base` into `2^j` equal pieces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicGrid {
    pub base: Interval,
    pub j_min: u32,
    pub j_max: u32,
}

impl DyadicGrid {
    pub fn new(base: Interval, j_min: u32, j_max: u32) -> Self {
        DyadicGrid { base, j_min, j_max }
    }

    pub fn level(&self, j: u32) -> Vec<(i64, Interval)> {
        let m = 1i64 << j;
        let l = self.base.len() / m as f64;
        (0..m)
            .map(|k| (k, Interval::new(self.base.a + k as f64 * l, self.base.a + (k + 1) as f64 * l)))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.j_max < self.j_min || !(self.base.len() > 0.0)
    }

    /// Every `(level, index, interval)` in the grid.
    pub fn intervals(&self) -> Vec<(u32, i64, Interval)> {
        if self.is_empty() {
            return vec![];
        }
        (self.j_min..=self.j_max)
            .flat_map(|j| self.level(j).into_iter().map(move |(k, iv)| (j, k, iv)))
            .collect()
    }
}

/// Output of [`besov_betas`].
#[derive(Clone, Debug, Serialize)]
pub struct BesovBetaReport {
    pub value: f64,
    /// `(level, Σ_{I at level} (β/ℓ^{s-1})^p ℓ)`.
    pub level_sums: Vec<(u32, f64)>,
    pub betas: Vec<BetaRecord>,
}

/// `(Σ_{I ∈ grid} (β_(n)(f,I) / ℓ(I)^{s-1})^p ℓ(I))^{1/p}` with per-level sums.
pub fn besov_betas(
    f: &(impl Fn(f64) -> f64 + Sync),
    s: f64,
    p: f64,
    n: usize,
    grid: &DyadicGrid,
    exec: Exec,
) -> Result<BesovBetaReport> {
    if grid.is_empty() {
        return Err(invalid("empty dyadic grid"));
    }
    if !(s > 0.0 && p >= 1.0) {
        return Err(invalid("need s > 0 and p ≥ 1"));
    }
    if (n as f64) < s.floor() {
        return Err(invalid(format!("degree n = {n} is below [s] = {}", s.floor())));
    }
    let ivs = grid.intervals();
    let betas = exec
        .map(&ivs, |&(j, k, iv)| {
            beta(f, iv, n).map(|mut b| {
                b.level = Some(j as i32);
                b.index = Some(k);
                b
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut level_sums: Vec<(u32, f64)> = (grid.j_min..=grid.j_max).map(|j| (j, 0.0)).collect();
    for b in &betas {
        let l = b.interval.len();
        let term = (b.value / l.powf(s - 1.0)).powf(p) * l;
        let j = b.level.unwrap_or(0) as u32;
        level_sums[(j - grid.j_min) as usize].1 += term;
    }
    let total: f64 = level_sums.iter().map(|(_, v)| v).sum();
    Ok(BesovBetaReport {
        value: total.powf(1.0 / p),
        level_sums,
        betas,
    })
}

/// Output of [`besov_differences`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BesovDiffReport {
    pub value: f64,
    pub h_min: f64,
    pub h_max: f64,
}

const H_PANELS: usize = 48;

/// `(∫_{h_min ≤ |h| ≤ h_max} ‖Δ^M_h f‖^q_{L^p(window)} |h|^{-sq} dh/|h|)^{1/q}`.
///
/// The `h`-integral runs over `log|h|` with Gauss panels; the inner `L^p`
/// norm uses adaptive Gauss on the window.
#[allow(clippy::too_many_arguments)]
pub fn besov_differences(
    f: &(impl Fn(f64) -> f64 + Sync),
    s: f64,
    p: f64,
    q: f64,
    m: usize,
    window: Interval,
    h_min: f64,
    h_max: f64,
    exec: Exec,
) -> Result<BesovDiffReport> {
    if (m as f64) < s.floor() + 1.0 {
        return Err(invalid(format!("difference order M = {m} is below [s] + 1")));
    }
    let delta = |x: f64, h: f64| finite_difference(f, x, h, m).abs();
    difference_seminorm(&delta, s, p, q, window, (h_min, h_max), H_PANELS, exec)
}

/// The seminorm of [`besov_differences`] for a precomputed difference
/// modulus `delta(x, h) = |Δ^M_h f(x)|`, which may be any vector norm.
/// `panels` Gauss panels cover `log h_min..log h_max`.
#[allow(clippy::too_many_arguments)]
pub fn difference_seminorm(
    delta: &(impl Fn(f64, f64) -> f64 + Sync),
    s: f64,
    p: f64,
    q: f64,
    window: Interval,
    (h_min, h_max): (f64, f64),
    panels: usize,
    exec: Exec,
) -> Result<BesovDiffReport> {
    if !(h_min > 0.0 && h_max > h_min && p >= 1.0 && q >= 1.0 && s > 0.0 && panels > 0) {
        return Err(invalid("need 0 < h_min < h_max, p, q ≥ 1, s > 0 and a panel"));
    }
    let outer = GaussLegendre::new(8);
    let inner = GaussLegendre::new(10);
    let (t0, t1) = (h_min.ln(), h_max.ln());
    let dt = (t1 - t0) / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| outer.mapped(t0 + k as f64 * dt, t0 + (k + 1) as f64 * dt).collect::<Vec<_>>())
        .collect();
    let scale = window.len();
    let terms = exec.map(&nodes, |&(t, w)| {
        let h = t.exp();
        let lp = |sign: f64| {
            let g = |x: f64| delta(x, sign * h).powf(p);
            // Relative tolerance keeps the seminorm absolutely homogeneous.
            let coarse: f64 = (0..16)
                .map(|k| {
                    let a = window.a + k as f64 * scale / 16.0;
                    inner.integrate(g, a, a + scale / 16.0)
                })
                .sum();
            if coarse == 0.0 {
                return 0.0;
            }
            let (v, _) = adaptive_gauss(&inner, &g, window.a, window.b, 1e-13 * coarse, 200);
            v.max(0.0).powf(1.0 / p)
        };
        let both = lp(1.0).powf(q) + lp(-1.0).powf(q);
        w * both * h.powf(-s * q)
    });
    let total: f64 = terms.iter().sum();
    Ok(BesovDiffReport {
        value: total.powf(1.0 / q),
        h_min,
        h_max,
    })
}

/// Both estimators on one function supported in `[-1, 1]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BesovCrossCheck {
    pub betas: f64,
    pub differences: f64,
    /// `betas / differences`.
    pub ratio: f64,
}

/// β-sums over dyadic subintervals of `[-2, 2]` at levels `0..=depth`
/// against `|h|`-integrated `(n+1)`-th differences on `[-3, 3]` with
/// `|h| ∈ [4·2^{-depth}, 4]`, both with `q = p`.
pub fn besov_cross_check(
    f: &(impl Fn(f64) -> f64 + Sync),
    s: f64,
    p: f64,
    n: usize,
    depth: u32,
    exec: Exec,
) -> Result<BesovCrossCheck> {
    let grid = DyadicGrid::new(Interval::new(-2.0, 2.0), 0, depth);
    let betas = besov_betas(f, s, p, n, &grid, exec)?.value;
    let h_max = 4.0;
    let differences =
        besov_differences(f, s, p, p, n + 1, Interval::new(-3.0, 3.0), h_max * 0.5f64.powi(depth as i32), h_max, exec)?
            .value;
    Ok(BesovCrossCheck {
        betas,
        differences,
        ratio: if differences > 0.0 { betas / differences } else { f64::NAN },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn difference_examples() {
        assert_relative_eq!(finite_difference(&|x: f64| x * x, 0.0, 1.0, 2), 2.0);
        assert_relative_eq!(finite_difference(&|x: f64| 3.0 * x - 1.0, 0.7, 0.3, 2), 0.0, epsilon = 1e-14);
        assert_relative_eq!(finite_difference(&|x: f64| x * x * x, 0.0, 0.5, 3), 0.75);
        let dom = Interval::new(0.0, 1.0);
        assert!(finite_difference_on(&|x: f64| x, dom, 0.5, 0.3, 2).is_err());
    }

    #[test]
    fn estimators_vanish_on_polynomials() {
        let f = |x: f64| 1.0 + x - 0.5 * x * x;
        let grid = DyadicGrid::new(Interval::new(-1.0, 1.0), 1, 5);
        let b = besov_betas(&f, 1.5, 2.0, 2, &grid, Exec::default()).unwrap();
        assert!(b.value < 1e-8, "{}", b.value);
        let d = besov_differences(&f, 1.5, 2.0, 2.0, 3, Interval::new(-1.0, 1.0), 1e-3, 1.0, Exec::default())
            .unwrap();
        assert!(d.value < 1e-8, "{}", d.value);
    }
}
