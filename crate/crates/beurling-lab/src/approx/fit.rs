use serde::{Deserialize, Serialize};

use super::poly::Poly1D;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{adaptive_gauss, integrate_abs, GaussLegendre, Tolerance};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        Interval { a, b }
    }
    pub fn len(&self) -> f64 {
        self.b - self.a
    }
    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
    /// Concentric dilate `λI`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let h = 0.5 * lambda * self.len();
        Interval::new(self.mid() - h, self.mid() + h)
    }
    pub fn translate(&self, t: f64) -> Self {
        Interval::new(self.a + t, self.b + t)
    }
    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.a >= self.a && other.b <= self.b
    }
    fn check(&self) -> Result<()> {
        if self.a.is_finite() && self.b.is_finite() && self.a < self.b {
            Ok(())
        } else {
            Err(invalid(format!("degenerate interval [{}, {}]", self.a, self.b)))
        }
    }
}

/// `R^n_I f` with its diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxFit {
    pub interval: Interval,
    pub n: usize,
    pub poly: Poly1D,
    /// `∫_I (R f - f) u^j`, `u = (x - mid)/(|I|/2)`, `j = 0..=n`, each from a
    /// quadrature independent of the one used for the projection.
    pub residuals: Vec<f64>,
    pub l1_norm: f64,
    /// `‖f - R f‖_{L¹(3I)}`.
    pub l1_residual_3i: f64,
    /// `‖R‖_{L^∞(I)} |I| / ‖f‖_{L¹(I)}` (0 when `f` vanishes on `I`).
    pub sup_constant: f64,
}

pub const TOL_FIT: f64 = 1e-9;

impl ApproxFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `max_j |r_j| ≤ tol · ‖f‖_{L¹(I)}`, with an absolute floor for `f ≈ 0`.
    pub fn residuals_ok(&self, tol: f64) -> bool {
        self.max_residual() <= tol * self.l1_norm.max(1e-300) + 1e-15 * self.interval.len()
    }
}

/// Monomial coefficients of the Legendre polynomials `P_0..=P_n`.
fn legendre_table(n: usize) -> Vec<Vec<f64>> {
    let mut t = vec![vec![1.0]];
    if n >= 1 {
        t.push(vec![0.0, 1.0]);
    }
    for k in 2..=n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 1];
        for (i, c) in t[k - 1].iter().enumerate() {
            next[i + 1] += (2.0 * kf - 1.0) / kf * c;
        }
        for (i, c) in t[k - 2].iter().enumerate() {
            next[i] -= (kf - 1.0) / kf * c;
        }
        t.push(next);
    }
    t
}

fn horner(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * u + v)
}

const MAX_PANELS: usize = 400;

fn integrate(rule: &GaussLegendre, f: &impl Fn(f64) -> f64, iv: Interval, scale: f64) -> Result<f64> {
    let (v, _) = adaptive_gauss(rule, f, iv.a, iv.b, 1e-15 * scale.max(1e-300), MAX_PANELS);
    if !v.is_finite() {
        return Err(Error::NonFinite("approximating-polynomial quadrature".into()));
    }
    Ok(v)
}

fn l1_norm(f: &impl Fn(f64) -> f64, iv: Interval) -> f64 {
    integrate_abs(f, iv.a, iv.b, Tolerance::new(1e-15, 1e-12)).value
}

/// `R^n_I f`: the `L²(I)` projection of `f` onto polynomials of degree `≤ n`.
pub fn approx_poly(f: &impl Fn(f64) -> f64, iv: Interval, n: usize) -> Result<ApproxFit> {
    approx_poly_with_order(f, iv, n, 4 * (n + 1))
}

/// As [`approx_poly`] with an explicit Gauss–Legendre order for the moments.
pub fn approx_poly_with_order(
    f: &impl Fn(f64) -> f64,
    iv: Interval,
    n: usize,
    order: usize,
) -> Result<ApproxFit> {
    iv.check()?;
    let (c, h) = (iv.mid(), 0.5 * iv.len());
    let table = legendre_table(n);
    let l1 = l1_norm(f, iv);
    if !l1.is_finite() {
        return Err(Error::NonFinite("f on the fitting interval".into()));
    }
    let rule = GaussLegendre::new(order.max(n + 1));
    let mut coeffs = vec![0.0; n + 1];
    for (k, pk) in table.iter().enumerate() {
        let g = |x: f64| f(x) * horner(pk, (x - c) / h);
        let m = integrate(&rule, &g, iv, l1)?;
        let ck = m * (2 * k + 1) as f64 / (2.0 * h);
        for (i, v) in pk.iter().enumerate() {
            coeffs[i] += ck * v;
        }
    }
    let poly = Poly1D::new(c, h, coeffs);

    let check_rule = GaussLegendre::new(order.max(n + 1) + 7);
    let residuals = (0..=n)
        .map(|j| {
            let g = |x: f64| (poly.eval(x) - f(x)) * ((x - c) / h).powi(j as i32);
            integrate(&check_rule, &g, iv, l1)
        })
        .collect::<Result<Vec<_>>>()?;
    let wide = iv.dilate(3.0);
    let l1_residual_3i = l1_norm(&|x| f(x) - poly.eval(x), wide);
    let sup = (0..=1000)
        .map(|i| poly.eval(iv.a + iv.len() * i as f64 / 1000.0).abs())
        .fold(0.0, f64::max);
    let sup_constant = if l1 > 0.0 { sup * iv.len() / l1 } else { 0.0 };
    Ok(ApproxFit {
        interval: iv,
        n,
        poly,
        residuals,
        l1_norm: l1,
        l1_residual_3i,
        sup_constant,
    })
}

/// `β_(n)(f, I)` for one interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaRecord {
    pub interval: Interval,
    /// Dyadic level and index of `I` when it comes from a [`super::DyadicGrid`].
    pub level: Option<i32>,
    pub index: Option<i64>,
    pub n: usize,
    pub value: f64,
}

/// `β_(n)(f, I) = |I|^{-2} ∫_{3I} |f - R^n_{3I} f|`.
pub fn beta(f: &impl Fn(f64) -> f64, iv: Interval, n: usize) -> Result<BetaRecord> {
    let wide = iv.dilate(3.0);
    let fit = approx_poly(f, wide, n)?;
    let l1 = l1_norm(&|x| f(x) - fit.poly.eval(x), wide);
    let value = l1 / (iv.len() * iv.len());
    if !value.is_finite() {
        return Err(Error::NonFinite("beta".into()));
    }
    Ok(BetaRecord {
        interval: iv,
        level: None,
        index: None,
        n,
        value,
    })
}

/// `‖f - R^n_I f‖_{L^p(I)} / ‖f - P‖_{L^p(I)}` for a competitor `P`.
pub fn near_optimality(f: &impl Fn(f64) -> f64, iv: Interval, n: usize, p: f64, competitor: &Poly1D) -> Result<f64> {
    let fit = approx_poly(f, iv, n)?;
    let lp = |g: &dyn Fn(f64) -> f64| {
        integrate_abs(|x| g(x).abs().powf(p), iv.a, iv.b, Tolerance::new(1e-15, 1e-12))
            .value
            .powf(1.0 / p)
    };
    let num = lp(&|x| f(x) - fit.poly.eval(x));
    let den = lp(&|x| f(x) - competitor.eval(x));
    Ok(if den > 0.0 { num / den } else if num > 0.0 { f64::INFINITY } else { 0.0 })
}

/// `‖f - R^n_I f‖_{L¹(I)} / ‖f - R^n_{I'} f‖_{L¹(I')}` for `I ⊂ I'`.
pub fn chain_constant(f: &impl Fn(f64) -> f64, inner: Interval, outer: Interval, n: usize) -> Result<f64> {
    if !outer.contains_interval(&inner) {
        return Err(invalid("chain bound needs I ⊂ I'"));
    }
    let a = approx_poly(f, inner, n)?;
    let b = approx_poly(f, outer, n)?;
    let num = l1_norm(&|x| f(x) - a.poly.eval(x), inner);
    let den = l1_norm(&|x| f(x) - b.poly.eval(x), outer);
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// Sign changes of `f - R f` over `samples` equispaced points of `I`.
pub fn residual_sign_changes(f: &impl Fn(f64) -> f64, fit: &ApproxFit, samples: usize) -> usize {
    let iv = fit.interval;
    let m = samples.max(2);
    let scale = fit.l1_norm / iv.len();
    let mut last = 0.0f64;
    let mut changes = 0;
    for i in 0..m {
        let x = iv.a + iv.len() * (i as f64 + 0.5) / m as f64;
        let r = f(x) - fit.poly.eval(x);
        if r.abs() <= 1e-13 * scale.max(1e-300) {
            continue;
        }
        if last != 0.0 && r.signum() != last.signum() {
            changes += 1;
        }
        last = r;
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn legendre_table_matches_p3() {
        let t = legendre_table(3);
        assert_eq!(t[3], vec![0.0, -1.5, 0.0, 2.5]);
    }

    #[test]
    fn projection_fixes_polynomials() {
        let fit = approx_poly(&|x: f64| x * x * x, Interval::new(-1.0, 1.0), 3).unwrap();
        let m = fit.poly.to_monomial();
        for (got, want) in m.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(fit.residuals_ok(TOL_FIT));
    }

    #[test]
    fn quadratic_on_symmetric_interval() {
        let fit = approx_poly(&|x: f64| x * x, Interval::new(-1.0, 1.0), 1).unwrap();
        assert_relative_eq!(fit.poly.eval(0.3), 1.0 / 3.0, epsilon = 1e-13);
        assert_relative_eq!(fit.poly.eval(-0.9), 1.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn beta_vanishes_on_polynomials() {
        let b = beta(&|x: f64| 1.0 - 2.0 * x, Interval::new(0.0, 0.25), 1).unwrap();
        assert!(b.value < 1e-10);
    }
}
