//! One-dimensional quadrature kernels shared by every module.
//!
//! Gauss–Legendre rules of arbitrary order, a globally adaptive
//! Gauss–Kronrod (7/15) integrator, endpoint-regularising substitutions
//! and an integrator for `|g|` that splits at sign changes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values a quadrature rule can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<T: QuadValue>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> T {
        self.mapped(a, b)
            .fold(T::zero(), |acc, (x, w)| acc + f(x) * w)
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Absolute/relative stopping rule for the adaptive integrators.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 4000,
        }
    }

    pub const fn with_max_intervals(mut self, max_intervals: usize) -> Self {
        self.max_intervals = max_intervals;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-13, 1e-11)
    }
}

/// Outcome of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quad<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
    /// `Σ |panel value|`, the cancellation scale for roundoff.
    pub mass: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, |Kronrod - Gauss|).
pub fn gk15<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    for j in 0..3 {
        let jj = 2 * j + 1;
        let x = h * XGK[jj];
        let s = f(c - x) + f(c + x);
        resg = resg + s * WG[j];
        resk = resk + s * WGK[jj];
    }
    for j in 0..4 {
        let jj = 2 * j;
        let x = h * XGK[jj];
        let s = f(c - x) + f(c + x);
        resk = resk + s * WGK[jj];
    }
    let k = resk * h;
    let g = resg * h;
    (k, (k - g).magnitude())
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration over `[a, b]`.
pub fn adaptive<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: Tolerance) -> Quad<T> {
    adaptive_breakpoints(f, &[a, b], tol)
}

/// Adaptive integration over consecutive breakpoints `pts[0] < pts[1] < ...`.
pub fn adaptive_breakpoints<T: QuadValue>(
    f: impl Fn(f64) -> T,
    pts: &[f64],
    tol: Tolerance,
) -> Quad<T> {
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut err = 0.0;
    for w in pts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(&f, w[0], w[1]);
        total = total + v;
        err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }
    while err > tol.target(total.magnitude()) && heap.len() < tol.max_intervals {
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        total = total - worst.value + v1 + v2;
        err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: m,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: m,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let mut value = T::zero();
    let mut error = 0.0;
    let mut mass = 0.0;
    let intervals = heap.len();
    for p in heap {
        mass += p.value.magnitude();
        value = value + p.value;
        error += p.error;
    }
    Quad {
        value,
        error,
        intervals,
        mass,
        converged: error <= tol.target(value.magnitude()),
    }
}

/// Integrate over `[a, b]` after the substitution `x = a + (b-a)(1-cos(pi u))/2`,
/// which turns square-root endpoint behaviour into a smooth integrand.
pub fn adaptive_sqrt_ends<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Quad<T> {
    let len = b - a;
    adaptive(
        |u| {
            let x = a + 0.5 * len * (1.0 - (PI * u).cos());
            f(x) * (0.5 * len * PI * (PI * u).sin())
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integrate over `[a, +inf)` via `x = a + t/(1-t)`.
pub fn adaptive_to_infinity<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, tol: Tolerance) -> Quad<T> {
    adaptive(
        |t| {
            if t >= 1.0 {
                return T::zero();
            }
            let s = 1.0 - t;
            f(a + t / s) * (1.0 / (s * s))
        },
        0.0,
        1.0,
        tol,
    )
}

/// Globally adaptive composite Gauss–Legendre rule of fixed order. Each
/// panel's error is the gap between the rule on the panel and on its halves;
/// the worst panel is bisected until the summed error meets `tol` or
/// `max_panels` is reached.
pub fn adaptive_gauss<T: QuadValue>(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> (T, f64) {
    let panel = |a: f64, b: f64| {
        let m = 0.5 * (a + b);
        let whole = rule.integrate(f, a, b);
        let split = rule.integrate(f, a, m) + rule.integrate(f, m, b);
        let floor = 1e-15 * split.magnitude();
        let error = ((split - whole).magnitude() - floor).max(0.0);
        Panel {
            a,
            b,
            value: split,
            error,
        }
    };
    let mut heap = BinaryHeap::new();
    let first = panel(a, b);
    let mut err = first.error;
    heap.push(first);
    while err > tol && heap.len() < max_panels.max(1) {
        let Some(worst) = heap.pop() else { break };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        let (l, r) = (panel(worst.a, m), panel(m, worst.b));
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    let mut value = T::zero();
    let mut error = 0.0;
    for p in heap {
        value = value + p.value;
        error += p.error;
    }
    (value, error)
}

/// Roots of a real function on `[a, b]` located by sampling and bisection.
pub fn sign_change_roots(g: &impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let step = (b - a) / samples as f64;
    let mut x0 = a;
    let mut g0 = g(a);
    for i in 1..=samples {
        let x1 = if i == samples { b } else { a + step * i as f64 };
        let g1 = g(x1);
        if g0 == 0.0 {
            if x0 > a {
                roots.push(x0);
            }
        } else if g0 * g1 < 0.0 {
            roots.push(bisect(g, x0, x1, g0));
        }
        x0 = x1;
        g0 = g1;
    }
    roots
}

/// Bisection on a bracket with `g(lo)` of sign `g_lo`.
pub fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let s = g_lo.signum();
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == s {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// `∫_a^b |g|`, splitting at sign changes of `g` so each piece is smooth.
pub fn integrate_abs(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Quad<f64> {
    let mut pts = vec![a];
    pts.extend(sign_change_roots(&g, a, b, 256));
    pts.push(b);
    adaptive_breakpoints(|x| g(x).abs(), &pts, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        for n in 1..12 {
            let rule = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let got = rule.integrate(|x| x.powi(deg as i32 - 1), 0.0, 1.0);
            assert_relative_eq!(got, 1.0 / deg as f64, epsilon = 1e-13);
            let sum: f64 = rule.weights.iter().sum();
            assert_relative_eq!(sum, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let q = adaptive(|x: f64| x.sqrt(), 0.0, 1.0, Tolerance::new(1e-12, 1e-12));
        assert!(q.converged);
        assert_relative_eq!(q.value, 2.0 / 3.0, epsilon = 1e-11);
        let q = adaptive_sqrt_ends(|x: f64| (1.0 - x * x).sqrt(), -1.0, 1.0, Tolerance::default());
        assert_relative_eq!(q.value, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn infinite_tail() {
        let q = adaptive_to_infinity(|x: f64| 1.0 / (1.0 + x * x), 0.0, Tolerance::default());
        assert_relative_eq!(q.value, PI / 2.0, epsilon = 1e-11);
    }

    #[test]
    fn abs_integral_splits_at_roots() {
        let q = integrate_abs(|x: f64| x * x - 0.25, -1.0, 1.0, Tolerance::default());
        // 2 * (∫_0^{1/2} (1/4 - x^2) + ∫_{1/2}^1 (x^2 - 1/4))
        let exact = 2.0 * ((0.125 - 1.0 / 24.0) + (1.0 / 3.0 - 0.25 - (1.0 / 24.0 - 0.125)));
        assert_relative_eq!(q.value, exact, epsilon = 1e-12);
    }

    #[test]
    fn complex_values_accumulate() {
        let q = adaptive(
            |t: f64| Complex64::from_polar(1.0, t),
            0.0,
            PI,
            Tolerance::default(),
        );
        assert!((q.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }
}
