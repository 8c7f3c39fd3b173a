use serde::{Deserialize, Serialize};

use crate::approx::Poly1D;
use crate::error::{invalid, Error, Result};

/// Natural cubic spline through uniformly spaced samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x0: f64, dx: f64, y: Vec<f64>) -> Result<Self> {
        if y.len() < 4 {
            return Err(invalid("spline needs at least four samples"));
        }
        if dx <= 0.0 || !dx.is_finite() {
            return Err(invalid("spline spacing must be positive"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spline samples".into()));
        }
        let n = y.len();
        // Thomas algorithm for the interior second derivatives.
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            let rhs = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (dx * dx);
            let denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
        let mut m = vec![0.0; n];
        for i in (1..n - 1).rev() {
            m[i] = d[i] - c[i] * m[i + 1];
        }
        Ok(CubicSpline { x0, dx, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.dx * (self.y.len() - 1) as f64)
    }

    /// k-th derivative (k ≤ 3) at `x`; `x` is clamped to the sampled range.
    pub fn eval_derivative(&self, x: f64, k: usize) -> f64 {
        let n = self.y.len();
        let s = ((x - self.x0) / self.dx).clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        let h = self.dx;
        let (y0, y1, m0, m1) = (self.y[i], self.y[i + 1], self.m[i], self.m[i + 1]);
        let a = 1.0 - t;
        match k {
            0 => {
                a * y0 + t * y1 + h * h / 6.0 * ((a * a * a - a) * m0 + (t * t * t - t) * m1)
            }
            1 => {
                (y1 - y0) / h + h / 6.0 * (-(3.0 * a * a - 1.0) * m0 + (3.0 * t * t - 1.0) * m1)
            }
            2 => a * m0 + t * m1,
            3 => (m1 - m0) / h,
            _ => 0.0,
        }
    }
}

/// Representation of a boundary defining function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FunctionRepr {
    Polynomial(Poly1D),
    Sampled(CubicSpline),
}

/// Defining function `A` of a graph domain `{y > A(x)}`.
///
/// Invariants checked at construction: `A(0) = 0`, `A'(0) = 0` when `n ≥ 2`,
/// and `‖A^{(j)}‖_∞ ≤ δ / R^{j-1}` on `[-4R, 4R]` for `1 ≤ j ≤ n`.
/// Outside `[-4R, 4R]` the function is extended by zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefiningFunction {
    repr: FunctionRepr,
    n: usize,
    delta: f64,
    r: f64,
}

const ORIGIN_TOL: f64 = 1e-12;
const BOUND_SLACK: f64 = 1e-9;
const CERT_SAMPLES: usize = 8193;

impl DefiningFunction {
    pub fn polynomial(p: Poly1D, n: usize, delta: f64, r: f64) -> Result<Self> {
        Self::validated(FunctionRepr::Polynomial(p), n, delta, r)
    }

    /// Spline through `samples` values of `f` on `[-4R, 4R]`.
    pub fn from_fn(
        f: impl Fn(f64) -> f64,
        samples: usize,
        n: usize,
        delta: f64,
        r: f64,
    ) -> Result<Self> {
        if samples < 4 {
            return Err(invalid("need at least four samples"));
        }
        let x0 = -4.0 * r;
        let dx = 8.0 * r / (samples - 1) as f64;
        let y = (0..samples).map(|i| f(x0 + dx * i as f64)).collect();
        Self::validated(FunctionRepr::Sampled(CubicSpline::new(x0, dx, y)?), n, delta, r)
    }

    pub fn sampled(spline: CubicSpline, n: usize, delta: f64, r: f64) -> Result<Self> {
        Self::validated(FunctionRepr::Sampled(spline), n, delta, r)
    }

    /// Like [`DefiningFunction::from_fn`] but with `δ` set to the smallest
    /// certified value `max_j sup|A^{(j)}| R^{j-1}` (plus a small margin).
    pub fn from_fn_certified(
        f: impl Fn(f64) -> f64,
        samples: usize,
        n: usize,
        r: f64,
    ) -> Result<Self> {
        let x0 = -4.0 * r;
        let dx = 8.0 * r / (samples.max(4) - 1) as f64;
        let y = (0..samples.max(4)).map(|i| f(x0 + dx * i as f64)).collect();
        let repr = FunctionRepr::Sampled(CubicSpline::new(x0, dx, y)?);
        Self::certified(repr, n, r)
    }

    /// Polynomial defining function with the smallest certified `δ`.
    pub fn polynomial_certified(p: Poly1D, n: usize, r: f64) -> Result<Self> {
        Self::certified(FunctionRepr::Polynomial(p), n, r)
    }

    fn certified(repr: FunctionRepr, n: usize, r: f64) -> Result<Self> {
        let probe = DefiningFunction {
            repr,
            n: n.max(1),
            delta: 1.0,
            r,
        };
        let delta = (1..=probe.n)
            .map(|j| probe.sup_derivative(j) * r.powi(j as i32 - 1))
            .fold(0.0, f64::max)
            * (1.0 + 1e-6);
        Self::validated(probe.repr, n, delta.max(1e-300), r)
    }

    /// Smooth bump `A(x) = ε x² φ(x / 4R)` with `φ(t) = exp(1 - 1/(1 - t²))`,
    /// so `A(0) = A'(0) = 0` and `A` vanishes with all derivatives at `±4R`.
    pub fn bump(eps: f64, n: usize, r: f64) -> Result<Self> {
        let s = 4.0 * r;
        Self::from_fn_certified(
            |x| {
                let t = x / s;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    eps * x * x * (1.0 - 1.0 / (1.0 - t * t)).exp()
                }
            },
            8193,
            n,
            r,
        )
    }

    fn validated(repr: FunctionRepr, n: usize, delta: f64, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("degree bound n must be at least 1"));
        }
        if !(delta > 0.0 && r > 0.0 && delta.is_finite() && r.is_finite()) {
            return Err(invalid("delta and R must be positive"));
        }
        let a = DefiningFunction { repr, n, delta, r };
        if a.raw(0.0, 0).abs() > ORIGIN_TOL {
            return Err(Error::Certification(format!(
                "A(0) = {:e}, expected 0",
                a.raw(0.0, 0)
            )));
        }
        if n >= 2 && a.raw(0.0, 1).abs() > ORIGIN_TOL {
            return Err(Error::Certification(format!(
                "A'(0) = {:e}, expected 0 for n >= 2",
                a.raw(0.0, 1)
            )));
        }
        for j in 1..=n {
            let bound = delta / r.powi(j as i32 - 1);
            let sup = a.sup_derivative(j);
            if sup > bound * (1.0 + BOUND_SLACK) {
                return Err(Error::Certification(format!(
                    "sup |A^({j})| = {sup:.6e} exceeds delta/R^{} = {bound:.6e}",
                    j - 1
                )));
            }
        }
        Ok(a)
    }

    /// Largest sampled `|A^{(j)}|` on `[-4R, 4R]`.
    pub fn sup_derivative(&self, j: usize) -> f64 {
        let lo = -4.0 * self.r;
        let step = 8.0 * self.r / (CERT_SAMPLES - 1) as f64;
        (0..CERT_SAMPLES)
            .map(|i| self.raw(lo + step * i as f64, j).abs())
            .fold(0.0, f64::max)
    }

    fn raw(&self, x: f64, k: usize) -> f64 {
        match &self.repr {
            FunctionRepr::Polynomial(p) => p.derivative(x, k),
            FunctionRepr::Sampled(s) => s.eval_derivative(x, k),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn repr(&self) -> &FunctionRepr {
        &self.repr
    }

    /// Half-width of the support convention, `4R`.
    pub fn support(&self) -> f64 {
        4.0 * self.r
    }

    /// `A(x)`, zero outside `[-4R, 4R]`.
    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    /// `A^{(k)}(x)`, zero outside `[-4R, 4R]`.
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        if x.abs() > self.support() {
            0.0
        } else {
            self.raw(x, k)
        }
    }
}
