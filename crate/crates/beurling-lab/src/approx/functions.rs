use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Closed-form test functions addressed by id, plus sampled data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum TestFunction {
    /// Monomial coefficients.
    Polynomial { coeffs: Vec<f64> },
    /// `|x - c|^α`.
    PowerAbs { center: f64, alpha: f64 },
    /// `sin(2π k x + φ)`.
    Sine { freq: f64, phase: f64 },
    Exp { rate: f64 },
    Gaussian { center: f64, sigma: f64 },
    /// `1 / (1 + a x²)`.
    Runge { a: f64 },
    /// `amp · exp(1 - 1/(1 - ((x - c)/w)²))` on `|x - c| < w`.
    Bump { center: f64, width: f64, amp: f64 },
    /// Smooth bump times `sin(2π k x)`.
    SineBump { freq: f64, width: f64 },
    /// Piecewise-linear interpolation of sorted samples, constant outside.
    Samples { x: Vec<f64>, y: Vec<f64> },
}

fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

impl TestFunction {
    pub fn samples(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(invalid("samples need matching x and y with at least two points"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("sample abscissae must be strictly increasing"));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite sample"));
        }
        Ok(TestFunction::Samples { x, y })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |a, &c| a * x + c),
            TestFunction::PowerAbs { center, alpha } => (x - center).abs().powf(*alpha),
            TestFunction::Sine { freq, phase } => (2.0 * PI * freq * x + phase).sin(),
            TestFunction::Exp { rate } => (rate * x).exp(),
            TestFunction::Gaussian { center, sigma } => (-0.5 * ((x - center) / sigma).powi(2)).exp(),
            TestFunction::Runge { a } => 1.0 / (1.0 + a * x * x),
            TestFunction::Bump { center, width, amp } => amp * bump((x - center) / width),
            TestFunction::SineBump { freq, width } => (2.0 * PI * freq * x).sin() * bump(x / width),
            TestFunction::Samples { x: xs, y } => {
                let n = xs.len();
                if x <= xs[0] {
                    return y[0];
                }
                if x >= xs[n - 1] {
                    return y[n - 1];
                }
                let i = xs.partition_point(|&v| v <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                y[i] + t * (y[i + 1] - y[i])
            }
        }
    }

    /// Plain-`fn` view for the generic estimators.
    pub fn as_fn(&self) -> impl Fn(f64) -> f64 + Sync + '_ {
        move |x| self.eval(x)
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, TestFunction::Polynomial { .. })
    }

    /// A short label for reports.
    pub fn label(&self) -> String {
        match self {
            TestFunction::Polynomial { coeffs } => format!("poly{:?}", coeffs),
            TestFunction::PowerAbs { center, alpha } => format!("|x-{center}|^{alpha}"),
            TestFunction::Sine { freq, phase } => format!("sin(2pi*{freq}x+{phase})"),
            TestFunction::Exp { rate } => format!("exp({rate}x)"),
            TestFunction::Gaussian { center, sigma } => format!("gauss({center},{sigma})"),
            TestFunction::Runge { a } => format!("runge({a})"),
            TestFunction::Bump { center, width, amp } => format!("bump({center},{width},{amp})"),
            TestFunction::SineBump { freq, width } => format!("sinbump({freq},{width})"),
            TestFunction::Samples { x, .. } => format!("samples[{}]", x.len()),
        }
    }
}

/// Twenty continuous non-polynomial functions for the residual sign-change check.
pub fn sign_change_corpus() -> Vec<TestFunction> {
    use TestFunction::*;
    let mut v = vec![
        PowerAbs { center: 0.0, alpha: 1.0 },
        PowerAbs { center: 0.2, alpha: 0.5 },
        PowerAbs { center: -0.3, alpha: 1.5 },
        PowerAbs { center: 0.1, alpha: 2.5 },
        Sine { freq: 0.5, phase: 0.0 },
        Sine { freq: 1.0, phase: 0.3 },
        Sine { freq: 2.0, phase: 1.0 },
        Exp { rate: 1.0 },
        Exp { rate: -2.0 },
        Exp { rate: 3.0 },
        Gaussian { center: 0.0, sigma: 0.3 },
        Gaussian { center: 0.4, sigma: 0.5 },
        Runge { a: 25.0 },
        Runge { a: 4.0 },
        Bump { center: 0.0, width: 0.8, amp: 1.0 },
        Bump { center: 0.3, width: 1.2, amp: -2.0 },
        SineBump { freq: 1.0, width: 0.9 },
        SineBump { freq: 1.5, width: 1.5 },
    ];
    let xs: Vec<f64> = (0..=16).map(|i| -1.0 + i as f64 / 8.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| (3.0 * x).cos() + 0.2 * x).collect();
    v.push(TestFunction::samples(xs.clone(), ys).expect("valid samples"));
    let ys: Vec<f64> = xs.iter().map(|x: &f64| x.abs().sqrt()).collect();
    v.push(TestFunction::samples(xs, ys).expect("valid samples"));
    v
}

/// Ten smooth compactly supported functions for the Besov cross-check.
pub fn besov_corpus() -> Vec<TestFunction> {
    use TestFunction::*;
    vec![
        Bump { center: 0.0, width: 0.5, amp: 1.0 },
        Bump { center: 0.1, width: 0.7, amp: 0.5 },
        Bump { center: -0.2, width: 0.4, amp: 2.0 },
        Bump { center: 0.3, width: 0.6, amp: -1.0 },
        Bump { center: 0.0, width: 0.9, amp: 1.5 },
        SineBump { freq: 1.0, width: 0.5 },
        SineBump { freq: 1.5, width: 0.6 },
        SineBump { freq: 2.0, width: 0.7 },
        SineBump { freq: 0.5, width: 0.8 },
        SineBump { freq: 3.0, width: 0.5 },
    ]
}
