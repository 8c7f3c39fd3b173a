//! JSON description of a [`Domain`].
//!
//! ```json
//! { "variant": "graph", "shape": { "kind": "bump", "eps": 0.1 }, "n": 2, "R": 1.0 }
//! { "variant": "graph", "shape": { "kind": "polynomial", "coeffs": [0, 0, 0.25] }, "n": 2, "delta": 2.0, "R": 1.0 }
//! { "variant": "disk", "center": [0, 0], "radius": 1.0 }
//! { "variant": "square", "center": [0, 0], "half_side": 0.5 }
//! { "variant": "halfplane", "normal_angle": 1.5707963267948966 }
//! { "variant": "polygraph", "coeffs": [0, 0, 0.1] }
//! ```
//!
//! Graph domains take `delta` when given (it is then certified) and otherwise
//! the smallest certified value. Polynomial coefficients are monomial.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::domain::Domain;
use super::function::{CubicSpline, DefiningFunction};
use crate::approx::Poly1D;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphShape {
    Polynomial { coeffs: Vec<f64> },
    /// `ε x² exp(1 - 1/(1 - (x/4R)²))`.
    Bump { eps: f64 },
    /// Uniform samples `y[i] = A(x0 + i dx)`.
    Samples { x0: f64, dx: f64, y: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum DomainSpec {
    Graph {
        shape: GraphShape,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(rename = "R")]
        r: f64,
    },
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Square {
        center: [f64; 2],
        half_side: f64,
    },
    Halfplane {
        normal_angle: f64,
    },
    Polygraph {
        coeffs: Vec<f64>,
    },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Domain> {
        Ok(match self {
            DomainSpec::Graph { shape, n, delta, r } => {
                let (n, r) = (*n, *r);
                let a = match (shape, delta) {
                    (GraphShape::Bump { eps }, None) => DefiningFunction::bump(*eps, n, r)?,
                    (GraphShape::Bump { eps }, Some(d)) => {
                        let b = DefiningFunction::bump(*eps, n, r)?;
                        DefiningFunction::sampled(spline_of(&b)?, n, *d, r)?
                    }
                    (GraphShape::Polynomial { coeffs }, None) => {
                        DefiningFunction::polynomial_certified(Poly1D::monomial(coeffs.clone()), n, r)?
                    }
                    (GraphShape::Polynomial { coeffs }, Some(d)) => {
                        DefiningFunction::polynomial(Poly1D::monomial(coeffs.clone()), n, *d, r)?
                    }
                    (GraphShape::Samples { x0, dx, y }, d) => {
                        let s = CubicSpline::new(*x0, *dx, y.clone())?;
                        match d {
                            Some(d) => DefiningFunction::sampled(s, n, *d, r)?,
                            None => {
                                let probe = DefiningFunction::from_fn_certified(
                                    |x| s.eval_derivative(x, 0),
                                    y.len().max(4),
                                    n,
                                    r,
                                )?;
                                DefiningFunction::sampled(s, n, probe.delta(), r)?
                            }
                        }
                    }
                };
                Domain::Graph(a)
            }
            DomainSpec::Disk { center, radius } => Domain::disk(C::new(center[0], center[1]), *radius),
            DomainSpec::Square { center, half_side } => {
                Domain::square(C::new(center[0], center[1]), *half_side)
            }
            DomainSpec::Halfplane { normal_angle } => Domain::HalfPlane {
                normal_angle: *normal_angle,
            },
            DomainSpec::Polygraph { coeffs } => Domain::PolyGraph(Poly1D::monomial(coeffs.clone())),
        })
    }
}

fn spline_of(a: &DefiningFunction) -> Result<CubicSpline> {
    match a.repr() {
        super::function::FunctionRepr::Sampled(s) => Ok(s.clone()),
        super::function::FunctionRepr::Polynomial(p) => {
            let s = a.support();
            let m = 8193;
            let dx = 2.0 * s / (m - 1) as f64;
            CubicSpline::new(-s, dx, (0..m).map(|i| p.eval(-s + dx * i as f64)).collect())
        }
    }
}
