use num_complex::Complex64 as C;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PvQuadrature,
    Contour,
    ClosedForm,
    Fft,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::PvQuadrature => "pv-quadrature",
            Method::Contour => "contour",
            Method::ClosedForm => "closed-form",
            Method::Fft => "fft",
        }
    }
}

/// A point value with the method that produced it and an absolute error
/// estimate (the gap between two quadrature resolutions).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: C,
    pub method: Method,
    pub error: f64,
}

impl EvalResult {
    pub fn new(value: C, method: Method, error: f64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite() && error.is_finite()) {
            return Err(Error::NonFinite(format!("{} evaluation", method.tag())));
        }
        Ok(EvalResult { value, method, error })
    }

    pub fn scale(self, c: C) -> Self {
        EvalResult {
            value: self.value * c,
            error: self.error * c.norm(),
            ..self
        }
    }

    pub fn conj(self) -> Self {
        EvalResult {
            value: self.value.conj(),
            ..self
        }
    }
}
