use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::Window;
use crate::quadrature::{adaptive, Tolerance};

/// Unit normals `N(x) = (A'(x), -1)/√(1 + A'(x)²)` and arc length
/// `τ(x) = ∫_0^x √(1 + A'²)` on an increasing `x`-grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalField {
    pub x: Vec<f64>,
    pub normal: Vec<[f64; 2]>,
    pub tau: Vec<f64>,
}

const TAU_TOL: Tolerance = Tolerance::new(1e-15, 1e-13).with_max_intervals(2000);

pub fn unit_normal(slope: f64) -> [f64; 2] {
    let s = (1.0 + slope * slope).sqrt();
    [slope / s, -1.0 / s]
}

/// [`normal_field`] for a chart given by its derivative `A'`.
pub fn normal_field_of(a_prime: impl Fn(f64) -> f64 + Copy, xs: &[f64]) -> Result<NormalField> {
    if xs.is_empty() || xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("x-grid must be non-empty and strictly increasing"));
    }
    let speed = move |x: f64| (1.0 + a_prime(x).powi(2)).sqrt();
    let mut normal = Vec::with_capacity(xs.len());
    let mut tau = Vec::with_capacity(xs.len());
    for &x in xs {
        let u = a_prime(x);
        if !u.is_finite() {
            return Err(Error::NonFinite(format!("A' at x = {x}")));
        }
        normal.push(unit_normal(u));
        let q = adaptive(speed, x.min(0.0), x.max(0.0), TAU_TOL).value;
        tau.push(if x < 0.0 { -q } else { q });
    }
    Ok(NormalField { x: xs.to_vec(), normal, tau })
}

pub fn normal_field(window: &Window, xs: &[f64]) -> Result<NormalField> {
    normal_field_of(|x| window.derivative(x, 1), xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn examples() {
        let xs = [-1.0, -0.25, 0.0, 0.5, 2.0];
        let flat = normal_field_of(|_| 0.0, &xs).unwrap();
        assert!(flat.normal.iter().all(|n| *n == [0.0, -1.0]));
        assert!(flat.tau.iter().zip(&xs).all(|(t, x)| (t - x).abs() < 1e-14));
        let line = normal_field_of(|_| 1.0, &xs).unwrap();
        for (n, (t, x)) in line.normal.iter().zip(line.tau.iter().zip(&xs)) {
            assert!((n[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (n[1] + FRAC_1_SQRT_2).abs() < 1e-15);
            assert!((t - 2f64.sqrt() * x).abs() < 1e-13);
        }
        let par = normal_field_of(|x| x, &[1.0]).unwrap();
        assert!((par.normal[0][0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(normal_field_of(|_| 0.0, &[1.0, 1.0]).is_err());
    }
}
