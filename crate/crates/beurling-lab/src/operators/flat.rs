use num_complex::Complex64 as C;
use serde::Serialize;

use super::contour::t_char_contour;
use super::eval::EvalResult;
use super::index::MultiIndex;
use crate::approx::Poly1D;
use crate::error::{invalid, Result};
use crate::geometry::Domain;

/// Flatness data for `P = Σ a_j x^j` of degree `≤ n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FlatnessBounds {
    pub n: usize,
    pub delta: f64,
    #[serde(rename = "R")]
    pub r: f64,
}

impl FlatnessBounds {
    /// `|a_0| ≤ 3^n δ ρ²/R`, `|a_1| ≤ 3^{n-1} δ ρ/R`, `|a_j| ≤ 3^{n-j} δ/(j! R^{j-1})`.
    pub fn limits(&self, rho_int: f64) -> Vec<f64> {
        let (n, d, r) = (self.n as i32, self.delta, self.r);
        let mut fact = 1.0;
        (0..=self.n)
            .map(|j| match j {
                0 => 3f64.powi(n) * d * rho_int * rho_int / r,
                1 => 3f64.powi(n - 1) * d * rho_int / r,
                _ => {
                    fact *= j as f64;
                    3f64.powi(n - j as i32) * d / (fact * r.powi(j as i32 - 1))
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatPolyReport {
    pub result: EvalResult,
    pub j1: i32,
    pub j2: i32,
    /// `|value| ρ_int^n / (1 + 16 √ρ_ext)^{j₂}`.
    pub ratio: f64,
    pub coeffs: Vec<f64>,
    pub limits: Vec<f64>,
}

/// `∫_{Ω_P ∖ B(z,ε)} (z̄-w̄)^{j₂} / (z-w)^{j₁} dm(w)` over `Ω_P = {y > P(x)}`
/// with `j₁ = j₂ + n + 2`. For `ε < dist(z, ∂Ω_P)` the truncation does not
/// depend on `ε`, so the value is the contour evaluation of `T^{(-j₁, j₂)}`.
/// Degree `n ≤ 1` uses `j₁ = j₂ + 3` and needs no flatness.
pub fn flat_poly_bound_probe(
    p: &Poly1D,
    bounds: FlatnessBounds,
    j2: i32,
    z: C,
    rho_int: f64,
    rho_ext: f64,
) -> Result<FlatPolyReport> {
    if j2 < 0 {
        return Err(invalid("j₂ must be non-negative"));
    }
    if !(rho_int > 0.0 && rho_ext > rho_int) {
        return Err(invalid("need 0 < ρ_int < ρ_ext"));
    }
    let coeffs = p.to_monomial();
    if coeffs.iter().skip(bounds.n + 1).any(|c| *c != 0.0) {
        return Err(invalid(format!("P has degree above n = {}", bounds.n)));
    }
    let n = bounds.n.max(1);
    let limits = if bounds.n >= 2 { bounds.limits(rho_int) } else { vec![] };
    for (j, lim) in limits.iter().enumerate() {
        let a = coeffs.get(j).copied().unwrap_or(0.0);
        if a.abs() > lim * (1.0 + 1e-12) {
            return Err(invalid(format!("|a_{j}| = {} exceeds the flatness limit {lim}", a.abs())));
        }
    }
    if z.re.abs() >= rho_int || z.im.abs() >= rho_int {
        return Err(invalid("z must lie in Q(0, ρ_int)"));
    }
    let domain = Domain::PolyGraph(p.clone());
    if !domain.contains(z) {
        return Err(invalid("z must lie in Ω_P"));
    }
    let j1 = j2 + n as i32 + 2;
    let result = t_char_contour(&domain, MultiIndex::new(-j1, j2), z)?;
    let ratio = result.value.norm() * rho_int.powi(n as i32) / (1.0 + 16.0 * rho_ext.sqrt()).powi(j2);
    Ok(FlatPolyReport {
        result,
        j1,
        j2,
        ratio,
        coeffs,
        limits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_boundary_gives_zero() {
        let p = Poly1D::monomial(vec![0.01, 0.2]);
        let b = FlatnessBounds { n: 1, delta: 1.0, r: 1.0 };
        for j2 in 0..4 {
            let r = flat_poly_bound_probe(&p, b, j2, C::new(0.01, 0.05), 0.1, 0.2).unwrap();
            assert!(r.result.value.norm() < 1e-6, "{}", r.result.value);
        }
    }

    #[test]
    fn rejects_steep_coefficients() {
        let p = Poly1D::monomial(vec![0.0, 0.0, 5.0]);
        let b = FlatnessBounds { n: 2, delta: 1.0, r: 1.0 };
        assert!(flat_poly_bound_probe(&p, b, 0, C::new(0.0, 0.05), 0.1, 0.2).is_err());
    }
}
