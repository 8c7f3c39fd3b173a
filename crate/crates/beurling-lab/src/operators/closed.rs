//! Exact values of `T^γ χ_Ω` for disks, polygons and half-planes.
//!
//! All three reduce `T^γ χ_Ω(z) = (i / 2g) ∮_{∂Ω} (z-w)^{γ₁} (z̄-w̄)^g dw`,
//! `g = γ₂ + 1 ≥ 1`, to finite sums: residues on circles, antiderivatives on
//! segments, a half-circle at infinity on lines. Indices with `γ₂ < 0 ≤ γ₁`
//! go through `T^γ χ = conj(T^{(γ₂,γ₁)} χ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C;

use super::eval::{EvalResult, Method};
use super::index::{pow, MultiIndex};
use crate::error::{Error, Result};
use crate::geometry::Domain;

/// `γ` or its swap with `γ₂ ≥ 0`, and whether a conjugation is needed.
pub(crate) fn contour_index(gamma: MultiIndex) -> Result<(MultiIndex, bool)> {
    if gamma.g2 >= 0 {
        Ok((gamma, false))
    } else if gamma.g1 >= 0 {
        Ok((gamma.swap(), true))
    } else {
        Err(Error::Unsupported(format!(
            "index {gamma} has no contour representation"
        )))
    }
}

fn with_mirror(gamma: MultiIndex, f: impl Fn(MultiIndex) -> Result<C>) -> Result<C> {
    let (g, mirrored) = contour_index(gamma)?;
    let v = f(g)?;
    Ok(if mirrored { v.conj() } else { v })
}

fn binomial(n: i32, k: i32) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `x(x-1)⋯(x-k+1)/k!` for any integer `x`.
fn gen_binomial(x: i32, k: i32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i) as f64 / (i + 1) as f64)
}

const BOUNDARY_GAP: f64 = 1e-13;

/// `T^γ χ_{D(c,ρ)}(z)` for `z ∉ ∂D`.
pub fn disk_closed(center: C, radius: f64, gamma: MultiIndex, z: C) -> Result<C> {
    let zeta = z - center;
    let d = zeta.norm();
    if (d - radius).abs() <= BOUNDARY_GAP * radius {
        return Err(Error::NotInterior(format!("{z} on the circle")));
    }
    with_mirror(gamma, |g| {
        let gg = g.g2 + 1;
        let gf = gg as f64;
        if g.g1 < 0 && d < radius {
            // Both poles inside: minus the residue at infinity.
            return Ok(if g.g1 == -1 {
                PI * pow(zeta.conj(), gg) / gf
            } else {
                C::new(0.0, 0.0)
            });
        }
        // Only the pole at the centre is enclosed.
        let r2 = C::new(-radius * radius, 0.0);
        let zb = zeta.conj();
        let s: C = (0..gg)
            .map(|j| {
                let i = gg - 1 - j;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                binomial(gg, j) * gen_binomial(g.g1, i) * sign
                    * pow(zb, j)
                    * pow(r2, gg - j)
                    * pow(zeta, g.g1 - i)
            })
            .sum();
        Ok(-s * (PI / gf))
    })
}

/// `∫_a^b (z-w)^q dw`.
fn power_segment(z: C, a: C, b: C, q: i32) -> C {
    let (ua, ub) = (z - a, z - b);
    if q == -1 {
        (ua / ub).ln()
    } else {
        (pow(ua, q + 1) - pow(ub, q + 1)) / (q + 1) as f64
    }
}

/// `T^γ χ_P(z)` for the polygon with counter-clockwise `vertices`.
pub fn polygon_closed(vertices: &[C], gamma: MultiIndex, z: C) -> Result<C> {
    let m = vertices.len();
    if m < 3 {
        return Err(crate::error::invalid("polygon needs three vertices"));
    }
    let scale = vertices.iter().map(|v| (v - z).norm()).fold(0.0, f64::max);
    for i in 0..m {
        let d = crate::geometry::segment_distance(z, vertices[i], vertices[(i + 1) % m]);
        if d <= BOUNDARY_GAP * scale {
            return Err(Error::NotInterior(format!("{z} on the polygon boundary")));
        }
    }
    with_mirror(gamma, |g| {
        let gg = g.g2 + 1;
        let mut total = C::new(0.0, 0.0);
        for i in 0..m {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            let e = b - a;
            // Along the edge z̄ - w̄ = α + σ (z - w).
            let sigma = e.conj() / e;
            let alpha = (z - a).conj() - sigma * (z - a);
            for k in 0..=gg {
                total += binomial(gg, k)
                    * pow(alpha, gg - k)
                    * pow(sigma, k)
                    * power_segment(z, a, b, g.g1 + k);
            }
        }
        Ok(total * C::new(0.0, 0.5 / gg as f64))
    })
}

/// `T^γ χ_H(z)` for `H = {Re(w e^{-iφ}) > 0}`, `z ∉ ∂H`. Homogeneity must
/// be at most `-2` for the integral to converge.
pub fn halfplane_closed(normal_angle: f64, gamma: MultiIndex, z: C) -> Result<C> {
    let psi = normal_angle - FRAC_PI_2;
    let local = z * C::from_polar(1.0, -psi);
    if local.im.abs() <= BOUNDARY_GAP * local.norm().max(1.0) {
        return Err(Error::NotInterior(format!("{z} on the line")));
    }
    let h = gamma.homogeneity();
    if h > -2 {
        return Err(Error::Unsupported(format!("{gamma} is not integrable on a half-plane")));
    }
    let turn = C::from_polar(1.0, psi * (gamma.g1 - gamma.g2) as f64);
    let v = with_mirror(gamma, |g| {
        if h <= -3 {
            return Ok(C::new(0.0, 0.0));
        }
        // Homogeneity -2 with γ₂ ≥ 0 is γ = (-m-1, m-1); the half-circle at
        // infinity contributes ±iπ.
        let m = (g.g2 + 1) as f64;
        let sign = if local.im > 0.0 { 1.0 } else { -1.0 };
        Ok(C::new(sign * PI / (2.0 * m), 0.0))
    })?;
    Ok(turn * v)
}

/// Closed-form evaluation where one is available.
pub fn t_char_closed(domain: &Domain, gamma: MultiIndex, z: C) -> Result<EvalResult> {
    let v = match domain {
        Domain::Disk { center, radius } => disk_closed(*center, *radius, gamma, z)?,
        Domain::Square { .. } => polygon_closed(&domain.vertices().expect("square"), gamma, z)?,
        Domain::HalfPlane { normal_angle } => halfplane_closed(*normal_angle, gamma, z)?,
        _ => return Err(Error::Unsupported("no closed form for graph domains".into())),
    };
    let err = 64.0 * f64::EPSILON * v.norm().max(1.0);
    EvalResult::new(v, Method::ClosedForm, err)
}
