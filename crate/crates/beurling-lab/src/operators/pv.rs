use std::f64::consts::TAU;

use num_complex::Complex64 as C;

use super::eval::{EvalResult, Method};
use super::index::MultiIndex;
use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;
use crate::quadrature::{adaptive, adaptive_sqrt_ends, Tolerance};

const TOL: Tolerance = Tolerance::new(1e-15, 1e-12).with_max_intervals(4000);

/// `∫_{Ω ∖ B_ε(z)} (z-w)^γ dm(w)` in polar coordinates about `z`. With
/// `w = z + r e^{iθ}` the kernel is `(-1)^{γ₁+γ₂} r^{γ₁+γ₂} e^{i(γ₁-γ₂)θ}`, so
/// each ring contributes `r^{h+1}` times a Fourier coefficient of the arcs of
/// `Ω`. Rings inside the largest disk about `z` in `Ω` cancel exactly unless
/// `γ₁ = γ₂`, so the radial integral starts at `dist(z, ∂Ω)`.
pub struct PolarRings<'a> {
    domain: &'a Domain,
    z: C,
    k: i64,
    h: i32,
    sign: f64,
    inside: bool,
    dist: f64,
}

impl<'a> PolarRings<'a> {
    pub fn new(domain: &'a Domain, gamma: MultiIndex, z: C) -> Result<Self> {
        let dist = domain.boundary_distance(z);
        if !(dist > 1e-13 * domain.scale()) {
            return Err(Error::NotInterior(format!("{z} is on the boundary")));
        }
        let h = gamma.homogeneity();
        Ok(PolarRings {
            domain,
            z,
            k: (gamma.g1 - gamma.g2) as i64,
            h,
            sign: if h % 2 == 0 { 1.0 } else { -1.0 },
            inside: domain.contains(z),
            dist,
        })
    }

    /// Radial density `F(r)`: the integral of the kernel over the circle of
    /// radius `r` inside `Ω`, with the polar weight `r`.
    pub fn ring(&self, r: f64) -> C {
        let arcs = self.domain.circle_arcs(self.z, r);
        arcs.fourier(self.k) * (self.sign * r.powi(self.h + 1))
    }

    /// Contribution of `B(z, ε)` for `ε ≤ dist`, in closed form.
    fn core(&self, eps: f64) -> Result<C> {
        if !self.inside || self.k != 0 {
            return Ok(C::new(0.0, 0.0));
        }
        if self.h + 2 <= 0 {
            return Err(Error::Unsupported(
                "γ₁ = γ₂ ≤ -1: the principal value diverges".into(),
            ));
        }
        let e = (self.h + 2) as f64;
        Ok(C::new(self.sign * TAU * eps.powf(e) / e, 0.0))
    }

    /// `∫_a^∞ F(r) dr` for `a ≥ 0` together with an error estimate.
    fn outer(&self, a: f64) -> Result<(C, f64)> {
        let mut pts: Vec<f64> = self
            .domain
            .arc_breakpoints(self.z)
            .into_iter()
            .filter(|&r| r > a)
            .collect();
        pts.insert(0, a);
        let bounded = self.domain.max_distance(self.z);
        let far = match bounded {
            Some(m) => m,
            None => 2.0 * pts.last().copied().unwrap_or(1.0).max(a) + 4.0 * self.domain.scale(),
        };
        if far > *pts.last().unwrap() {
            pts.push(far);
        }
        let mut value = C::new(0.0, 0.0);
        let mut error = 0.0;
        let mut ok = true;
        for w in pts.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let q = adaptive_sqrt_ends(|r| self.ring(r), w[0], w[1], TOL);
            value += q.value;
            error += q.error;
            ok &= q.converged || q.error <= 1e-10 * q.value.norm().max(1e-3);
        }
        if bounded.is_none() {
            // r = far / u maps [far, ∞) onto (0, 1].
            let q = adaptive(
                |u: f64| {
                    if u <= 0.0 {
                        C::new(0.0, 0.0)
                    } else {
                        self.ring(far / u) * (far / (u * u))
                    }
                },
                0.0,
                1.0,
                TOL,
            );
            value += q.value;
            error += q.error;
            ok &= q.converged || q.error <= 1e-10 * q.value.norm().max(1e-3);
        }
        if !ok {
            return Err(Error::NonConvergence {
                what: "radial principal-value integral".into(),
                estimate: error,
            });
        }
        Ok((value, error))
    }

    /// `∫_{Ω ∖ B_ε(z)}` for a single `ε`.
    pub fn truncated(&self, eps: f64) -> Result<C> {
        if eps < self.dist && self.inside {
            let (v, _) = self.outer(self.dist)?;
            Ok(v + self.core(self.dist)? - self.core(eps)?)
        } else {
            Ok(self.outer(eps.max(0.0))?.0)
        }
    }
}

/// Principal value of `T^γ χ_Ω(z)`.
///
/// The truncations over `eps_schedule` (decreasing, possibly empty) are
/// compared with the `ε → 0` limit, which is available exactly because the
/// disk around `z` contributes only through the `γ₁ = γ₂` core term; the
/// gaps must shrink along the schedule. The error is the quadrature estimate.
pub fn t_char_pv(domain: &Domain, gamma: MultiIndex, z: C, eps_schedule: &[f64]) -> Result<EvalResult> {
    if eps_schedule.windows(2).any(|w| !(w[1] < w[0])) || eps_schedule.iter().any(|e| !(*e > 0.0)) {
        return Err(invalid("eps schedule must be positive and strictly decreasing"));
    }
    let rings = PolarRings::new(domain, gamma, z)?;
    let (outer, qerr) = rings.outer(rings.dist)?;
    let limit = outer + rings.core(rings.dist)?;
    let mut gaps = Vec::with_capacity(eps_schedule.len());
    for &e in eps_schedule {
        gaps.push((rings.truncated(e)? - limit).norm());
    }
    // Truncation error must shrink along the schedule once ε < dist.
    for w in gaps.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::NonConvergence {
                what: "principal-value extrapolation".into(),
                estimate: w[1],
            });
        }
    }
    EvalResult::new(limit, Method::PvQuadrature, qerr)
}
