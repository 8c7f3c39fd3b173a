use std::f64::consts::TAU;

use num_complex::Complex64 as C;

use super::eval::{EvalResult, Method};
use super::grid::Density;
use super::index::MultiIndex;
use super::pv::t_char_pv;
use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;
use crate::quadrature::{adaptive, adaptive_breakpoints, Tolerance};

const RADIAL: Tolerance = Tolerance::new(1e-13, 1e-9).with_max_intervals(2000);
const ANGULAR: Tolerance = Tolerance::new(1e-14, 1e-10).with_max_intervals(400);

/// `T^γ_Ω f(z) = ∫_Ω (z-w)^γ f(w) dm(w)` for a locally integrable kernel
/// (`γ₁ + γ₂ ≥ -1`) on a bounded domain, by polar quadrature about `z`.
pub fn t_f(domain: &Domain, gamma: MultiIndex, f: &impl Density, z: C) -> Result<EvalResult> {
    let h = gamma.homogeneity();
    if h <= -2 {
        return Err(Error::Unsupported(format!(
            "{gamma} is singular; use the principal-value evaluators"
        )));
    }
    let Some(rmax) = domain.max_distance(z) else {
        return Err(Error::Unsupported("t_f needs a bounded domain".into()));
    };
    if let Some(c) = f.constant() {
        return Ok(t_char_pv(domain, gamma, z, &[])?.scale(c));
    }
    let k = (gamma.g1 - gamma.g2) as f64;
    let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
    let ring = |r: f64| -> C {
        let mut acc = C::new(0.0, 0.0);
        for (a, b) in domain.circle_arcs(z, r).intervals() {
            let g = |t: f64| f.eval(z + C::from_polar(r, t)) * C::from_polar(1.0, k * t);
            acc += adaptive(g, a, b, ANGULAR).value;
        }
        acc * (sign * r.powi(h + 1))
    };
    let mut pts = vec![0.0];
    pts.extend(domain.arc_breakpoints(z).into_iter().filter(|r| *r > 0.0 && *r < rmax));
    pts.push(rmax);
    let q = adaptive_breakpoints(ring, &pts, RADIAL);
    if !q.converged && q.error > 1e-6 * q.value.norm().max(1e-6) {
        return Err(Error::NonConvergence {
            what: "density quadrature".into(),
            estimate: q.error,
        });
    }
    EvalResult::new(q.value, Method::PvQuadrature, q.error)
}

/// Principal value of `∫_ℂ (z-w)^γ f(w) dm(w)` for a smooth density vanishing
/// outside `B(z, r_max)`. The angular integrals use the periodic trapezoid
/// rule, doubled until stable; for `γ₁ ≠ γ₂` the Fourier coefficient of a
/// smooth `f` vanishes like `r^{|γ₁-γ₂|}` and removes the singularity.
pub fn t_f_plane(gamma: MultiIndex, f: &impl Density, z: C, r_max: f64) -> Result<EvalResult> {
    if !(r_max > 0.0) {
        return Err(invalid("r_max must be positive"));
    }
    let h = gamma.homogeneity();
    let kk = gamma.g1 - gamma.g2;
    if h + 1 + kk.abs() < 0 || (kk == 0 && h <= -2) {
        return Err(Error::Unsupported(format!("{gamma} is not summable against smooth densities")));
    }
    let k = kk as f64;
    let sign = if h % 2 == 0 { 1.0 } else { -1.0 };
    let trapezoid = |r: f64, m: usize| -> C {
        let dt = TAU / m as f64;
        (0..m)
            .map(|i| {
                let t = i as f64 * dt;
                f.eval(z + C::from_polar(r, t)) * C::from_polar(1.0, k * t)
            })
            .sum::<C>()
            * dt
    };
    let ring = |r: f64| -> C {
        let mut m = 64;
        let mut prev = trapezoid(r, m);
        while m < 1 << 14 {
            m *= 2;
            let next = trapezoid(r, m);
            let done = (next - prev).norm() <= 1e-13 * next.norm().max(1e-300) + 1e-16;
            prev = next;
            if done {
                break;
            }
        }
        prev * (sign * r.powi(h + 1))
    };
    let q = adaptive(ring, 0.0, r_max, RADIAL);
    if !q.converged && q.error > 1e-6 * q.value.norm().max(1e-6) {
        return Err(Error::NonConvergence {
            what: "plane density quadrature".into(),
            estimate: q.error,
        });
    }
    EvalResult::new(q.value, Method::PvQuadrature, q.error)
}
