use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C;

use super::closed::{contour_index, halfplane_closed};
use super::eval::{EvalResult, Method};
use super::index::{pow, MultiIndex};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Piece};
use crate::quadrature::{adaptive_breakpoints, adaptive_to_infinity, Quad, Tolerance};

const TOL: Tolerance = Tolerance::new(1e-15, 1e-13).with_max_intervals(6000);
/// Extra breakpoints along graph arcs so that the first pass resolves the bump.
const GRAPH_PANELS: usize = 32;

/// `T^γ χ_Ω(z)` by boundary quadrature of
/// `(i / 2(γ₂+1)) ∮_{∂Ω} (z-w)^{γ₁} (z̄-w̄)^{γ₂+1} dw`.
///
/// Graph domains combine the half-plane value with the closed difference
/// contour `∂Ω - ℝ`, which is compact because `A` vanishes outside `±4R`.
pub fn t_char_contour(domain: &Domain, gamma: MultiIndex, z: C) -> Result<EvalResult> {
    let d = domain.boundary_distance(z);
    if !(d > 1e-13 * domain.scale()) {
        return Err(Error::NotInterior(format!("{z} is on the boundary")));
    }
    let (g, mirrored) = contour_index(gamma)?;
    let integrand = |w: C| pow(z - w, g.g1) * pow((z - w).conj(), g.g2 + 1);
    let factor = C::new(0.0, 0.5 / (g.g2 + 1) as f64);
    let (mut value, mut error) = match domain {
        Domain::Graph(a) => {
            if z.im.abs() <= 1e-13 {
                return Err(Error::Unsupported("graph contour through a point on the real axis".into()));
            }
            let s = a.support();
            let mut acc = Acc::default();
            for piece in domain.boundary_pieces() {
                match piece {
                    Piece::Ray { .. } => {}
                    p => acc.add(piece_integral(domain, &p, z, &integrand)?),
                }
            }
            // Subtract the real-axis part of ∂H that the rays do not cover.
            acc.sub(piece_integral(domain, &Piece::Segment { a: C::new(-s, 0.0), b: C::new(s, 0.0) }, z, &integrand)?);
            let h = halfplane_closed(FRAC_PI_2, g, z)?;
            (h + factor * acc.value, factor.norm() * acc.error)
        }
        Domain::PolyGraph(p) if p.degree() >= 1 && g.homogeneity() > -3 => {
            return Err(Error::Unsupported("polynomial-graph contour needs homogeneity ≤ -3".into()));
        }
        Domain::HalfPlane { .. } if g.homogeneity() > -2 => {
            return Err(Error::Unsupported(format!("{gamma} is not integrable on a half-plane")));
        }
        _ => {
            let mut acc = Acc::default();
            for p in domain.boundary_pieces() {
                acc.add(piece_integral(domain, &p, z, &integrand)?);
            }
            (factor * acc.value, factor.norm() * acc.error)
        }
    };
    if mirrored {
        value = value.conj();
    }
    error += 8.0 * f64::EPSILON * value.norm();
    EvalResult::new(value, Method::Contour, error)
}

#[derive(Default)]
struct Acc {
    value: C,
    error: f64,
}

impl Acc {
    fn add(&mut self, q: Quad<C>) {
        self.value += q.value;
        self.error += q.error;
    }
    fn sub(&mut self, q: Quad<C>) {
        self.value -= q.value;
        self.error += q.error;
    }
}

fn check(q: Quad<C>, what: &str) -> Result<Quad<C>> {
    // The last clause accepts errors at the roundoff floor of a cancelling sum.
    if q.converged || q.error <= 1e-10 * q.value.norm().max(1.0) || q.error <= 1e4 * f64::EPSILON * q.mass {
        Ok(q)
    } else {
        Err(Error::NonConvergence {
            what: format!("contour quadrature on {what}"),
            estimate: q.error,
        })
    }
}

/// `∫_piece F(w) dw` with breakpoints at the point nearest to `z`.
fn piece_integral(domain: &Domain, piece: &Piece, z: C, f: &impl Fn(C) -> C) -> Result<Quad<C>> {
    match *piece {
        Piece::Circle { center, radius } => {
            let t0 = (z - center).arg();
            let g = |t: f64| {
                let e = C::from_polar(1.0, t);
                f(center + e * radius) * (C::new(0.0, radius) * e)
            };
            check(adaptive_breakpoints(g, &[t0, t0 + PI, t0 + TAU], TOL), "circle")
        }
        Piece::Segment { a, b } => {
            let e = b - a;
            let tp = ((z - a) * e.conj()).re / e.norm_sqr();
            let mut pts = vec![0.0];
            if tp > 0.0 && tp < 1.0 {
                pts.push(tp);
            }
            pts.push(1.0);
            check(adaptive_breakpoints(|t| f(a + e * t) * e, &pts, TOL), "segment")
        }
        Piece::GraphArc { x0, x1 } => {
            let g = |x: f64| {
                let (w, dw) = domain.graph_point(x);
                f(w) * dw
            };
            if x0.is_finite() && x1.is_finite() {
                let mut pts: Vec<f64> = (0..=GRAPH_PANELS)
                    .map(|i| x0 + (x1 - x0) * i as f64 / GRAPH_PANELS as f64)
                    .collect();
                if z.re > x0 && z.re < x1 {
                    pts.push(z.re);
                    pts.sort_by(|a, b| a.total_cmp(b));
                }
                return check(adaptive_breakpoints(g, &pts, TOL), "graph arc");
            }
            // Whole real line: a core interval around z plus two mapped tails.
            let span = 4.0 * (1.0 + z.norm());
            let (lo, hi) = (z.re - span, z.re + span);
            let pts: Vec<f64> = (0..=GRAPH_PANELS)
                .map(|i| lo + (hi - lo) * i as f64 / GRAPH_PANELS as f64)
                .collect();
            let core = check(adaptive_breakpoints(g, &pts, TOL), "graph arc")?;
            let right = check(adaptive_to_infinity(g, hi, TOL), "graph tail")?;
            let left = check(adaptive_to_infinity(|t| g(-t), -lo, TOL), "graph tail")?;
            Ok(Quad {
                value: core.value + right.value + left.value,
                error: core.error + right.error + left.error,
                intervals: core.intervals + right.intervals + left.intervals,
                converged: true,
                mass: core.mass + right.mass + left.mass,
            })
        }
        Piece::Line { point, dir } => {
            // Symmetric pairing about the foot of z keeps homogeneity -2 convergent.
            let foot = point + dir * ((z - point) * dir.conj()).re;
            let g = |t: f64| (f(foot + dir * t) + f(foot - dir * t)) * dir;
            check(adaptive_to_infinity(g, 0.0, TOL), "line")
        }
        Piece::Ray { .. } => Err(Error::Unsupported("contour along a ray".into())),
    }
}
