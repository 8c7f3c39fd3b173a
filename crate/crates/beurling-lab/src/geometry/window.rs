use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use num_complex::Complex64 as C;
use serde::Serialize;

use super::domain::Domain;
use super::function::DefiningFunction;
use crate::error::{invalid, Error, Result};

/// Boundary of `τ(Ω)` inside `Q(0, R)` as a graph `y = A_k(x)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LocalFunction {
    /// The domain's own defining function (identity chart).
    Defining(DefiningFunction),
    /// `ρ - √(ρ² - x²)`.
    CircleCap { radius: f64 },
    /// `|x + s| - |s|`: a right-angle corner seen from a 45° frame.
    Corner { shift: f64 },
    Flat,
}

impl LocalFunction {
    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        match self {
            LocalFunction::Defining(a) => a.derivative(x, k),
            LocalFunction::CircleCap { radius } => circle_cap_derivative(*radius, x, k),
            LocalFunction::Corner { shift } => match k {
                0 => (x + shift).abs() - shift.abs(),
                1 => (x + shift).signum(),
                _ => 0.0,
            },
            LocalFunction::Flat => 0.0,
        }
    }
}

/// Derivatives of `ρ - √(ρ² - x²)` up to order 4.
fn circle_cap_derivative(rho: f64, x: f64, k: usize) -> f64 {
    let q = rho * rho - x * x;
    let s = q.sqrt();
    match k {
        0 => rho - s,
        1 => x / s,
        2 => rho * rho / (q * s),
        3 => 3.0 * rho * rho * x / (q * q * s),
        4 => 3.0 * rho * rho * (rho * rho + 4.0 * x * x) / (q * q * q * s),
        _ => f64::NAN,
    }
}

/// A boundary chart: `τ(w) = e^{-iθ}(w - z_k)` maps `z_k ∈ ∂Ω` to 0 and the
/// domain locally above the graph of `A_k` in `Q(0, R)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Window {
    pub center: C,
    pub radius: f64,
    pub angle: f64,
    pub local: LocalFunction,
    pub n: usize,
    pub delta: f64,
}

impl Window {
    pub fn to_local(&self, w: C) -> C {
        (w - self.center) * C::from_polar(1.0, -self.angle)
    }

    pub fn to_global(&self, p: C) -> C {
        self.center + p * C::from_polar(1.0, self.angle)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.local.eval(x)
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        self.local.derivative(x, k)
    }

    /// `max_j sup_{|x| ≤ R} |A_k^{(j)}| R^{j-1}` from `samples` points.
    pub fn measured_delta(&self, samples: usize) -> f64 {
        let r = self.radius;
        let m = samples.max(2);
        (1..=self.n)
            .map(|j| {
                (0..m)
                    .map(|i| {
                        let x = -r + 2.0 * r * i as f64 / (m - 1) as f64;
                        self.derivative(x, j).abs()
                    })
                    .fold(0.0, f64::max)
                    * r.powi(j as i32 - 1)
            })
            .fold(0.0, f64::max)
    }

    /// Check `τ(Ω) ∩ Q(0,R) = {y > A_k(x)}` on a `samples²` grid. Returns the
    /// number of mismatches away from a thin band around the graph.
    pub fn verify(&self, domain: &Domain, samples: usize) -> usize {
        let r = self.radius;
        let m = samples.max(2);
        let band = 1e-9 * r.max(1.0);
        let mut bad = 0;
        for i in 0..m {
            let x = -r + 2.0 * r * (i as f64 + 0.5) / m as f64;
            let a = self.eval(x);
            for j in 0..m {
                let y = -r + 2.0 * r * (j as f64 + 0.5) / m as f64;
                if (y - a).abs() <= band {
                    continue;
                }
                let inside = domain.contains(self.to_global(C::new(x, y)));
                if inside != (y > a) {
                    bad += 1;
                }
            }
        }
        bad
    }
}

const COVER_FRACTION: f64 = 0.9;
const VERIFY_SAMPLES: usize = 64;
const DELTA_SAMPLES: usize = 2049;

/// `R`-windows whose `(1/20)`-dilates cover `∂Ω` and whose `(1/40)`-dilates
/// are pairwise disjoint; every chart is certified against `δ` for degree `n`.
pub fn window_decomposition(domain: &Domain, r: f64, n: usize, delta: f64) -> Result<Vec<Window>> {
    if !(r > 0.0) {
        return Err(invalid("window radius must be positive"));
    }
    let windows = match domain {
        Domain::Graph(a) => vec![Window {
            center: C::new(0.0, 0.0),
            radius: r,
            angle: 0.0,
            local: LocalFunction::Defining(a.clone()),
            n,
            delta,
        }],
        Domain::HalfPlane { normal_angle } => vec![Window {
            center: C::new(0.0, 0.0),
            radius: r,
            angle: normal_angle - FRAC_PI_2,
            local: LocalFunction::Flat,
            n,
            delta,
        }],
        Domain::Disk { center, radius } => {
            if 4.0 * r >= *radius {
                return Err(invalid("window radius must stay below a quarter of the disk radius"));
            }
            let spacing = COVER_FRACTION * r / 10.0;
            let m = (TAU * radius / spacing).ceil() as usize;
            (0..m)
                .map(|k| {
                    let psi = TAU * k as f64 / m as f64;
                    Window {
                        center: center + C::from_polar(*radius, psi),
                        radius: r,
                        // Inward normal -e^{iψ} becomes +i.
                        angle: psi + FRAC_PI_2,
                        local: LocalFunction::CircleCap { radius: *radius },
                        n,
                        delta,
                    }
                })
                .collect()
        }
        Domain::Square { center, half_side } => square_windows(*center, *half_side, r, n, delta)?,
        Domain::PolyGraph(_) => {
            return Err(Error::Unsupported(
                "window decomposition of polynomial-graph domains".into(),
            ))
        }
    };
    for w in &windows {
        let measured = w.measured_delta(DELTA_SAMPLES);
        if !(measured <= delta * (1.0 + 1e-9)) {
            return Err(Error::Certification(format!(
                "window at {} needs delta {measured:.4} > {delta}",
                w.center
            )));
        }
        let bad = w.verify(domain, VERIFY_SAMPLES);
        if bad > 0 {
            return Err(Error::Certification(format!(
                "window at {} is not a graph chart ({bad} mismatched samples)",
                w.center
            )));
        }
    }
    Ok(windows)
}

fn square_windows(center: C, h: f64, r: f64, n: usize, delta: f64) -> Result<Vec<Window>> {
    if 2.0 * r >= h {
        return Err(invalid("window radius must stay below half the square's half side"));
    }
    let side = 2.0 * h;
    let spacing = COVER_FRACTION * r / 10.0;
    let per_edge = (side / spacing).ceil() as usize;
    let verts = [
        center + C::new(-h, -h),
        center + C::new(h, -h),
        center + C::new(h, h),
        center + C::new(-h, h),
    ];
    let mut out = Vec::with_capacity(4 * per_edge);
    for e in 0..4 {
        let a = verts[e];
        let dir = (verts[(e + 1) % 4] - a) / side;
        // Inward normal of a counter-clockwise edge is i·dir.
        let edge_angle = dir.arg();
        for k in 0..per_edge {
            let t = side * k as f64 / per_edge as f64;
            let z = a + dir * t;
            let (to_start, to_end) = (t, side - t);
            let w = if to_start < r || to_end < r {
                // Frame whose +i axis bisects the corner's interior angle.
                let (v, bis) = if to_start <= to_end {
                    (a, edge_angle + FRAC_PI_4)
                } else {
                    (a + dir * side, edge_angle + 3.0 * FRAC_PI_4)
                };
                let angle = bis - FRAC_PI_2;
                let local_v = (v - z) * C::from_polar(1.0, -angle);
                Window {
                    center: z,
                    radius: r,
                    angle,
                    local: LocalFunction::Corner { shift: -local_v.re },
                    n,
                    delta,
                }
            } else {
                Window {
                    center: z,
                    radius: r,
                    angle: edge_angle,
                    local: LocalFunction::Flat,
                    n,
                    delta,
                }
            };
            out.push(w);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_windows_cover_and_separate() {
        let ws = window_decomposition(&Domain::unit_disk(), 0.2, 2, 1.0).unwrap();
        let m = ws.len() as f64;
        assert!(m * 0.2 / 10.0 >= TAU);
        assert!(m * 0.2 / 20.0 <= TAU * 1.2);
        for w in &ws {
            assert!(Domain::unit_disk().boundary_distance(w.center) < 1e-12);
        }
    }

    #[test]
    fn square_corner_needs_unit_delta() {
        let sq = Domain::square(C::new(0.0, 0.0), 0.5);
        assert!(window_decomposition(&sq, 0.05, 1, 1.0).is_ok());
        assert!(window_decomposition(&sq, 0.05, 1, 0.5).is_err());
    }
}
