use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C;

use super::function::DefiningFunction;
use crate::approx::Poly1D;
use crate::quadrature::{bisect, sign_change_roots};

/// Axis-aligned closed rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }
    pub fn square(center: C, half: f64) -> Self {
        Rect::new(center.re - half, center.re + half, center.im - half, center.im + half)
    }
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }
    pub fn is_finite(&self) -> bool {
        [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0
    }
    pub fn contains(&self, z: C) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }
    /// Euclidean distance from `z` to the rectangle (0 inside).
    pub fn distance(&self, z: C) -> f64 {
        let dx = (self.x0 - z.re).max(0.0).max(z.re - self.x1);
        let dy = (self.y0 - z.im).max(0.0).max(z.im - self.y1);
        dx.hypot(dy)
    }
}

/// Analysable planar domains. Boundaries are positively oriented.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    /// `{x + iy : y > A(x)}` with `A` extended by zero outside `[-4R, 4R]`.
    Graph(DefiningFunction),
    Disk { center: C, radius: f64 },
    Square { center: C, half_side: f64 },
    /// `{z : Re(z e^{-iφ}) > 0}`; `φ` is the angle of the inward normal.
    HalfPlane { normal_angle: f64 },
    /// `Ω_P = {x + iy : y > P(x)}` for a polynomial `P`.
    PolyGraph(Poly1D),
}

/// Angular pieces of a circle lying inside a domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Arcs {
    Full,
    Empty,
    /// Disjoint `(θ_start, θ_end)` with `θ_start < θ_end`.
    Intervals(Vec<(f64, f64)>),
}

impl Arcs {
    /// `∫ e^{ikθ} dθ` over the arcs.
    pub fn fourier(&self, k: i64) -> C {
        match self {
            Arcs::Empty => C::new(0.0, 0.0),
            Arcs::Full => {
                if k == 0 {
                    C::new(TAU, 0.0)
                } else {
                    C::new(0.0, 0.0)
                }
            }
            Arcs::Intervals(v) => v
                .iter()
                .map(|&(a, b)| {
                    if k == 0 {
                        C::new(b - a, 0.0)
                    } else {
                        let kf = k as f64;
                        (C::from_polar(1.0, kf * b) - C::from_polar(1.0, kf * a)) / C::new(0.0, kf)
                    }
                })
                .sum(),
        }
    }

    pub fn measure(&self) -> f64 {
        self.fourier(0).re
    }

    pub fn intervals(&self) -> Vec<(f64, f64)> {
        match self {
            Arcs::Empty => vec![],
            Arcs::Full => vec![(0.0, TAU)],
            Arcs::Intervals(v) => v.clone(),
        }
    }
}

/// Oriented boundary piece used by the contour integrators.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    /// Full counter-clockwise circle.
    Circle { center: C, radius: f64 },
    Segment { a: C, b: C },
    /// `x ↦ x + i A(x)` traversed for increasing `x`; bounds may be infinite.
    GraphArc { x0: f64, x1: f64 },
    /// `origin + t·dir`, `t ≥ 0`, traversed away from (`outward`) or towards the origin.
    Ray { origin: C, dir: C, outward: bool },
    /// `point + t·dir`, `t ∈ ℝ`, traversed for increasing `t`.
    Line { point: C, dir: C },
}

const GRAPH_CROSSING_SAMPLES: usize = 2048;
const GEOMETRIC_SAMPLES: usize = 400;

impl Domain {
    pub fn disk(center: C, radius: f64) -> Self {
        Domain::Disk { center, radius }
    }
    pub fn unit_disk() -> Self {
        Domain::disk(C::new(0.0, 0.0), 1.0)
    }
    pub fn square(center: C, half_side: f64) -> Self {
        Domain::Square { center, half_side }
    }
    /// Upper half-plane `{Im z > 0}`.
    pub fn upper_half_plane() -> Self {
        Domain::HalfPlane {
            normal_angle: PI / 2.0,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Disk { .. } | Domain::Square { .. })
    }

    /// Height of the boundary above `x` for domains of the form `{y > h(x)}`.
    pub fn graph_height(&self, x: f64) -> Option<f64> {
        match self {
            Domain::Graph(a) => Some(a.eval(x)),
            Domain::PolyGraph(p) => Some(p.eval(x)),
            Domain::HalfPlane { normal_angle } => {
                let (s, c) = normal_angle.sin_cos();
                (s > 1e-12).then(|| -x * c / s)
            }
            _ => None,
        }
    }

    fn graph_slope(&self, x: f64) -> f64 {
        match self {
            Domain::Graph(a) => a.derivative(x, 1),
            Domain::PolyGraph(p) => p.derivative(x, 1),
            _ => 0.0,
        }
    }

    /// True iff `z` lies in the open domain.
    pub fn contains(&self, z: C) -> bool {
        match self {
            Domain::Graph(a) => z.im > a.eval(z.re),
            Domain::PolyGraph(p) => z.im > p.eval(z.re),
            Domain::Disk { center, radius } => (z - center).norm() < *radius,
            Domain::Square { center, half_side } => {
                let w = z - center;
                w.re.abs() < *half_side && w.im.abs() < *half_side
            }
            Domain::HalfPlane { normal_angle } => halfplane_height(*normal_angle, z) > 0.0,
        }
    }

    /// Vertices of polygonal domains in counter-clockwise order.
    pub fn vertices(&self) -> Option<Vec<C>> {
        match self {
            Domain::Square { center, half_side } => {
                let h = *half_side;
                Some(vec![
                    center + C::new(-h, -h),
                    center + C::new(h, -h),
                    center + C::new(h, h),
                    center + C::new(-h, h),
                ])
            }
            _ => None,
        }
    }

    /// Vertical jumps of a graph domain whose defining function does not
    /// vanish at `±4R`: `(x, height)` pairs.
    fn graph_jumps(&self) -> Vec<(f64, f64)> {
        match self {
            Domain::Graph(a) => {
                let s = a.support();
                [-s, s]
                    .into_iter()
                    .map(|x| (x, a.derivative(x, 0)))
                    .filter(|(_, h)| h.abs() > 0.0)
                    .collect()
            }
            _ => vec![],
        }
    }

    /// Positively oriented boundary pieces.
    pub fn boundary_pieces(&self) -> Vec<Piece> {
        match self {
            Domain::Disk { center, radius } => vec![Piece::Circle {
                center: *center,
                radius: *radius,
            }],
            Domain::Square { .. } => {
                let v = self.vertices().expect("square has vertices");
                (0..4)
                    .map(|i| Piece::Segment {
                        a: v[i],
                        b: v[(i + 1) % 4],
                    })
                    .collect()
            }
            Domain::HalfPlane { normal_angle } => vec![Piece::Line {
                point: C::new(0.0, 0.0),
                dir: C::from_polar(1.0, normal_angle - PI / 2.0),
            }],
            Domain::PolyGraph(_) => vec![Piece::GraphArc {
                x0: f64::NEG_INFINITY,
                x1: f64::INFINITY,
            }],
            Domain::Graph(a) => {
                let s = a.support();
                let (hl, hr) = (a.derivative(-s, 0), a.derivative(s, 0));
                let mut v = vec![Piece::Ray {
                    origin: C::new(-s, 0.0),
                    dir: C::new(-1.0, 0.0),
                    outward: false,
                }];
                if hl != 0.0 {
                    v.push(Piece::Segment {
                        a: C::new(-s, 0.0),
                        b: C::new(-s, hl),
                    });
                }
                v.push(Piece::GraphArc { x0: -s, x1: s });
                if hr != 0.0 {
                    v.push(Piece::Segment {
                        a: C::new(s, hr),
                        b: C::new(s, 0.0),
                    });
                }
                v.push(Piece::Ray {
                    origin: C::new(s, 0.0),
                    dir: C::new(1.0, 0.0),
                    outward: true,
                });
                v
            }
        }
    }

    /// Boundary point and derivative on a graph arc.
    pub fn graph_point(&self, x: f64) -> (C, C) {
        let y = self.graph_height(x).unwrap_or(0.0);
        (C::new(x, y), C::new(1.0, self.graph_slope(x)))
    }

    /// Distance from `z` to `∂Ω`.
    pub fn boundary_distance(&self, z: C) -> f64 {
        match self {
            Domain::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            Domain::Square { .. } => {
                let v = self.vertices().unwrap();
                (0..4)
                    .map(|i| segment_distance(z, v[i], v[(i + 1) % 4]))
                    .fold(f64::INFINITY, f64::min)
            }
            Domain::HalfPlane { normal_angle } => halfplane_height(*normal_angle, z).abs(),
            Domain::Graph(_) | Domain::PolyGraph(_) => {
                let mut d = self.graph_distance(z);
                for (x, h) in self.graph_jumps() {
                    d = d.min(segment_distance(z, C::new(x, 0.0), C::new(x, h)));
                }
                d
            }
        }
    }

    fn graph_distance(&self, z: C) -> f64 {
        let h = |x: f64| self.graph_height(x).unwrap_or(0.0);
        let vertical = (z.im - h(z.re)).abs();
        if vertical == 0.0 {
            return 0.0;
        }
        let lo = z.re - vertical;
        let hi = z.re + vertical;
        let dist = |x: f64| (C::new(x, h(x)) - z).norm();
        let m = 1024;
        let step = (hi - lo) / m as f64;
        let mut best = (vertical, z.re);
        for i in 0..=m {
            let x = lo + step * i as f64;
            let d = dist(x);
            if d < best.0 {
                best = (d, x);
            }
        }
        // Golden-section polish around the best sample.
        let (mut a, mut b) = (best.1 - step, best.1 + step);
        let g = 0.618_033_988_749_894_8;
        for _ in 0..80 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if dist(c) < dist(d) {
                b = d;
            } else {
                a = c;
            }
        }
        best.0.min(dist(0.5 * (a + b)))
    }

    /// Arcs of the circle `|w - z| = r` inside the domain.
    pub fn circle_arcs(&self, z: C, r: f64) -> Arcs {
        if r <= 0.0 {
            return Arcs::Empty;
        }
        match self {
            Domain::Disk { center, radius } => disk_arcs(z, r, *center, *radius),
            Domain::HalfPlane { normal_angle } => {
                let q = -halfplane_height(*normal_angle, z) / r;
                if q < -1.0 {
                    Arcs::Full
                } else if q >= 1.0 {
                    Arcs::Empty
                } else {
                    let a = q.acos();
                    Arcs::Intervals(vec![(normal_angle - a, normal_angle + a)])
                }
            }
            Domain::Square { .. } => {
                let v = self.vertices().unwrap();
                let mut angles = Vec::new();
                for i in 0..4 {
                    circle_segment_angles(z, r, v[i], v[(i + 1) % 4], &mut angles);
                }
                self.arcs_from_crossings(z, r, angles)
            }
            Domain::Graph(_) | Domain::PolyGraph(_) => {
                let mut angles = self.graph_crossing_angles(z, r);
                for (x, h) in self.graph_jumps() {
                    circle_segment_angles(z, r, C::new(x, 0.0), C::new(x, h), &mut angles);
                }
                self.arcs_from_crossings(z, r, angles)
            }
        }
    }

    fn graph_crossing_angles(&self, z: C, r: f64) -> Vec<f64> {
        let h = |x: f64| self.graph_height(x).unwrap_or(0.0);
        let phi = |x: f64| {
            let dx = x - z.re;
            let dy = h(x) - z.im;
            dx * dx + dy * dy - r * r
        };
        let (mut lo, mut hi) = (z.re - r, z.re + r);
        let mut roots = Vec::new();
        if let Domain::Graph(a) = self {
            // Outside the support the boundary is the real axis.
            let s = a.support();
            if z.im.abs() < r {
                let w = (r * r - z.im * z.im).sqrt();
                roots.extend([z.re - w, z.re + w].into_iter().filter(|x| x.abs() > s));
            }
            lo = lo.max(-s);
            hi = hi.min(s);
            if lo >= hi {
                return roots.into_iter().map(|x| (C::new(x, 0.0) - z).arg()).collect();
            }
        }
        // Uniform samples plus a geometric cluster near `z.re`, where the
        // crossings of a steep graph concentrate for large `r`.
        let mut xs: Vec<f64> = (0..=GRAPH_CROSSING_SAMPLES)
            .map(|i| lo + (hi - lo) * i as f64 / GRAPH_CROSSING_SAMPLES as f64)
            .collect();
        for k in 0..GEOMETRIC_SAMPLES {
            let t = r * 2f64.powf(-(k as f64) / 8.0);
            xs.extend([z.re - t, z.re + t].into_iter().filter(|x| *x > lo && *x < hi));
        }
        xs.sort_by(|a, b| a.total_cmp(b));
        xs.dedup();
        let vals: Vec<f64> = xs.iter().map(|&x| phi(x)).collect();
        for i in 0..xs.len() - 1 {
            let (g0, g1) = (vals[i], vals[i + 1]);
            if g0 == 0.0 {
                roots.push(xs[i]);
            } else if g0 * g1 < 0.0 {
                roots.push(bisect(&phi, xs[i], xs[i + 1], g0));
            }
        }
        if vals[vals.len() - 1] == 0.0 {
            roots.push(xs[xs.len() - 1]);
        }
        roots
            .into_iter()
            .map(|x| (C::new(x, h(x)) - z).arg())
            .collect()
    }

    /// Local extrema of `|graph(x) - z|` over the support: tangency radii.
    fn graph_critical_radii(&self, z: C, lo: f64, hi: f64) -> Vec<f64> {
        let m = 4096;
        let d2 = |x: f64| {
            let (p, _) = self.graph_point(x);
            (p - z).norm_sqr()
        };
        let slope = |x: f64| {
            let (p, t) = self.graph_point(x);
            ((p - z) * t.conj()).re
        };
        let roots = sign_change_roots(&slope, lo, hi, m);
        roots.into_iter().map(|x| d2(x).sqrt()).collect()
    }

    /// Turn crossing angles into arcs by testing midpoints.
    fn arcs_from_crossings(&self, z: C, r: f64, mut angles: Vec<f64>) -> Arcs {
        angles.retain(|a| a.is_finite());
        for a in angles.iter_mut() {
            *a = a.rem_euclid(TAU);
        }
        angles.sort_by(|a, b| a.total_cmp(b));
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        if angles.is_empty() {
            return if self.contains(z + C::new(r, 0.0)) {
                Arcs::Full
            } else {
                Arcs::Empty
            };
        }
        let m = angles.len();
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..m {
            let a = angles[i];
            let b = if i + 1 < m { angles[i + 1] } else { angles[0] + TAU };
            if b - a <= 0.0 {
                continue;
            }
            let mid = 0.5 * (a + b);
            if self.contains(z + C::from_polar(r, mid)) {
                match out.last_mut() {
                    Some(last) if (last.1 - a).abs() < 1e-15 => last.1 = b,
                    _ => out.push((a, b)),
                }
            }
        }
        if out.len() >= 2 {
            let first = out[0];
            let last = *out.last().unwrap();
            if (last.1 - (first.0 + TAU)).abs() < 1e-15 {
                out.pop();
                out[0] = (last.0 - TAU, first.1);
            }
        }
        if out.len() == 1 && out[0].1 - out[0].0 >= TAU - 1e-15 {
            return Arcs::Full;
        }
        if out.is_empty() {
            Arcs::Empty
        } else {
            Arcs::Intervals(out)
        }
    }

    /// Radii at which the topology of `circle_arcs(z, ·)` can change.
    pub fn arc_breakpoints(&self, z: C) -> Vec<f64> {
        let mut v = vec![self.boundary_distance(z)];
        match self {
            Domain::Disk { center, radius } => {
                v.push((z - center).norm() + radius);
            }
            Domain::Square { .. } => {
                let verts = self.vertices().unwrap();
                for i in 0..4 {
                    v.push((verts[i] - z).norm());
                    v.push(segment_distance(z, verts[i], verts[(i + 1) % 4]));
                }
            }
            Domain::Graph(a) => {
                let s = a.support();
                for x in [-s, s] {
                    v.push((C::new(x, 0.0) - z).norm());
                    v.push((C::new(x, a.derivative(x, 0)) - z).norm());
                }
                v.extend(self.graph_critical_radii(z, -s, s));
            }
            Domain::PolyGraph(_) => {
                let span = 8.0 * (1.0 + z.norm());
                v.extend(self.graph_critical_radii(z, z.re - span, z.re + span));
            }
            _ => {}
        }
        v.retain(|r| r.is_finite());
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));
        v
    }

    /// Largest distance from `z` to a point of a bounded domain.
    pub fn max_distance(&self, z: C) -> Option<f64> {
        match self {
            Domain::Disk { center, radius } => Some((z - center).norm() + radius),
            Domain::Square { .. } => self
                .vertices()
                .map(|v| v.iter().map(|p| (p - z).norm()).fold(0.0, f64::max)),
            _ => None,
        }
    }

    /// Dense boundary samples (closed curve for bounded domains). For
    /// unbounded domains the samples cover `x ∈ [x_lo, x_hi]` of the
    /// boundary, after rotating half-planes.
    pub fn boundary_polyline(&self, samples: usize, x_lo: f64, x_hi: f64) -> Vec<C> {
        let n = samples.max(8);
        match self {
            Domain::Disk { center, radius } => (0..n)
                .map(|i| center + C::from_polar(*radius, TAU * i as f64 / n as f64))
                .collect(),
            Domain::Square { .. } => {
                let v = self.vertices().unwrap();
                let per = n / 4;
                let mut out = Vec::with_capacity(per * 4);
                for i in 0..4 {
                    let (a, b) = (v[i], v[(i + 1) % 4]);
                    for k in 0..per {
                        out.push(a + (b - a) * (k as f64 / per as f64));
                    }
                }
                out
            }
            Domain::HalfPlane { normal_angle } => {
                let dir = C::from_polar(1.0, normal_angle - PI / 2.0);
                let span = x_lo.abs().max(x_hi.abs()) * 2.0;
                (0..n)
                    .map(|i| dir * (-span + 2.0 * span * i as f64 / (n - 1) as f64))
                    .collect()
            }
            Domain::Graph(_) | Domain::PolyGraph(_) => {
                let mut out: Vec<C> = (0..n)
                    .map(|i| {
                        let x = x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64;
                        self.graph_point(x).0
                    })
                    .collect();
                for (x, h) in self.graph_jumps() {
                    if x >= x_lo && x <= x_hi {
                        for k in 0..=64 {
                            out.push(C::new(x, h * k as f64 / 64.0));
                        }
                    }
                }
                out
            }
        }
    }

    /// A length scale for the domain (radius, half side, or `R`).
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Disk { radius, .. } => *radius,
            Domain::Square { half_side, .. } => *half_side,
            Domain::Graph(a) => a.r(),
            _ => 1.0,
        }
    }
}

/// Signed distance `Re(z e^{-iφ})` with axis-aligned normals kept exact.
fn halfplane_height(phi: f64, z: C) -> f64 {
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    let (s, c) = phi.sin_cos();
    z.re * snap(c) + z.im * snap(s)
}

fn disk_arcs(z: C, r: f64, c: C, rho: f64) -> Arcs {
    let d = (z - c).norm();
    if d + r < rho {
        return Arcs::Full;
    }
    if r >= d + rho || d >= r + rho {
        return Arcs::Empty;
    }
    let cosa = ((r * r + d * d - rho * rho) / (2.0 * r * d)).clamp(-1.0, 1.0);
    let a = cosa.acos();
    let psi = (c - z).arg();
    Arcs::Intervals(vec![(psi - a, psi + a)])
}

/// Angles (seen from `z`) where the circle `|w - z| = r` meets segment `[a, b]`.
fn circle_segment_angles(z: C, r: f64, a: C, b: C, out: &mut Vec<f64>) {
    let d = b - a;
    let f = a - z;
    let qa = d.norm_sqr();
    let qb = 2.0 * (f.re * d.re + f.im * d.im);
    let qc = f.norm_sqr() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 || qa == 0.0 {
        return;
    }
    let sq = disc.sqrt();
    // Numerically stable quadratic roots.
    let q = -0.5 * (qb + qb.signum() * sq);
    let mut ts = vec![];
    if q != 0.0 {
        ts.push(qc / q);
        ts.push(q / qa);
    } else {
        ts.push(0.0);
    }
    for t in ts {
        if (-1e-14..=1.0 + 1e-14).contains(&t) {
            out.push((a + d * t.clamp(0.0, 1.0) - z).arg());
        }
    }
}

pub fn segment_distance(z: C, a: C, b: C) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - z).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn contains_examples() {
        assert!(Domain::unit_disk().contains(C::new(0.0, 0.0)));
        let flat = Domain::Graph(DefiningFunction::polynomial(Poly1D::zero(), 1, 1.0, 1.0).unwrap());
        assert!(!flat.contains(C::new(0.0, -1.0)));
        let parabola = Domain::Graph(
            DefiningFunction::polynomial(Poly1D::monomial(vec![0.0, 0.0, 0.25]), 2, 2.0, 1.0).unwrap(),
        );
        // 0.1 > 0.5^2 / 4 = 0.0625
        assert!(parabola.contains(C::new(0.5, 0.1)));
        assert!(!parabola.contains(C::new(0.5, 0.06)));
    }

    #[test]
    fn boundary_points_are_excluded() {
        assert!(!Domain::unit_disk().contains(C::new(1.0, 0.0)));
        assert!(!Domain::upper_half_plane().contains(C::new(3.0, 0.0)));
        assert!(!Domain::square(C::new(0.0, 0.0), 0.5).contains(C::new(0.5, 0.1)));
    }

    #[test]
    fn disk_arc_length_matches_geometry() {
        let d = Domain::unit_disk();
        // Circle of radius 1 around z = 1 meets the unit disk in an arc of
        // half-angle acos(1/2) measured from the direction of the centre.
        let arcs = d.circle_arcs(C::new(1.0, 0.0), 1.0);
        assert_relative_eq!(arcs.measure(), 2.0 * PI / 3.0, epsilon = 1e-12);
        assert_eq!(d.circle_arcs(C::new(0.2, 0.0), 0.5), Arcs::Full);
        assert_eq!(d.circle_arcs(C::new(3.0, 0.0), 1.5), Arcs::Empty);
    }

    #[test]
    fn square_and_graph_arcs_agree_with_halfplane_limit() {
        let h = Domain::upper_half_plane();
        let flat = Domain::Graph(DefiningFunction::polynomial(Poly1D::zero(), 1, 1.0, 1.0).unwrap());
        let z = C::new(0.3, 0.4);
        for r in [0.2, 0.5, 1.0, 7.0] {
            let a = h.circle_arcs(z, r).fourier(-3);
            let b = flat.circle_arcs(z, r).fourier(-3);
            assert!((a - b).norm() < 1e-10, "r={r}: {a} vs {b}");
        }
        let sq = Domain::square(C::new(0.0, 0.0), 0.5);
        let arcs = sq.circle_arcs(C::new(0.0, 0.0), 0.6);
        // Four arcs, each outside the corners' reach, sum of the in-square parts.
        let expected = 4.0 * 2.0 * (0.5f64 / 0.6).acos();
        assert_relative_eq!(TAU - arcs.measure(), expected, epsilon = 1e-12);
    }

    #[test]
    fn boundary_distance_examples() {
        let sq = Domain::square(C::new(0.0, 0.0), 0.5);
        assert_relative_eq!(sq.boundary_distance(C::new(0.1, 0.2)), 0.3);
        let par = Domain::PolyGraph(Poly1D::monomial(vec![0.0, 0.0, 1.0]));
        // Nearest point of y = x^2 to (0, 1): x^2 = 1/2, distance sqrt(3)/2.
        assert_relative_eq!(par.boundary_distance(C::new(0.0, 1.0)), 3f64.sqrt() / 2.0, epsilon = 1e-9);
    }
}
