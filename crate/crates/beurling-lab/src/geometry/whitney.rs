//! Whitney coverings by maximal dyadic cubes.
//!
//! A cube `Q ⊂ Ω` is accepted when `C_W ℓ(Q) ≤ dist(Q, ∂Ω) ≤ 4 C_W ℓ(Q)`;
//! otherwise it is split. The maximal cube of a point has a parent with
//! `dist < 2 C_W ℓ`, hence `dist(Q) ≤ (2 C_W + √2) ℓ ≤ 4 C_W ℓ` for
//! `C_W ≥ 1`. A balancing pass then splits cubes that touch a neighbour at
//! least four times smaller, which keeps both bounds for `C_W ≥ 1`.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64 as C;
use serde::Serialize;

use super::domain::{Domain, Rect};
use super::dyadic::DyadicCube;
use crate::error::{invalid, Result};

/// Nearest-sample queries against a dense boundary sample.
#[derive(Clone, Debug)]
pub struct PointCloud {
    cell: f64,
    origin: C,
    buckets: HashMap<(i64, i64), Vec<C>>,
    spacing: f64,
    ring_max: i64,
}

impl PointCloud {
    pub fn new(points: &[C], spacing: f64) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let extent = (x1 - x0).max(y1 - y0).max(1e-12);
        let cell = (extent / 256.0).max(spacing);
        let origin = C::new(x0, y0);
        let mut buckets: HashMap<(i64, i64), Vec<C>> = HashMap::new();
        for &p in points {
            let key = Self::key_of(p, origin, cell);
            buckets.entry(key).or_default().push(p);
        }
        PointCloud {
            cell,
            origin,
            buckets,
            spacing,
            ring_max: (extent / cell).ceil() as i64 + 2,
        }
    }

    fn key_of(p: C, origin: C, cell: f64) -> (i64, i64) {
        (
            ((p.re - origin.re) / cell).floor() as i64,
            ((p.im - origin.im) / cell).floor() as i64,
        )
    }

    /// Maximal gap between consecutive samples.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Distance from a closed rectangle to the nearest sample.
    pub fn rect_distance(&self, r: &Rect) -> f64 {
        let lo = Self::key_of(C::new(r.x0, r.y0), self.origin, self.cell);
        let hi = Self::key_of(C::new(r.x1, r.y1), self.origin, self.cell);
        let mut best = f64::INFINITY;
        for ring in 0..=self.ring_max.max(1) {
            // Samples in ring `ring + 1` are at least `ring * cell` away.
            if best <= (ring - 1).max(0) as f64 * self.cell {
                break;
            }
            let (xa, xb, ya, yb) = (lo.0 - ring, hi.0 + ring, lo.1 - ring, hi.1 + ring);
            let mut visit = |kx: i64, ky: i64| {
                if let Some(v) = self.buckets.get(&(kx, ky)) {
                    for p in v {
                        best = best.min(r.distance(*p));
                    }
                }
            };
            if ring == 0 {
                for kx in xa..=xb {
                    for ky in ya..=yb {
                        visit(kx, ky);
                    }
                }
                continue;
            }
            for kx in xa..=xb {
                visit(kx, ya);
                visit(kx, yb);
            }
            for ky in ya + 1..yb {
                visit(xa, ky);
                visit(xb, ky);
            }
        }
        best
    }
}

/// Default number of boundary samples for distance queries.
pub const BOUNDARY_SAMPLES: usize = 1 << 14;

/// Output of [`build_whitney`].
#[derive(Clone, Debug, Serialize)]
pub struct WhitneyCovering {
    pub cubes: Vec<DyadicCube>,
    pub c_w: f64,
    pub min_scale: f64,
    pub bounding_box: Rect,
    /// Area of omitted cubes below `min_scale` that meet the domain.
    pub collar_area: f64,
    /// Cubes created by the 2:1 balancing pass.
    pub balance_splits: usize,
    /// Boundary sample spacing used for `dist(Q, ∂Ω)`.
    pub sample_spacing: f64,
    #[serde(skip)]
    distances: Vec<f64>,
}

/// Result of the exhaustive invariant check.
#[derive(Clone, Debug, Serialize)]
pub struct WhitneyCheck {
    pub cubes: usize,
    pub distance_failures: usize,
    pub neighbour_failures: usize,
    pub overlap_20q: usize,
    pub overlap_samples: usize,
}

impl WhitneyCheck {
    pub fn passed(&self, k_overlap: usize) -> bool {
        self.distance_failures == 0 && self.neighbour_failures == 0 && self.overlap_20q <= k_overlap
    }
}

/// Options for [`build_whitney_with`].
#[derive(Clone, Copy, Debug)]
pub struct WhitneyOptions {
    pub boundary_samples: usize,
    pub balance: bool,
}

impl Default for WhitneyOptions {
    fn default() -> Self {
        WhitneyOptions {
            boundary_samples: BOUNDARY_SAMPLES,
            balance: true,
        }
    }
}

pub fn build_whitney(domain: &Domain, c_w: f64, min_scale: f64, bbox: Rect) -> Result<WhitneyCovering> {
    build_whitney_with(domain, c_w, min_scale, bbox, WhitneyOptions::default())
}

/// Dense boundary sample for distance queries inside `bbox`.
pub fn boundary_cloud(domain: &Domain, bbox: &Rect, samples: usize) -> PointCloud {
    let pad = bbox.width().max(bbox.height());
    let (lo, hi) = (bbox.x0 - pad, bbox.x1 + pad);
    let pts = domain.boundary_polyline(samples, lo, hi);
    let spacing = pts
        .windows(2)
        .map(|w| (w[1] - w[0]).norm())
        .filter(|d| *d < pad)
        .fold(0.0, f64::max);
    PointCloud::new(&pts, spacing)
}

pub fn build_whitney_with(
    domain: &Domain,
    c_w: f64,
    min_scale: f64,
    bbox: Rect,
    opts: WhitneyOptions,
) -> Result<WhitneyCovering> {
    if !bbox.is_finite() {
        return Err(invalid("Whitney bounding box must be finite and non-degenerate"));
    }
    if !(c_w >= 1.0 && c_w.is_finite()) {
        return Err(invalid("Whitney constant C_W must be at least 1"));
    }
    if !(min_scale > 0.0) {
        return Err(invalid("min_scale must be positive"));
    }
    let cloud = boundary_cloud(domain, &bbox, opts.boundary_samples);
    let top_level = -((0.5 * bbox.width().min(bbox.height())).log2().floor() as i32);
    let min_level = (-(min_scale.log2())).floor() as i32;

    // Level-`top_level` cubes meeting the box; partial ones are refined.
    let outer = Rect::new(bbox.x0 - 1e-300, bbox.x1, bbox.y0 - 1e-300, bbox.y1);
    let mut stack: Vec<DyadicCube> = {
        let l = (2.0f64).powi(-top_level);
        let (i0, i1) = ((outer.x0 / l).floor() as i64, (outer.x1 / l).ceil() as i64);
        let (j0, j1) = ((outer.y0 / l).floor() as i64, (outer.y1 / l).ceil() as i64);
        (i0..i1)
            .flat_map(|i| (j0..j1).map(move |j| DyadicCube::new(top_level, i, j)))
            .collect()
    };
    let mut accepted: Vec<(DyadicCube, f64)> = Vec::new();
    let mut collar = 0.0;
    while let Some(q) = stack.pop() {
        let r = q.rect();
        let within = r.x0 >= bbox.x0 && r.x1 <= bbox.x1 && r.y0 >= bbox.y0 && r.y1 <= bbox.y1;
        if !within {
            let overlaps = r.x0 < bbox.x1 && r.x1 > bbox.x0 && r.y0 < bbox.y1 && r.y1 > bbox.y0;
            if overlaps && q.level + 1 <= min_level {
                stack.extend(q.children());
            }
            continue;
        }
        let d = cloud.rect_distance(&r);
        let inside = domain.contains(q.center());
        let l = q.side();
        if d > 0.0 && !inside {
            continue;
        }
        if inside && d >= c_w * l && d <= 4.0 * c_w * l {
            accepted.push((q, d));
            continue;
        }
        if q.level + 1 > min_level {
            collar += r.area();
            continue;
        }
        stack.extend(q.children());
    }
    if accepted.is_empty() {
        return Err(invalid(format!(
            "no cube satisfies the Whitney inequality with C_W = {c_w} in the box"
        )));
    }

    let mut balance_splits = 0;
    if opts.balance {
        let mut set: HashSet<DyadicCube> = accepted.iter().map(|(q, _)| *q).collect();
        loop {
            let index = CubeIndex::new(set.iter().copied());
            let to_split: Vec<DyadicCube> = set
                .iter()
                .filter(|q| {
                    neighbour_probes(q)
                        .into_iter()
                        .filter_map(|p| index.locate(p))
                        .any(|n| n.level >= q.level + 2)
                })
                .copied()
                .collect();
            if to_split.is_empty() {
                break;
            }
            for q in to_split {
                set.remove(&q);
                set.extend(q.children());
                balance_splits += 3;
            }
        }
        accepted = set
            .into_iter()
            .map(|q| {
                let d = cloud.rect_distance(&q.rect());
                (q, d)
            })
            .collect();
    }
    accepted.sort_by(|a, b| a.0.cmp(&b.0));
    let (cubes, distances) = accepted.into_iter().unzip();
    Ok(WhitneyCovering {
        cubes,
        c_w,
        min_scale,
        bounding_box: bbox,
        collar_area: collar,
        balance_splits,
        sample_spacing: cloud.spacing(),
        distances,
    })
}

/// Points just outside each side and corner of `q`, dense enough to hit
/// every touching cube of side `≤ ℓ(q)/4`.
fn neighbour_probes(q: &DyadicCube) -> Vec<C> {
    let r = q.rect();
    let l = q.side();
    let eps = l * 1e-7;
    let mut v = Vec::with_capacity(36);
    for k in 0..8 {
        let t = (k as f64 + 0.5) / 8.0 * l;
        v.push(C::new(r.x0 + t, r.y0 - eps));
        v.push(C::new(r.x0 + t, r.y1 + eps));
        v.push(C::new(r.x0 - eps, r.y0 + t));
        v.push(C::new(r.x1 + eps, r.y0 + t));
    }
    v.push(C::new(r.x0 - eps, r.y0 - eps));
    v.push(C::new(r.x1 + eps, r.y0 - eps));
    v.push(C::new(r.x1 + eps, r.y1 + eps));
    v.push(C::new(r.x0 - eps, r.y1 + eps));
    v
}

/// Point location in a set of disjoint dyadic cubes.
struct CubeIndex {
    set: HashSet<DyadicCube>,
    levels: (i32, i32),
}

impl CubeIndex {
    fn new(cubes: impl Iterator<Item = DyadicCube>) -> Self {
        let set: HashSet<DyadicCube> = cubes.collect();
        let lo = set.iter().map(|q| q.level).min().unwrap_or(0);
        let hi = set.iter().map(|q| q.level).max().unwrap_or(0);
        CubeIndex { set, levels: (lo, hi) }
    }

    fn locate(&self, z: C) -> Option<DyadicCube> {
        (self.levels.0..=self.levels.1)
            .map(|j| DyadicCube::containing(z, j))
            .find(|q| self.set.contains(q))
    }
}

impl WhitneyCovering {
    /// `dist(Q, ∂Ω)` per cube, as computed from the boundary sample.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn covered_area(&self) -> f64 {
        self.cubes.iter().map(|q| q.side() * q.side()).sum()
    }

    /// Exhaustive check of the distance inequality and neighbour ratios, and
    /// the maximal multiplicity of `{20Q}` on a `samples × samples` grid.
    pub fn check(&self, samples: usize) -> WhitneyCheck {
        let tol = self.sample_spacing;
        let distance_failures = self
            .cubes
            .iter()
            .zip(&self.distances)
            .filter(|(q, &d)| {
                let l = q.side();
                d < self.c_w * l - tol || d > 4.0 * self.c_w * l + tol
            })
            .count();
        let index = CubeIndex::new(self.cubes.iter().copied());
        let neighbour_failures = self
            .cubes
            .iter()
            .filter(|q| {
                neighbour_probes(q)
                    .into_iter()
                    .filter_map(|p| index.locate(p))
                    .any(|n| (n.level - q.level).abs() > 1)
            })
            .count();
        WhitneyCheck {
            cubes: self.cubes.len(),
            distance_failures,
            neighbour_failures,
            overlap_20q: self.overlap(20.0, samples),
            overlap_samples: samples * samples,
        }
    }

    /// Max multiplicity of the dilates `λQ` over a uniform sample of the box.
    pub fn overlap(&self, lambda: f64, samples: usize) -> usize {
        let b = &self.bounding_box;
        let n = samples.max(2);
        let hx = b.width() / n as f64;
        let hy = b.height() / n as f64;
        // 2D difference array over sample indices.
        let mut diff = vec![0i64; (n + 1) * (n + 1)];
        for q in &self.cubes {
            let r = q.dilate(lambda);
            let i0 = (((r.x0 - b.x0) / hx - 0.5).ceil().max(0.0)) as usize;
            let i1 = (((r.x1 - b.x0) / hx - 0.5).floor().min(n as f64 - 1.0)) as i64;
            let j0 = (((r.y0 - b.y0) / hy - 0.5).ceil().max(0.0)) as usize;
            let j1 = (((r.y1 - b.y0) / hy - 0.5).floor().min(n as f64 - 1.0)) as i64;
            if i1 < i0 as i64 || j1 < j0 as i64 {
                continue;
            }
            let (i1, j1) = (i1 as usize + 1, j1 as usize + 1);
            diff[j0 * (n + 1) + i0] += 1;
            diff[j0 * (n + 1) + i1] -= 1;
            diff[j1 * (n + 1) + i0] -= 1;
            diff[j1 * (n + 1) + i1] += 1;
        }
        let mut best = 0i64;
        let mut acc = vec![0i64; (n + 1) * (n + 1)];
        for j in 0..n {
            for i in 0..n {
                let mut v = diff[j * (n + 1) + i];
                if i > 0 {
                    v += acc[j * (n + 1) + i - 1];
                }
                if j > 0 {
                    v += acc[(j - 1) * (n + 1) + i];
                }
                if i > 0 && j > 0 {
                    v -= acc[(j - 1) * (n + 1) + i - 1];
                }
                acc[j * (n + 1) + i] = v;
                best = best.max(v);
            }
        }
        best as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_covering_passes_exhaustive_check() {
        let w = build_whitney(
            &Domain::unit_disk(),
            1.0,
            (2.0f64).powi(-8),
            Rect::new(-1.0, 1.0, -1.0, 1.0),
        )
        .unwrap();
        let check = w.check(256);
        assert!(check.passed(500), "{check:?}");
        assert!(w.collar_area > 0.0 && w.collar_area < 0.1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = Domain::unit_disk();
        let inf = Rect::new(f64::NEG_INFINITY, 1.0, -1.0, 1.0);
        assert!(build_whitney(&d, 1.0, 0.01, inf).is_err());
        assert!(build_whitney(&d, 0.5, 0.01, Rect::new(-1.0, 1.0, -1.0, 1.0)).is_err());
        // No cube of side ≥ 1/2 can be 40 sides away from the boundary.
        assert!(build_whitney(&d, 40.0, 0.25, Rect::new(-1.0, 1.0, -1.0, 1.0)).is_err());
    }
}
