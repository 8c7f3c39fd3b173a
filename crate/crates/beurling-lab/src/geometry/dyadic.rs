use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::domain::Rect;

fn side_of(level: i32) -> f64 {
    (2.0f64).powi(-level)
}

/// `[k 2^{-j}, (k+1) 2^{-j}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub level: i32,
    pub k: i64,
}

impl DyadicInterval {
    pub fn new(level: i32, k: i64) -> Self {
        DyadicInterval { level, k }
    }

    /// The level-`level` interval containing `x` (half-open on the right).
    pub fn containing(x: f64, level: i32) -> Self {
        DyadicInterval::new(level, (x / side_of(level)).floor() as i64)
    }

    pub fn len(&self) -> f64 {
        side_of(self.level)
    }
    pub fn start(&self) -> f64 {
        self.k as f64 * self.len()
    }
    pub fn end(&self) -> f64 {
        (self.k + 1) as f64 * self.len()
    }
    pub fn midpoint(&self) -> f64 {
        (self.k as f64 + 0.5) * self.len()
    }
    /// Concentric dilate `λI` as a plain interval.
    pub fn dilate(&self, lambda: f64) -> (f64, f64) {
        let h = 0.5 * lambda * self.len();
        (self.midpoint() - h, self.midpoint() + h)
    }
    pub fn parent(&self) -> Self {
        DyadicInterval::new(self.level - 1, self.k.div_euclid(2))
    }
    pub fn children(&self) -> [Self; 2] {
        [
            DyadicInterval::new(self.level + 1, 2 * self.k),
            DyadicInterval::new(self.level + 1, 2 * self.k + 1),
        ]
    }
    /// Closed containment `self ⊂ other`.
    pub fn is_within(&self, other: &Self) -> bool {
        self.level >= other.level
            && self.k.div_euclid(1i64 << (self.level - other.level).min(62)) == other.k
    }
    /// Closed containment in a plain interval.
    pub fn is_within_span(&self, a: f64, b: f64) -> bool {
        self.start() >= a && self.end() <= b
    }

    /// All level-`level` intervals inside `[a, b]`.
    pub fn tiling(a: f64, b: f64, level: i32) -> Vec<Self> {
        let l = side_of(level);
        let k0 = (a / l).ceil() as i64;
        let k1 = (b / l).floor() as i64;
        (k0..k1).map(|k| DyadicInterval::new(level, k)).collect()
    }
}

/// `[kx 2^{-j}, (kx+1) 2^{-j}] × [ky 2^{-j}, (ky+1) 2^{-j}]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: i32,
    pub kx: i64,
    pub ky: i64,
}

impl DyadicCube {
    pub fn new(level: i32, kx: i64, ky: i64) -> Self {
        DyadicCube { level, kx, ky }
    }

    pub fn containing(z: C, level: i32) -> Self {
        let l = side_of(level);
        DyadicCube::new(level, (z.re / l).floor() as i64, (z.im / l).floor() as i64)
    }

    pub fn side(&self) -> f64 {
        side_of(self.level)
    }
    pub fn rect(&self) -> Rect {
        let l = self.side();
        Rect::new(
            self.kx as f64 * l,
            (self.kx + 1) as f64 * l,
            self.ky as f64 * l,
            (self.ky + 1) as f64 * l,
        )
    }
    pub fn center(&self) -> C {
        let l = self.side();
        C::new((self.kx as f64 + 0.5) * l, (self.ky as f64 + 0.5) * l)
    }
    pub fn corners(&self) -> [C; 4] {
        let r = self.rect();
        [
            C::new(r.x0, r.y0),
            C::new(r.x1, r.y0),
            C::new(r.x1, r.y1),
            C::new(r.x0, r.y1),
        ]
    }
    /// Concentric dilate `λQ`.
    pub fn dilate(&self, lambda: f64) -> Rect {
        Rect::square(self.center(), 0.5 * lambda * self.side())
    }
    pub fn parent(&self) -> Self {
        DyadicCube::new(self.level - 1, self.kx.div_euclid(2), self.ky.div_euclid(2))
    }
    pub fn children(&self) -> [Self; 4] {
        let (l, x, y) = (self.level + 1, 2 * self.kx, 2 * self.ky);
        [
            DyadicCube::new(l, x, y),
            DyadicCube::new(l, x + 1, y),
            DyadicCube::new(l, x, y + 1),
            DyadicCube::new(l, x + 1, y + 1),
        ]
    }

    /// All level-`level` cubes contained in `rect`.
    pub fn tiling(rect: &Rect, level: i32) -> Vec<Self> {
        let xs = DyadicInterval::tiling(rect.x0, rect.x1, level);
        let ys = DyadicInterval::tiling(rect.y0, rect.y1, level);
        xs.iter()
            .flat_map(|x| ys.iter().map(move |y| DyadicCube::new(level, x.k, y.k)))
            .collect()
    }
}

/// `π(Q)`: the dyadic interval under `Q` with the same level and x-index.
pub fn vertical_projection(q: &DyadicCube) -> DyadicInterval {
    DyadicInterval::new(q.level, q.kx)
}
