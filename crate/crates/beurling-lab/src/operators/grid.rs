use num_complex::Complex64 as C;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::Domain;
use crate::parallel::Exec;

/// `N × N` complex samples at `origin + (i + j·i) h`, row-major in `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFunction {
    pub n: usize,
    pub h: f64,
    pub origin: C,
    pub data: Vec<C>,
    /// Nodes inside the domain of definition, when there is one.
    pub mask: Option<Vec<bool>>,
}

impl GridFunction {
    pub fn zeros(n: usize, h: f64, origin: C) -> Result<Self> {
        if n < 2 || !(h > 0.0) {
            return Err(invalid("grid needs n ≥ 2 and h > 0"));
        }
        Ok(GridFunction {
            n,
            h,
            origin,
            data: vec![C::new(0.0, 0.0); n * n],
            mask: None,
        })
    }

    /// Grid whose node `(n/2, n/2)` is `center`.
    pub fn centered(n: usize, h: f64, center: C) -> Result<Self> {
        let half = (n / 2) as f64 * h;
        Self::zeros(n, h, center - C::new(half, half))
    }

    pub fn from_fn(n: usize, h: f64, origin: C, f: impl Fn(C) -> C + Sync + Send, exec: Exec) -> Result<Self> {
        let mut g = Self::zeros(n, h, origin)?;
        g.fill(f, exec);
        Ok(g)
    }

    pub fn fill(&mut self, f: impl Fn(C) -> C + Sync + Send, exec: Exec) {
        let (n, h, o) = (self.n, self.h, self.origin);
        exec.for_each_chunk_mut(&mut self.data, n, |j, row| {
            for (i, v) in row.iter_mut().enumerate() {
                *v = f(o + C::new(i as f64 * h, j as f64 * h));
            }
        });
    }

    pub fn node(&self, i: usize, j: usize) -> C {
        self.origin + C::new(i as f64 * self.h, j as f64 * self.h)
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.data[j * self.n + i]
    }

    pub fn side(&self) -> f64 {
        self.n as f64 * self.h
    }

    pub fn is_pow2(&self) -> bool {
        self.n.is_power_of_two()
    }

    pub fn with_mask(mut self, domain: &Domain) -> Self {
        let mask = (0..self.n * self.n)
            .map(|k| domain.contains(self.node(k % self.n, k / self.n)))
            .collect();
        self.mask = Some(mask);
        self
    }

    pub fn in_mask(&self, k: usize) -> bool {
        self.mask.as_ref().map_or(true, |m| m[k])
    }

    pub fn same_shape(&self) -> Self {
        GridFunction {
            data: vec![C::new(0.0, 0.0); self.n * self.n],
            ..self.clone()
        }
    }

    pub fn map(&self, f: impl Fn(C, C) -> C) -> Self {
        let mut out = self.clone();
        for (k, v) in out.data.iter_mut().enumerate() {
            *v = f(self.node(k % self.n, k / self.n), *v);
        }
        out
    }

    /// `Σ a_k f_k` pointwise on grids of equal shape.
    pub fn combine(&self, other: &GridFunction, f: impl Fn(C, C) -> C) -> Result<Self> {
        if self.n != other.n || self.h != other.h || self.origin != other.origin {
            return Err(invalid("grids differ in shape"));
        }
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v = f(*v, *w);
        }
        Ok(out)
    }

    /// Midpoint `L^p` norm over the mask (or the whole grid).
    pub fn norm_lp(&self, p: f64) -> f64 {
        let cell = self.h * self.h;
        let s: f64 = self
            .data
            .iter()
            .enumerate()
            .filter(|(k, _)| self.in_mask(*k))
            .map(|(_, v)| v.norm().powf(p))
            .sum();
        (s * cell).powf(1.0 / p)
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_lp(2.0)
    }

    pub fn sup(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation, zero outside the grid.
    pub fn interpolate(&self, z: C) -> C {
        let u = (z - self.origin) / self.h;
        let (fx, fy) = (u.re.floor(), u.im.floor());
        if fx < 0.0 || fy < 0.0 || fx >= (self.n - 1) as f64 || fy >= (self.n - 1) as f64 {
            return C::new(0.0, 0.0);
        }
        let (i, j) = (fx as usize, fy as usize);
        let (tx, ty) = (u.re - fx, u.im - fy);
        let a = self.get(i, j) * (1.0 - tx) + self.get(i + 1, j) * tx;
        let b = self.get(i, j + 1) * (1.0 - tx) + self.get(i + 1, j + 1) * tx;
        a * (1.0 - ty) + b * ty
    }

    /// Embed into an `m × m` grid (`m ≥ n`) with the same spacing so that the
    /// two grids share the node positions; new nodes are zero.
    pub fn embed(&self, m: usize) -> Result<Self> {
        if m < self.n || (m - self.n) % 2 != 0 {
            return Err(invalid("embedding needs m ≥ n with m - n even"));
        }
        let off = (m - self.n) / 2;
        let mut g = GridFunction::zeros(m, self.h, self.origin - C::new(off as f64, off as f64) * self.h)?;
        for j in 0..self.n {
            let dst = (j + off) * m + off;
            g.data[dst..dst + self.n].copy_from_slice(&self.data[j * self.n..(j + 1) * self.n]);
        }
        Ok(g)
    }

    /// Inverse of [`GridFunction::embed`].
    pub fn restrict(&self, n: usize) -> Result<Self> {
        if n > self.n || (self.n - n) % 2 != 0 {
            return Err(invalid("restriction needs n ≤ m with m - n even"));
        }
        let off = (self.n - n) / 2;
        let mut g = GridFunction::zeros(n, self.h, self.origin + C::new(off as f64, off as f64) * self.h)?;
        for j in 0..n {
            let src = (j + off) * self.n + off;
            g.data[j * n..(j + 1) * n].copy_from_slice(&self.data[src..src + n]);
        }
        Ok(g)
    }

    /// Centered-difference Wirtinger derivatives `(∂f, ∂̄f)`; the outer ring
    /// of nodes is left at zero.
    pub fn wirtinger(&self) -> (GridFunction, GridFunction) {
        let (mut d, mut db) = (self.same_shape(), self.same_shape());
        let n = self.n;
        let inv = 0.5 / self.h;
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                let fx = (self.get(i + 1, j) - self.get(i - 1, j)) * inv;
                let fy = (self.get(i, j + 1) - self.get(i, j - 1)) * inv;
                let iy = C::new(0.0, 1.0) * fy;
                d.data[j * n + i] = (fx - iy) * 0.5;
                db.data[j * n + i] = (fx + iy) * 0.5;
            }
        }
        (d, db)
    }
}

/// A function of `w ∈ ℂ` used as the density in `T^γ f`.
pub trait Density: Sync {
    fn eval(&self, w: C) -> C;
    /// `Some(c)` when the density is the constant `c` on the domain.
    fn constant(&self) -> Option<C> {
        None
    }
}

impl Density for GridFunction {
    fn eval(&self, w: C) -> C {
        self.interpolate(w)
    }
}

/// The constant density `c`.
pub struct Constant(pub C);

impl Density for Constant {
    fn eval(&self, _: C) -> C {
        self.0
    }
    fn constant(&self) -> Option<C> {
        Some(self.0)
    }
}

/// A closure as a density.
pub struct FnDensity<F>(pub F);

impl<F: Fn(C) -> C + Sync> Density for FnDensity<F> {
    fn eval(&self, w: C) -> C {
        (self.0)(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_restrict_round_trip() {
        let g = GridFunction::from_fn(8, 0.5, C::new(-2.0, -2.0), |z| z * z, Exec::Sequential).unwrap();
        let big = g.embed(16).unwrap();
        assert_eq!(big.node(4, 4), g.node(0, 0));
        assert_eq!(big.restrict(8).unwrap(), g);
        let w = C::new(0.3, -0.7);
        let lin = GridFunction::from_fn(8, 0.5, C::new(-2.0, -2.0), |z| z, Exec::Sequential).unwrap();
        assert!((lin.interpolate(w) - w).norm() < 1e-14);
    }
}
