use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::Domain;
use crate::operators::GridFunction;

/// `‖f‖_{W^{n,p}(Ω)} = ‖f‖_{L^p(Ω)} + ‖∇^n f‖_{L^p(Ω)}` on a grid, with
/// `|∇^k f| = Σ_{|α|=k} |∂^{α₁} ∂̄^{α₂} f|`.
#[derive(Clone, Debug, Serialize)]
pub struct SobolevReport {
    pub n: usize,
    pub p: f64,
    pub lp: f64,
    /// `‖∇^n f‖` over nodes at distance `> collar` from `∂Ω`.
    pub grad: f64,
    /// The same at collar `2·collar`.
    pub grad_wide: f64,
    /// Linear collar → 0 extrapolation `2 grad - grad_wide`.
    pub grad_extrapolated: f64,
    /// `‖∇^k f‖` for `k = 1..=n` at `collar`.
    pub orders: Vec<f64>,
    pub total: f64,
    pub total_extrapolated: f64,
    /// `lp + Σ_k orders[k]`, the norm with every intermediate order.
    pub total_full: f64,
    pub collar: f64,
    /// Domain nodes inside the collar, `(i, j)`.
    pub excluded: Vec<(usize, usize)>,
}

/// `D^α f` for every `|α| = k`, `k = 0..=n`, indexed `[k][α₂]`.
fn wirtinger_tower(f: &GridFunction, n: usize) -> Vec<Vec<GridFunction>> {
    let mut tower = vec![vec![f.clone()]];
    for k in 0..n {
        let level = &tower[k];
        let mut next = Vec::with_capacity(k + 2);
        for (a2, g) in level.iter().enumerate() {
            let (d, db) = g.wirtinger();
            next.push(d);
            if a2 == k {
                next.push(db);
            }
        }
        tower.push(next);
    }
    tower
}

pub fn sobolev_norm(f: &GridFunction, domain: &Domain, n: usize, p: f64, collar: f64) -> Result<SobolevReport> {
    if !(p >= 1.0) {
        return Err(invalid("need p ≥ 1"));
    }
    if !(f.h < collar / 4.0) || collar <= SQRT_2 * (n as f64 + 1.0) * f.h {
        return Err(invalid(format!(
            "collar {collar} is too small for spacing {} and order {n}",
            f.h
        )));
    }
    let cell = f.h * f.h;
    let m = f.n;
    let mut inside = vec![];
    let mut dist = vec![];
    for k in 0..m * m {
        let z = f.node(k % m, k / m);
        if domain.contains(z) {
            inside.push(k);
            dist.push(domain.boundary_distance(z));
        }
    }
    let lp = (inside.iter().map(|&k| f.data[k].norm().powf(p)).sum::<f64>() * cell).powf(1.0 / p);
    let tower = wirtinger_tower(f, n);
    let order_norm = |order: usize, c: f64| -> f64 {
        let s: f64 = inside
            .iter()
            .zip(&dist)
            .filter(|(_, d)| **d > c)
            .map(|(&k, _)| tower[order].iter().map(|g| g.data[k].norm()).sum::<f64>().powf(p))
            .sum();
        (s * cell).powf(1.0 / p)
    };
    let orders: Vec<f64> = (1..=n).map(|k| order_norm(k, collar)).collect();
    let grad = if n == 0 { lp } else { orders[n - 1] };
    let grad_wide = if n == 0 { lp } else { order_norm(n, 2.0 * collar) };
    let grad_extrapolated = 2.0 * grad - grad_wide;
    let excluded = inside
        .iter()
        .zip(&dist)
        .filter(|(_, d)| **d <= collar)
        .map(|(&k, _)| (k % m, k / m))
        .collect();
    Ok(SobolevReport {
        n,
        p,
        lp,
        grad,
        grad_wide,
        grad_extrapolated,
        total: lp + grad,
        total_extrapolated: lp + grad_extrapolated,
        total_full: lp + orders.iter().sum::<f64>(),
        orders,
        collar,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::Exec;
    use num_complex::Complex64 as C;

    #[test]
    fn linear_function_on_unit_square() {
        let n = 512;
        let h = 1.0 / n as f64;
        let f = GridFunction::from_fn(n, h, C::new(0.5 * h, 0.5 * h), |z| C::new(z.re, 0.0), Exec::default()).unwrap();
        let q = Domain::square(C::new(0.5, 0.5), 0.5);
        let r = sobolev_norm(&f, &q, 1, 2.0, 8.0 * h).unwrap();
        assert!((r.lp - (1.0f64 / 3.0).sqrt()).abs() < 1e-4, "{}", r.lp);
        assert!((r.grad_extrapolated - 1.0).abs() < 1e-9, "{}", r.grad_extrapolated);
        assert!(sobolev_norm(&f, &q, 1, 2.0, 2.0 * h).is_err());
    }
}
