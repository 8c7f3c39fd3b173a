//! Grid Beurling and Cauchy transforms.
//!
//! The Beurling transform uses the multiplier `ξ̄/ξ` (zero mode set to 0) on
//! the periodic box, whose kernel is `-℘/π` for the square lattice `Lℤ[i]`.
//! Adding `(1/π) ∫ f(w) (℘ - ζ^{-2})(z - w) dm(w)`, expanded in powers of
//! `z - w`, recovers the free-space transform wherever the expansion
//! converges. The Cauchy transform is an aperiodic convolution on a
//! zero-padded grid, so it needs no correction.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C;
use rustfft::{Fft, FftPlanner};

use super::grid::GridFunction;
use crate::error::{invalid, Result};
use crate::parallel::Exec;

/// Planned forward/inverse 2D transforms of size `n × n`.
pub struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(n: usize) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(invalid(format!("FFT size {n} is not a power of two")));
        }
        let mut planner = FftPlanner::new();
        Ok(Fft2 {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        })
    }

    pub fn forward(&self, data: &mut [C], exec: Exec) {
        self.pass(&self.fwd, data, exec);
    }

    /// Inverse transform including the `1/n²` normalisation.
    pub fn inverse(&self, data: &mut [C], exec: Exec) {
        self.pass(&self.inv, data, exec);
        let s = 1.0 / (self.n * self.n) as f64;
        exec.for_each_chunk_mut(data, self.n, |_, row| row.iter_mut().for_each(|v| *v *= s));
    }

    fn pass(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [C], exec: Exec) {
        let n = self.n;
        exec.for_each_chunk_mut(data, n, |_, row| plan.process(row));
        transpose(data, n);
        exec.for_each_chunk_mut(data, n, |_, row| plan.process(row));
        transpose(data, n);
    }
}

fn transpose(data: &mut [C], n: usize) {
    for j in 0..n {
        for i in j + 1..n {
            data.swap(j * n + i, i * n + j);
        }
    }
}

/// Signed frequency index of DFT bin `k`.
fn signed(k: usize, n: usize) -> f64 {
    if k < n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// The periodic multiplier `ξ̄/ξ` with the zero mode mapped to 0.
pub fn beurling_periodic(f: &GridFunction, exec: Exec) -> Result<GridFunction> {
    let fft = Fft2::new(f.n)?;
    let n = f.n;
    let mut d = f.data.clone();
    fft.forward(&mut d, exec);
    exec.for_each_chunk_mut(&mut d, n, |j, row| {
        let ky = signed(j, n);
        for (i, v) in row.iter_mut().enumerate() {
            let xi = C::new(signed(i, n), ky);
            *v = if i == 0 && j == 0 { C::new(0.0, 0.0) } else { *v * xi.conj() / xi };
        }
    });
    fft.inverse(&mut d, exec);
    Ok(GridFunction {
        data: d,
        mask: None,
        ..f.clone()
    })
}

/// Coefficients `c_k`, `k ≥ 2`, of `℘(ζ) - ζ^{-2} = Σ c_k ζ^{2k-2}` for the
/// lattice `ℤ[i]`, from `G₄ = Γ(1/4)^8 / (960 π²)` and the recursion
/// `c_k = 3/((2k+1)(k-3)) Σ_{m=2}^{k-2} c_m c_{k-m}` (`c_3 = 0` since `g₃ = 0`).
pub fn lattice_coefficients(kmax: usize) -> Vec<f64> {
    const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;
    let g4 = GAMMA_QUARTER.powi(8) / (960.0 * PI * PI);
    let mut c = vec![0.0; kmax.max(3) + 1];
    c[2] = 3.0 * g4;
    for k in 4..=kmax {
        let s: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 * s / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c.truncate(kmax + 1);
    c
}

/// Centre and radius of the set where `|f|` exceeds `1e-14 · sup|f|`.
pub fn support_disk(f: &GridFunction) -> Option<(C, f64)> {
    let thr = 1e-14 * f.sup();
    if !(thr > 0.0) {
        return None;
    }
    let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
    let live: Vec<usize> = (0..f.data.len()).filter(|&k| f.data[k].norm() > thr).collect();
    for &k in &live {
        let z = f.node(k % f.n, k / f.n);
        b = [b[0].min(z.re), b[1].max(z.re), b[2].min(z.im), b[3].max(z.im)];
    }
    let c = C::new(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]));
    let s = live
        .iter()
        .map(|&k| (f.node(k % f.n, k / f.n) - c).norm())
        .fold(0.0, f64::max);
    Some((c, s + f.h))
}

/// Largest `(|z - c| + s) / L` at which the lattice expansion is used.
const LATTICE_RATIO: f64 = 0.6;

/// The free-space correction disk `|z - c| ≤ r` of a grid function, if any.
pub fn correction_disk(f: &GridFunction) -> Option<(C, f64)> {
    let (c, s) = support_disk(f)?;
    let r = LATTICE_RATIO * f.side() - s;
    (r > 0.0).then_some((c, r))
}

fn binomial_row(q: usize) -> Vec<f64> {
    let mut row = vec![1.0; q + 1];
    for i in 1..=q {
        row[i] = row[i - 1] * (q - i + 1) as f64 / i as f64;
    }
    row
}

/// Add the free-space correction to a periodic Beurling transform.
fn lattice_correct(f: &GridFunction, periodic: &mut GridFunction, (c, s): (C, f64), exec: Exec) {
    let l = f.side();
    let r = LATTICE_RATIO * l - s;
    if !(r > 0.0) {
        return;
    }
    let rho = (r + s) / l;
    // Terms decay like ρ^{2k}.
    let kmax = ((1e-17f64.ln() / (2.0 * rho.ln())).ceil() as usize + 2).max(3);
    let coeffs = lattice_coefficients(kmax);
    let qmax = 2 * kmax - 2;
    // Moments Σ f(w) (w - c)^i h².
    let cell = f.h * f.h;
    let mut moments = vec![C::new(0.0, 0.0); qmax + 1];
    for (k, v) in f.data.iter().enumerate() {
        if *v == C::new(0.0, 0.0) {
            continue;
        }
        let w = f.node(k % f.n, k / f.n) - c;
        let mut p = *v * cell;
        for m in moments.iter_mut() {
            *m += p;
            p *= w;
        }
    }
    // Polynomial in u = z - c.
    let mut poly = vec![C::new(0.0, 0.0); qmax + 1];
    for (k, &ck) in coeffs.iter().enumerate().skip(2) {
        if ck == 0.0 {
            continue;
        }
        let q = 2 * k - 2;
        let scale = ck / (PI * l.powi(2 * k as i32));
        let row = binomial_row(q);
        for e in 0..=q {
            let i = q - e;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            poly[e] += moments[i] * (scale * row[i] * sign);
        }
    }
    let (n, h, o) = (f.n, f.h, f.origin);
    exec.for_each_chunk_mut(&mut periodic.data, n, |j, row| {
        for (i, v) in row.iter_mut().enumerate() {
            let u = o + C::new(i as f64 * h, j as f64 * h) - c;
            if u.norm() <= r {
                *v += poly.iter().rev().fold(C::new(0.0, 0.0), |acc, a| acc * u + a);
            }
        }
    });
}

/// Outer band (in cells) that must carry no mass.
fn edge_band(n: usize) -> usize {
    (n / 8).max(1)
}

fn check_support(f: &GridFunction) -> Result<()> {
    let thr = 1e-12 * f.sup();
    let b = edge_band(f.n);
    for j in 0..f.n {
        for i in 0..f.n {
            let edge = i < b || j < b || i >= f.n - b || j >= f.n - b;
            if edge && f.get(i, j).norm() > thr {
                return Err(invalid("support reaches the outer eighth of the box"));
            }
        }
    }
    Ok(())
}

/// Grid approximation of `Bf` for compactly supported `f`. Nodes outside
/// [`correction_disk`] keep the periodic transform.
pub fn fft_beurling(f: &GridFunction, exec: Exec) -> Result<GridFunction> {
    check_support(f)?;
    let mut out = beurling_periodic(f, exec)?;
    if let Some(disk) = support_disk(f) {
        lattice_correct(f, &mut out, disk, exec);
    }
    Ok(out)
}

/// [`fft_beurling`] with the support disk `|w - c| ≤ s` fixed by the caller,
/// so the map is linear. The correction is exact only for functions
/// supported in the disk.
pub fn fft_beurling_in(f: &GridFunction, (c, s): (C, f64), exec: Exec) -> Result<GridFunction> {
    check_support(f)?;
    let mut out = beurling_periodic(f, exec)?;
    lattice_correct(f, &mut out, (c, s), exec);
    Ok(out)
}

/// [`fft_beurling`] plus the largest change on the correction disk when the
/// box is doubled.
pub fn fft_beurling_checked(f: &GridFunction, exec: Exec) -> Result<(GridFunction, f64)> {
    let a = fft_beurling(f, exec)?;
    let b = fft_beurling(&f.embed(2 * f.n)?, exec)?.restrict(f.n)?;
    let disk = correction_disk(f);
    let mut err: f64 = 0.0;
    for (k, (x, y)) in a.data.iter().zip(&b.data).enumerate() {
        let z = a.node(k % a.n, k / a.n);
        if disk.map_or(true, |(c, r)| (z - c).norm() <= r) {
            err = err.max((x - y).norm());
        }
    }
    Ok((a, err))
}

/// Zero-padded discrete convolution `h² Σ_w f(w) K(z - w)` over the nodes,
/// with the singular cell `z = w` omitted.
fn aperiodic_convolve(f: &GridFunction, kernel: impl Fn(C) -> C + Sync, exec: Exec) -> Result<GridFunction> {
    let n = f.n;
    let m = 2 * n;
    let fft = Fft2::new(m)?;
    let mut a = vec![C::new(0.0, 0.0); m * m];
    for j in 0..n {
        a[j * m..j * m + n].copy_from_slice(&f.data[j * n..(j + 1) * n]);
    }
    let h = f.h;
    let mut k = vec![C::new(0.0, 0.0); m * m];
    exec.for_each_chunk_mut(&mut k, m, |j, row| {
        let dy = signed(j, m);
        for (i, v) in row.iter_mut().enumerate() {
            let dx = signed(i, m);
            if i != 0 || j != 0 {
                *v = kernel(C::new(dx * h, dy * h)) * (h * h);
            }
        }
    });
    fft.forward(&mut a, exec);
    fft.forward(&mut k, exec);
    for (x, y) in a.iter_mut().zip(&k) {
        *x *= y;
    }
    fft.inverse(&mut a, exec);
    let mut out = f.same_shape();
    out.mask = None;
    for j in 0..n {
        out.data[j * n..(j + 1) * n].copy_from_slice(&a[j * m..j * m + n]);
    }
    Ok(out)
}

/// `Cf(z) = (1/π) ∫ f(w)/(z - w) dm(w)` as a zero-padded discrete
/// convolution.
pub fn cauchy_transform(f: &GridFunction, exec: Exec) -> Result<GridFunction> {
    let mut out = aperiodic_convolve(f, |d| 1.0 / (PI * d), exec)?;
    // The omitted cell carries `(h²/π) ∂f(z)` from the removable part of
    // the kernel times the linear Taylor term.
    let df = spectral_dz(f, 1, exec)?;
    let w = -f.h * f.h / PI;
    for (o, d) in out.data.iter_mut().zip(&df.data) {
        *o += w * d;
    }
    Ok(out)
}

/// `∂^m f` by the spectral multiplier `(πi/L)^m ξ̄^m`, Nyquist modes dropped.
pub fn spectral_dz(f: &GridFunction, m: u32, exec: Exec) -> Result<GridFunction> {
    let fft = Fft2::new(f.n)?;
    let n = f.n;
    let scale = C::new(0.0, PI / f.side());
    let mut d = f.data.clone();
    fft.forward(&mut d, exec);
    exec.for_each_chunk_mut(&mut d, n, |j, row| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = if i == n / 2 || j == n / 2 {
                C::new(0.0, 0.0)
            } else {
                *v * (scale * C::new(signed(i, n), -signed(j, n))).powu(m)
            };
        }
    });
    fft.inverse(&mut d, exec);
    Ok(GridFunction {
        data: d,
        mask: None,
        ..f.clone()
    })
}

/// `B^m f = E_m * ∂^m f` with `E_m(z) = z̄^{m-1} / (π (m-1)! z)`, the
/// fundamental solution of `∂̄^m`; exact in the box for compactly supported
/// `f` up to the quadrature of the kernel.
pub fn fft_beurling_iterate(f: &GridFunction, m: u32, exec: Exec) -> Result<GridFunction> {
    if m == 0 {
        return Err(invalid("iterate order must be at least 1"));
    }
    check_support(f)?;
    let g = spectral_dz(f, m, exec)?;
    if m == 1 {
        return cauchy_transform(&g, exec);
    }
    let fact: f64 = (1..m).map(f64::from).product();
    aperiodic_convolve(&g, |d| d.conj().powu(m - 1) / (PI * fact * d), exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_coefficients_match_direct_sums() {
        // Direct Eisenstein sums over ℤ[i]; rotating by i scales each
        // quadrant by i^{-p}.
        let g = |p: i32, m: i64| -> f64 {
            let mut s = C::new(0.0, 0.0);
            for a in 1..=m {
                for b in 0..=m {
                    s += C::new(a as f64, b as f64).powi(-p);
                }
            }
            let rot: C = (0..4).map(|q| C::i().powi(-p * q)).sum();
            (rot * s).re
        };
        let c = lattice_coefficients(5);
        assert!((c[2] / 3.0 - g(4, 400)).abs() < 1e-4);
        assert!((c[4] / 7.0 - g(8, 60)).abs() < 1e-10);
        assert!(c[3].abs() < 1e-15);
        assert!((c[5] - 9.0 * g(10, 60)).abs() < 1e-10);
    }

    #[test]
    fn transpose_is_involution() {
        let mut v: Vec<C> = (0..16).map(|k| C::new(k as f64, 0.0)).collect();
        transpose(&mut v, 4);
        assert_eq!(v[1], C::new(4.0, 0.0));
        transpose(&mut v, 4);
        assert_eq!(v[1], C::new(1.0, 0.0));
    }
}
