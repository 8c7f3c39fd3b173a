use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Domain;
use crate::operators::{beurling_periodic, cauchy_transform, fft_beurling_in, support_disk, GridFunction, Mollified};
use crate::parallel::Exec;

/// A Beltrami coefficient `μ` on a grid with `k = ‖μ‖_∞ < 1`.
#[derive(Clone, Debug, Serialize)]
pub struct BeltramiCoefficient {
    pub mu: GridFunction,
    pub k: f64,
    pub support_radius: f64,
    /// Support disk of `μ`; fixing it keeps `μB` linear.
    #[serde(skip)]
    support: Option<(C, f64)>,
}

/// Closed-form coefficients on the box `[-half, half]²` with `n²` nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case")]
pub enum MuSpec {
    /// `k · χ_D(0, radius)` with an erfc edge of width `width`.
    Disk { k: f64, radius: f64, width: f64 },
    /// `k · χ_Q` for the square of half side `half_side`, edge width `width`.
    Square { k: f64, half_side: f64, width: f64 },
    /// `terms` complex Gaussians with random centres in `B(0, 0.6)`, widths
    /// in `[0.1, 0.25]`, times a smooth cutoff of `B(0, 1)`, scaled to `sup = k`.
    Smooth { k: f64, terms: usize, seed: u64 },
}

impl MuSpec {
    pub fn grid(&self, n: usize, half: f64, exec: Exec) -> Result<GridFunction> {
        let h = 2.0 * half / n as f64;
        let origin = C::new(-half, -half);
        match *self {
            MuSpec::Disk { k, radius, width } => {
                let m = Mollified::of(&Domain::disk(C::new(0.0, 0.0), radius), width)?;
                GridFunction::from_fn(n, h, origin, move |z| C::new(k * m.value(z), 0.0), exec)
            }
            MuSpec::Square { k, half_side, width } => {
                let m = Mollified::of(&Domain::square(C::new(0.0, 0.0), half_side), width)?;
                GridFunction::from_fn(n, h, origin, move |z| C::new(k * m.value(z), 0.0), exec)
            }
            MuSpec::Smooth { k, terms, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let bumps: Vec<(C, f64, C)> = (0..terms.max(1))
                    .map(|_| {
                        let c = C::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..2.0 * PI));
                        let w = rng.gen_range(0.1..0.25);
                        let a = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        (c, w, a)
                    })
                    .collect();
                let cut = Mollified::of(&Domain::unit_disk(), 0.05)?;
                let raw = GridFunction::from_fn(
                    n,
                    h,
                    origin,
                    move |z| {
                        let s: C = bumps.iter().map(|(c, w, a)| a * (-(z - c).norm_sqr() / (w * w)).exp()).sum();
                        s * cut.value(z)
                    },
                    exec,
                )?;
                let sup = raw.sup();
                Ok(raw.map(|_, v| v * (k / sup)))
            }
        }
    }
}

impl BeltramiCoefficient {
    pub fn new(mu: GridFunction) -> Result<Self> {
        let k = mu.sup();
        if !(k < 1.0) {
            return Err(invalid(format!("‖μ‖_∞ = {k} must be below 1")));
        }
        let support = support_disk(&mu);
        let support_radius = match support {
            Some((c, s)) => c.norm() + s,
            None => 0.0,
        };
        if support_radius > 0.375 * mu.side() {
            return Err(invalid("μ must be supported in the middle of the box"));
        }
        Ok(BeltramiCoefficient { mu, k, support_radius, support })
    }

    pub fn from_spec(spec: &MuSpec, n: usize, half: f64, exec: Exec) -> Result<Self> {
        Self::new(spec.grid(n, half, exec)?)
    }

    fn apply(&self, f: &GridFunction, exec: Exec) -> Result<GridFunction> {
        let Some(disk) = self.support.filter(|_| self.k > 0.0) else {
            return Ok(f.same_shape());
        };
        let b = fft_beurling_in(f, disk, exec)?;
        b.combine(&self.mu, |x, m| x * m)
    }
}

/// Partial sums of `h = (I - μB)^{-1} μ = Σ_m (μB)^m μ`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesState {
    #[serde(skip)]
    pub h: GridFunction,
    /// `‖(μB)^m μ‖_{L²}`, `m = 0, 1, ...`.
    pub term_norms: Vec<f64>,
    /// `‖h_m - μ - μB h_m‖_{L²}` after each term.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl SeriesState {
    pub fn max_term_ratio(&self) -> f64 {
        self.term_norms
            .windows(2)
            .filter(|w| w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max)
    }
}

/// The series is gated on [`isometry_ratio`] being within 1% of 1.
pub fn neumann_h(mu: &BeltramiCoefficient, tol: f64, max_terms: usize, exec: Exec) -> Result<SeriesState> {
    if !(tol > 0.0) || max_terms == 0 {
        return Err(invalid("need tol > 0 and at least one term"));
    }
    if mu.k > 0.0 {
        let iso = isometry_ratio(&mu.mu, exec)?;
        if (iso - 1.0).abs() > 0.01 {
            return Err(Error::Certification(format!("grid Beurling multiplier is not an isometry: {iso}")));
        }
    }
    let mut term = mu.mu.clone();
    let mut h = mu.mu.clone();
    let mut term_norms = vec![term.norm_l2()];
    let mut residuals = vec![];
    let scale = term_norms[0].max(1e-300);
    loop {
        let mbh = mu.apply(&h, exec)?;
        let r = h.combine(&mbh, |a, b| a - b)?.combine(&mu.mu, |a, m| a - m)?.norm_l2();
        residuals.push(r);
        if r <= tol * scale {
            return Ok(SeriesState { h, term_norms, residuals, converged: true });
        }
        if term_norms.len() >= max_terms {
            return Err(Error::NonConvergence {
                what: format!("Neumann series after {max_terms} terms"),
                estimate: r / scale,
            });
        }
        term = mu.apply(&term, exec)?;
        term_norms.push(term.norm_l2());
        h = h.combine(&term, |a, b| a + b)?;
    }
}

/// `‖B f‖₂ / ‖f‖₂` for the periodic multiplier after removing the mean.
pub fn isometry_ratio(f: &GridFunction, exec: Exec) -> Result<f64> {
    let mean = f.data.iter().sum::<C>() / f.data.len() as f64;
    let g = f.map(|_, v| v - mean);
    let b = beurling_periodic(&g, exec)?;
    Ok(b.norm_l2() / g.norm_l2())
}

/// The principal solution `f(z) = z + C h(z)` and its diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipalSolution {
    /// `f(z) - z`.
    #[serde(skip)]
    pub displacement: GridFunction,
    /// Median of `|∂̄f - μ ∂f| / (|∂f| + 1e-12)` over interior nodes.
    pub residual_median: f64,
    pub residual_max: f64,
    /// `max |f - z|` on the outer ring of nodes.
    pub edge_max: f64,
    /// `max |∫h| / (π |z|)` on the same ring.
    pub edge_model: f64,
}

pub fn principal_solution(mu: &BeltramiCoefficient, state: &SeriesState, exec: Exec) -> Result<PrincipalSolution> {
    if !state.converged {
        return Err(Error::NonConvergence {
            what: "Neumann series".into(),
            estimate: state.residuals.last().copied().unwrap_or(f64::INFINITY),
        });
    }
    let disp = cauchy_transform(&state.h, exec)?;
    let f = disp.map(|z, v| z + v);
    let (df, dbf) = f.wirtinger();
    let n = f.n;
    let mut rel: Vec<f64> = vec![];
    for j in 2..n - 2 {
        for i in 2..n - 2 {
            let k = j * n + i;
            let r = (dbf.data[k] - mu.mu.data[k] * df.data[k]).norm() / (df.data[k].norm() + 1e-12);
            rel.push(r);
        }
    }
    rel.sort_by(f64::total_cmp);
    let mass = state.h.data.iter().sum::<C>() * (state.h.h * state.h.h);
    let (mut edge_max, mut edge_model) = (0.0f64, 0.0f64);
    for k in 0..n * n {
        let (i, j) = (k % n, k / n);
        if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
            let z = disp.node(i, j);
            edge_max = edge_max.max(disp.data[k].norm());
            edge_model = edge_model.max(mass.norm() / (PI * z.norm()));
        }
    }
    Ok(PrincipalSolution {
        displacement: disp,
        residual_median: rel[rel.len() / 2],
        residual_max: rel[rel.len() - 1],
        edge_max,
        edge_model,
    })
}
