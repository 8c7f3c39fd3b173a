use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::grid::Density;
use crate::error::{invalid, Result};
use crate::geometry::Domain;

/// Smoothed indicators with Gaussian edge width `width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Mollified {
    /// `½ erfc((|z - c| - ρ) / (√2 σ))`; equals 1 up to `erfc` tails inside.
    Disk { center: [f64; 2], radius: f64, width: f64 },
    /// `S(x) S(y)` with `S` the Gaussian convolution of an interval indicator,
    /// so this is exactly `χ_Q * G_σ`.
    Square { center: [f64; 2], half_side: f64, width: f64 },
}

fn edge(t: f64, width: f64) -> f64 {
    0.5 * libm::erfc(t / (SQRT_2 * width))
}

impl Mollified {
    pub fn of(domain: &Domain, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(invalid("mollification width must be positive"));
        }
        match domain {
            Domain::Disk { center, radius } => Ok(Mollified::Disk {
                center: [center.re, center.im],
                radius: *radius,
                width,
            }),
            Domain::Square { center, half_side } => Ok(Mollified::Square {
                center: [center.re, center.im],
                half_side: *half_side,
                width,
            }),
            _ => Err(invalid("mollification is defined for disks and squares")),
        }
    }

    pub fn value(&self, z: C) -> f64 {
        match *self {
            Mollified::Disk { center, radius, width } => {
                edge((z - C::new(center[0], center[1])).norm() - radius, width)
            }
            Mollified::Square { center, half_side, width } => {
                let s = |t: f64| edge(t - half_side, width) - edge(t + half_side, width);
                s(z.re - center[0]) * s(z.im - center[1])
            }
        }
    }

    /// Radius about the centre outside which the profile is below `1e-16`.
    pub fn support_radius(&self) -> f64 {
        match *self {
            Mollified::Disk { radius, width, .. } => radius + 9.0 * width,
            Mollified::Square { half_side, width, .. } => SQRT_2 * (half_side + 9.0 * width),
        }
    }
}

impl Density for Mollified {
    fn eval(&self, z: C) -> C {
        C::new(self.value(z), 0.0)
    }
}
