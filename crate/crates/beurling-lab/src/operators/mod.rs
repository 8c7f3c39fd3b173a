//! Kernel transforms `T^γ`, the Beurling transform and its iterates.

mod closed;
mod contour;
mod density;
mod eval;
mod fft;
mod flat;
mod grid;
mod index;
mod mollify;
mod pv;

pub use closed::{disk_closed, halfplane_closed, polygon_closed, t_char_closed};
pub use contour::t_char_contour;
pub use density::{t_f, t_f_plane};
pub use eval::{EvalResult, Method};
pub use fft::{
    beurling_periodic, correction_disk, support_disk, cauchy_transform, fft_beurling, fft_beurling_checked, fft_beurling_in, fft_beurling_iterate, lattice_coefficients, spectral_dz,
    Fft2,
};
pub use flat::{flat_poly_bound_probe, FlatPolyReport, FlatnessBounds};
pub use grid::{Constant, Density, FnDensity, GridFunction};
pub use index::{beurling_iterate_index, derivative_ladder, falling_factorial, kernel, LadderCase, MultiIndex};
pub use mollify::Mollified;
pub use pv::{t_char_pv, PolarRings};
