//! Quasiconformal solutions through the Neumann series for `(I - μB)^{-1}`,
//! and the growth of Beurling iterates on model domains.

mod coefficient;
mod growth;

pub use coefficient::{
    isometry_ratio, neumann_h, principal_solution, BeltramiCoefficient, MuSpec, PrincipalSolution, SeriesState,
};
pub use growth::{
    corner_divergence, iterate_gradient, iterate_growth, CornerReport, GrowthFit, GrowthSampling,
    IterateGrowthReport, Route,
};
