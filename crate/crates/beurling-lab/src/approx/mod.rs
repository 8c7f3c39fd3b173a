//! Approximating polynomials, generalized β-coefficients and the two Besov
//! seminorm estimators for functions of one variable.

mod besov;
mod fit;
mod functions;
mod poly;

pub use besov::{
    besov_betas, besov_cross_check, besov_differences, difference_seminorm, finite_difference, finite_difference_on, BesovBetaReport, BesovCrossCheck,
    BesovDiffReport, DyadicGrid,
};
pub use fit::{
    approx_poly, approx_poly_with_order, beta, chain_constant, near_optimality,
    residual_sign_changes, ApproxFit, BetaRecord, Interval, TOL_FIT,
};
pub use functions::{besov_corpus, sign_change_corpus, TestFunction};
pub use poly::Poly1D;
