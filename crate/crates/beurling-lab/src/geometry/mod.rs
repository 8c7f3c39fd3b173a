//! Planar domains and their dyadic, Whitney and window decompositions.

mod area;
mod domain;
mod dyadic;
mod function;
mod spec;
mod whitney;
mod window;

pub use area::{symmetric_difference_area, AreaEstimate};
pub use domain::{segment_distance, Arcs, Domain, Piece, Rect};
pub use dyadic::{vertical_projection, DyadicCube, DyadicInterval};
pub use function::{CubicSpline, DefiningFunction, FunctionRepr};
pub use spec::{DomainSpec, GraphShape};
pub use whitney::{
    boundary_cloud, build_whitney, build_whitney_with, PointCloud, WhitneyCheck, WhitneyCovering,
    WhitneyOptions, BOUNDARY_SAMPLES,
};
pub use window::{window_decomposition, LocalFunction, Window};
