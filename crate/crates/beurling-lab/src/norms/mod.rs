//! Grid Sobolev norms, boundary normal fields and boundary Besov norms.

mod boundary;
mod normal;
mod sobolev;

pub use boundary::{besov_norm_normal, lemma_norm_beta_check, BesovNormalReport, LemmaNormReport};
pub use normal::{normal_field, normal_field_of, unit_normal, NormalField};
pub use sobolev::{sobolev_norm, SobolevReport};
