//! Named experiments. Each runner takes a resolved configuration and returns
//! a report whose tables carry a method tag and an error estimate per row.

mod basic;
mod growth;
mod probes;

use anyhow::Result;
use beurling_lab::geometry::{Domain, Rect};
use beurling_lab::parallel::Exec;
use clap::ValueEnum;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

pub use basic::{run_besov, run_beta, run_transform, run_whitney, BesovParams, BetaParams, TransformParams, WhitneyParams};
pub use growth::{run_beltrami, run_corner, run_iterates, BeltramiParams, CornerParams, IteratesParams};
pub use probes::{
    run_claim_interstitial, run_flat_poly, run_lemma_appendix, run_theorem1, AppendixParams, FlatPolyParams,
    InterstitialParams, Theorem1Params,
};

use crate::config::ExperimentConfig;
use crate::report::ExperimentReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Whitney,
    Beta,
    Besov,
    Transform,
    Theorem1,
    Interstitial,
    Flatpoly,
    Iterates,
    Corner,
    Beltrami,
    Appendix,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Whitney => "whitney",
            Experiment::Beta => "beta",
            Experiment::Besov => "besov",
            Experiment::Transform => "transform",
            Experiment::Theorem1 => "theorem1",
            Experiment::Interstitial => "interstitial",
            Experiment::Flatpoly => "flatpoly",
            Experiment::Iterates => "iterates",
            Experiment::Corner => "corner",
            Experiment::Beltrami => "beltrami",
            Experiment::Appendix => "appendix",
        }
    }
}

pub fn run(e: Experiment, cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    match e {
        Experiment::Whitney => run_whitney(cfg, exec),
        Experiment::Beta => run_beta(cfg, exec),
        Experiment::Besov => run_besov(cfg, exec),
        Experiment::Transform => run_transform(cfg, exec),
        Experiment::Theorem1 => run_theorem1(cfg, exec),
        Experiment::Interstitial => run_claim_interstitial(cfg, exec),
        Experiment::Flatpoly => run_flat_poly(cfg, exec),
        Experiment::Iterates => run_iterates(cfg, exec),
        Experiment::Corner => run_corner(cfg, exec),
        Experiment::Beltrami => run_beltrami(cfg, exec),
        Experiment::Appendix => run_lemma_appendix(cfg, exec),
    }
}

/// The domain's bounding square, or a box around the origin for graphs.
pub(crate) fn default_box(d: &Domain) -> Rect {
    match d {
        Domain::Disk { center, radius } => Rect::square(*center, *radius),
        Domain::Square { center, half_side } => Rect::square(*center, *half_side),
        _ => Rect::new(-2.0, 2.0, -1.0, 3.0),
    }
}

pub(crate) fn rect_of(r: [f64; 4]) -> Rect {
    Rect::new(r[0], r[1], r[2], r[3])
}

pub(crate) fn pt(p: [f64; 2]) -> C {
    C::new(p[0], p[1])
}
