//! Experiment runner for `beurling-lab`: configuration, named experiments
//! and CSV/JSON reports.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::PathBuf;

use anyhow::{bail, Result};
use beurling_lab::parallel::Exec;
use clap::Parser;

use config::ExperimentConfig;
use experiments::Experiment;
use report::ExperimentReport;

#[derive(Debug, Parser)]
#[command(name = "beurling-lab", version, about = "Run a named beurling-lab experiment")]
pub struct Cli {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// JSON configuration; command-line flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for CSV tables and summary.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Resolution depth; its meaning is experiment specific.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Cli {
    /// The configuration after flag overrides.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::for_experiment(self.experiment),
        };
        match cfg.experiment {
            Some(e) if e != self.experiment => {
                bail!("config is for {}, not {}", e.name(), self.experiment.name())
            }
            _ => cfg.experiment = Some(self.experiment),
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(d) = self.depth {
            cfg.depth = Some(d);
        }
        if let Some(o) = &self.out {
            cfg.output = Some(o.clone());
        }
        Ok(cfg)
    }

    pub fn exec(&self) -> Result<Exec> {
        match self.threads {
            Some(0) => bail!("--threads must be at least 1"),
            Some(1) => Ok(Exec::Sequential),
            Some(k) => {
                set_threads(k)?;
                Ok(Exec::Parallel)
            }
            None => Ok(Exec::default()),
        }
    }

    /// Runs the experiment and writes the report when an output directory is set.
    pub fn run(&self) -> Result<(ExperimentReport, Vec<PathBuf>)> {
        let cfg = self.resolve()?;
        let exec = self.exec()?;
        let report = experiments::run(self.experiment, &cfg, exec)?;
        let files = match &cfg.output {
            Some(dir) => report.write(dir)?,
            None => vec![],
        };
        Ok((report, files))
    }
}

#[cfg(feature = "parallel")]
fn set_threads(k: usize) -> Result<()> {
    // A second call in one process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn set_threads(_: usize) -> Result<()> {
    bail!("built without the parallel feature; use --threads 1")
}
