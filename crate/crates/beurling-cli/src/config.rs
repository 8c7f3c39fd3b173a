use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use beurling_lab::geometry::{Domain, DomainSpec};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::experiments::Experiment;

/// A domain given inline or as a path to a JSON [`DomainSpec`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSource {
    Path { path: PathBuf },
    Inline(DomainSpec),
}

impl DomainSource {
    pub fn resolve(&self, base: &Path) -> Result<DomainSpec> {
        match self {
            DomainSource::Inline(s) => Ok(s.clone()),
            DomainSource::Path { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                let text = std::fs::read_to_string(&p).with_context(|| format!("reading domain {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing domain {}", p.display()))
            }
        }
    }
}

/// One experiment run. `params` are experiment specific; missing fields take
/// their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSource>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    /// Not part of the run's identity, so it is never serialized.
    #[serde(default, skip_serializing)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        // Domain files are resolved now so the run is self-contained.
        if let Some(d) = &cfg.domain {
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.domain = Some(DomainSource::Inline(d.resolve(base)?));
        }
        Ok(cfg)
    }

    pub fn for_experiment(e: Experiment) -> Self {
        ExperimentConfig { experiment: Some(e), ..Default::default() }
    }

    /// Typed parameters with defaults; unknown fields are rejected.
    pub fn params<P: DeserializeOwned + Serialize + Default>(&self) -> Result<P> {
        if self.params.is_null() {
            return Ok(P::default());
        }
        serde_json::from_value(self.params.clone()).context("parsing params")
    }

    pub fn domain_spec(&self) -> Result<Option<DomainSpec>> {
        self.domain.as_ref().map(|d| d.resolve(Path::new("."))).transpose()
    }

    pub fn domain_or(&self, default: DomainSpec) -> Result<(DomainSpec, Domain)> {
        let spec = self.domain_spec()?.unwrap_or(default);
        let d = spec.build().context("building domain")?;
        Ok((spec, d))
    }

    /// SHA-256 of the canonical JSON of the resolved configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Every value must be finite and positive.
pub fn check_positive(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !(v.is_finite() && *v > 0.0) {
            bail!("{name} must be positive and finite, got {v}");
        }
    }
    Ok(())
}
