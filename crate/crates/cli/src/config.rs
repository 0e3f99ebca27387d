//! Run configuration: a single JSON file describing the model, an optional
//! lattice, optional per-suite tolerance overrides, and an optional default
//! report path. Unknown keys are rejected so typos fail loudly instead of
//! silently running with defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use mixed_landau::{Lattice, LatticeSpec, ModelParams, ModelSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    /// Per-suite tolerance overrides, keyed by suite name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    /// Where `verify` writes its JSON report unless `--output` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .with_context(|| format!("config file {} is not valid", path.display()))?;
        Ok(cfg)
    }

    pub fn build_model(&self) -> Result<ModelParams> {
        self.model
            .build()
            .context("config: the model section does not describe a usable model")
    }

    pub fn build_lattice(&self) -> Result<Option<Lattice>> {
        self.lattice
            .as_ref()
            .map(|l| l.build().context("config: the lattice section is degenerate"))
            .transpose()
    }
}

/// A ready-to-edit configuration with a genuinely mixed model (nonzero gauge
/// offset) whose total weight π makes the unit-square lattice suites pass.
pub fn template() -> RunConfig {
    let text = r#"{
  "model": {
    "nu": 2.141592653589793,
    "mu": 1.0,
    "pair": { "kind": "inner", "alpha": [1.0, 0.0], "beta": [0.4, 0.0] }
  },
  "lattice": { "omega1": [1.0, 0.0], "omega2": [0.0, 1.0] },
  "tolerances": {},
  "output_path": "report.json"
}"#;
    serde_json::from_str(text).expect("built-in template must parse")
}
