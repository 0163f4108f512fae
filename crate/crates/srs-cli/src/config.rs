//! JSON config schemas for the batch commands. Every config carries
//! `"schema": 1`; unknown fields are rejected so typos fail fast.

use std::path::PathBuf;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// A model reference: `{"model": "<name>", ...parameters}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    BimodalPoisson {
        lambda1: f64,
        lambda2: f64,
    },
    Bitstring {
        k: u32,
        kind: BitKind,
    },
    Crp {
        #[serde(rename = "N")]
        n: u32,
        a: f64,
        b: f64,
    },
    Ising {
        k: u32,
        #[serde(rename = "T")]
        t: f64,
        method: KernelKind,
        steps: u32,
        #[serde(default = "default_coupling")]
        coupling: f64,
    },
    Mixture {
        weights: Vec<f64>,
        components: Vec<ModelSpec>,
    },
    Table {
        probs: Vec<f64>,
    },
}

fn default_coupling() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BitKind {
    Ind,
    Odd,
    Tie,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Gibbs,
    Mh,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    #[default]
    Chisq,
    BinomialNormal,
}

/// Where the `test` command reads its observations.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObservationsSpec {
    File { file: PathBuf },
    Model { model: ModelSpec, n: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestConfig {
    /// Candidate model the observations are tested against.
    pub model: ModelSpec,
    pub ordering: String,
    pub m: u32,
    pub alpha: f64,
    pub observations: ObservationsSpec,
    #[serde(default)]
    pub method: MethodKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactDistConfig {
    pub p: ModelSpec,
    pub q: ModelSpec,
    pub ordering: String,
    pub m: u32,
}

/// One sample size or a grid of them.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SizeGrid {
    One(usize),
    Grid(Vec<usize>),
}

impl SizeGrid {
    pub fn values(&self) -> Vec<usize> {
        match self {
            SizeGrid::One(n) => vec![*n],
            SizeGrid::Grid(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerConfig {
    pub p: ModelSpec,
    pub q: ModelSpec,
    pub ordering: String,
    pub m: u32,
    pub n: SizeGrid,
    pub alpha: f64,
    pub trials: u32,
    #[serde(default)]
    pub method: MethodKind,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Power,
    Supnorm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_ind: ModelSpec,
    pub p_alt: ModelSpec,
    pub orderings: Vec<String>,
    pub weights: Vec<f64>,
    pub metric: MetricKind,
    pub m: u32,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub trials: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingDiagnoseConfig {
    pub k: u32,
    #[serde(rename = "T")]
    pub t: f64,
    pub method: KernelKind,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    pub checkpoints: Vec<u32>,
    pub n: usize,
    pub m: u32,
    pub alpha: f64,
    #[serde(default = "default_reference_multiplier")]
    pub reference_multiplier: u32,
}

fn default_reference_multiplier() -> u32 {
    100
}

/// Parse a config file into `C`, checking the schema version first. The
/// `schema` and `seed` envelope fields are stripped before the typed parse.
pub fn load_config<C: serde::de::DeserializeOwned>(path: &std::path::Path) -> CliResult<C> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{} is not valid JSON: {e}", path.display())))?;
    match value.get("schema").and_then(|s| s.as_u64()) {
        Some(v) if v == u64::from(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(CliError::Config(format!(
                "unsupported schema version {v}, expected {SCHEMA_VERSION}"
            )))
        }
        None => {
            return Err(CliError::Config(
                "config is missing the \"schema\" field".into(),
            ))
        }
    }
    if let Some(map) = value.as_object_mut() {
        map.remove("schema");
        map.remove("seed");
    }
    serde_json::from_value(value)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}
