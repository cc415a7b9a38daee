use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// Optional TOML configuration; command-line flags take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub fvt: FvtConfig,
    #[serde(default)]
    pub fode: FodeConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FvtConfig {
    #[serde(rename = "fn")]
    pub function: Option<String>,
    pub alpha: Option<Vec<f64>>,
    pub q: Option<f64>,
    pub omega: Option<f64>,
    pub s_seq: Option<Vec<f64>>,
    pub t_probes: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FodeConfig {
    pub rhs: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    pub alpha: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub horizon: Option<f64>,
    pub h: Option<f64>,
    pub scan: Option<String>,
    pub window: Option<f64>,
    pub t_skip: Option<f64>,
    pub floor: Option<f64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub only: Option<Vec<String>>,
    pub tol_scale: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}
