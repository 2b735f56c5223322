// SPDX-License-Identifier: Apache-2.0

use crate::CliError;
use latentbench_core::benchmark::BenchmarkSpec;
use latentbench_core::render::RenderStyle;
use latentbench_judge::JudgeConfig;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Contents of the `--config` JSON file. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlobalConfig {
    pub output_root: PathBuf,
    pub spec: BenchmarkSpec,
    pub style: RenderStyle,
    pub judge: Option<JudgeConfig>,
    /// `error`, `warn`, `info`, `debug` or `trace`.
    pub log_level: String,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        GlobalConfig {
            output_root: PathBuf::from("bench"),
            spec: BenchmarkSpec::default(),
            style: RenderStyle::default(),
            judge: None,
            log_level: "info".into(),
        }
    }
}

impl GlobalConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(GlobalConfig::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: GlobalConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        cfg.spec.validate().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        cfg.style.validate().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }
}
