// SPDX-License-Identifier: Apache-2.0

//! Effective run parameters: defaults, then an optional TOML file, then
//! command-line flags.

use std::fs;
use std::path::Path;

use mergesam_core::scoring::{DEFAULT_MIN_AREA, DEFAULT_OTSU_BINS, DEFAULT_T_IOU};
use mergesam_core::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_RESIZE_LONG_SIDE: usize = 1600;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub t_iou: f64,
    pub min_area: u64,
    pub otsu_bins: usize,
    pub matched_unchanged: bool,
    pub area_weighted: bool,
    pub resize_long_side: usize,
    /// Per-band standardization before CVA.
    pub normalize: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            t_iou: DEFAULT_T_IOU,
            min_area: DEFAULT_MIN_AREA,
            otsu_bins: DEFAULT_OTSU_BINS,
            matched_unchanged: false,
            area_weighted: false,
            resize_long_side: DEFAULT_RESIZE_LONG_SIDE,
            normalize: false,
        }
    }
}

/// Partial settings, as read from a config file or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub t_iou: Option<f64>,
    pub min_area: Option<u64>,
    pub otsu_bins: Option<usize>,
    pub matched_unchanged: Option<bool>,
    pub area_weighted: Option<bool>,
    pub resize_long_side: Option<usize>,
    pub normalize: Option<bool>,
}

impl ConfigOverrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::from_toml_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$( if let Some(v) = self.$f { cfg.$f = v; } )*};
        }
        set!(t_iou, min_area, otsu_bins, matched_unchanged, area_weighted, resize_long_side, normalize);
    }
}

impl RunConfig {
    /// Defaults, overridden by the file (if any), overridden by flags.
    pub fn resolve(file: Option<&Path>, flags: &ConfigOverrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            ConfigOverrides::from_file(path)?.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.pipeline()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        if self.resize_long_side < 1 {
            return Err(CliError::Config("resize_long_side must be at least 1".into()));
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            t_iou: self.t_iou,
            min_area: self.min_area,
            otsu_bins: self.otsu_bins,
            matched_unchanged: self.matched_unchanged,
            area_weighted: self.area_weighted,
        }
    }
}
