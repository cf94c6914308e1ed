// SPDX-License-Identifier: Apache-2.0

use alloc::vec::Vec;

use super::change::{classify_units, rasterize, ChangeMap};
use super::embedding::{mean_embedding, mse, EmbeddingGrid};
use super::otsu::{otsu_threshold, otsu_threshold_weighted, OtsuThreshold};
use crate::error::{Error, Result};
use crate::matching::{comprehensive_set, ComprehensiveSet, MatchPair, ObjectMask, UnitKind};
use crate::raster::GridDims;

/// Matching IoU threshold used unless configured otherwise.
pub const DEFAULT_T_IOU: f64 = 0.75;
pub const DEFAULT_MIN_AREA: u64 = 8;
pub const DEFAULT_OTSU_BINS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub t_iou: f64,
    /// Split units smaller than this many pixels are dropped.
    pub min_area: u64,
    pub otsu_bins: usize,
    /// Treat matched pairs as unchanged instead of scoring them.
    pub matched_unchanged: bool,
    /// Weight each unit's score by its pixel area when thresholding.
    pub area_weighted: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            t_iou: DEFAULT_T_IOU,
            min_area: DEFAULT_MIN_AREA,
            otsu_bins: DEFAULT_OTSU_BINS,
            matched_unchanged: false,
            area_weighted: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_iou > 0.0 && self.t_iou <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "t_iou",
                reason: "must lie in (0, 1]",
            });
        }
        if self.min_area < 1 {
            return Err(Error::InvalidParameter {
                name: "min_area",
                reason: "must be at least 1",
            });
        }
        if self.otsu_bins < 2 {
            return Err(Error::InvalidParameter {
                name: "otsu_bins",
                reason: "must be at least 2",
            });
        }
        Ok(())
    }
}

/// One row of the audit table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitScore {
    pub unit: usize,
    pub kind: UnitKind,
    pub area: u64,
    pub score: f64,
    pub changed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub change_map: ChangeMap,
    pub units: ComprehensiveSet,
    pub pairs: Vec<MatchPair>,
    pub scores: Vec<UnitScore>,
    pub threshold: Option<OtsuThreshold>,
}

/// Embedding MSE of one unit between the two epochs.
pub fn unit_score(region: &crate::raster::BinaryMask, emb_t1: &EmbeddingGrid, emb_t2: &EmbeddingGrid) -> Result<f64> {
    let a = mean_embedding(region, emb_t1)?;
    let b = mean_embedding(region, emb_t2)?;
    mse(&a, &b)
}

/// Full change detection: match, split, score each unit by the MSE of its
/// mean embeddings, threshold with Otsu and paint the changed units.
pub fn run_pipeline(
    dims: GridDims,
    masks_t1: &[ObjectMask],
    masks_t2: &[ObjectMask],
    emb_t1: &EmbeddingGrid,
    emb_t2: &EmbeddingGrid,
    config: &PipelineConfig,
) -> Result<PipelineOutput> {
    config.validate()?;
    dims.ensure_eq(&emb_t1.image_dims())?;
    dims.ensure_eq(&emb_t2.image_dims())?;
    if emb_t1.dim() != emb_t2.dim() {
        return Err(Error::VectorLenMismatch {
            left: emb_t1.dim(),
            right: emb_t2.dim(),
        });
    }

    let (units, pairs) = comprehensive_set(dims, masks_t1, masks_t2, config.t_iou, config.min_area)?;
    let raw: Vec<f64> = units
        .units
        .iter()
        .map(|u| unit_score(&u.region, emb_t1, emb_t2))
        .collect::<Result<_>>()?;

    let eligible: Vec<usize> = units
        .units
        .iter()
        .enumerate()
        .filter(|(_, u)| !(config.matched_unchanged && u.kind == UnitKind::Matched))
        .map(|(i, _)| i)
        .collect();
    let eligible_scores: Vec<f64> = eligible.iter().map(|&i| raw[i]).collect();
    let threshold = if config.area_weighted {
        let weights: Vec<f64> = eligible.iter().map(|&i| units.units[i].region.area() as f64).collect();
        otsu_threshold_weighted(&eligible_scores, &weights, config.otsu_bins)
    } else {
        otsu_threshold(&eligible_scores, config.otsu_bins)
    };

    let flags = classify_units(&units, &raw, threshold.as_ref(), config.matched_unchanged)?;
    let change_map = rasterize(&units, &flags)?;
    let scores = units
        .units
        .iter()
        .enumerate()
        .map(|(i, u)| UnitScore {
            unit: i,
            kind: u.kind,
            area: u.region.area(),
            score: raw[i],
            changed: flags[i],
        })
        .collect();

    Ok(PipelineOutput {
        change_map,
        units,
        pairs,
        scores,
        threshold,
    })
}
