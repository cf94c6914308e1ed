// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use mergesam_core::raster::runs_are_canonical;
use mergesam_core::{BBox, BinaryMask, GridDims, ObjectMask};
use serde::{Deserialize, Serialize};

use super::{Error, Result};

pub const MASK_FORMAT_TAG: &str = "mergesam-masks/1";

/// Generation parameters recorded by the exporter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points_per_side: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nms_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred_iou_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability_score_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resize_long_side: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskEntry {
    pub id: u64,
    pub mask: BinaryMask,
    pub predicted_iou: Option<f64>,
    pub stability_score: Option<f64>,
}

impl MaskEntry {
    pub fn new(id: u64, mask: BinaryMask) -> Self {
        Self {
            id,
            mask,
            predicted_iou: None,
            stability_score: None,
        }
    }
}

/// A validated mask set. Masks keep file order.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSet {
    pub dims: GridDims,
    pub source: SourceMetadata,
    pub masks: Vec<MaskEntry>,
}

impl MaskSet {
    pub fn new(dims: GridDims) -> Self {
        Self {
            dims,
            source: SourceMetadata::default(),
            masks: Vec::new(),
        }
    }

    pub fn object_masks(&self) -> Vec<ObjectMask> {
        self.masks.iter().map(|m| ObjectMask::new(m.id, m.mask.clone())).collect()
    }

    pub fn binary_masks(&self) -> Vec<BinaryMask> {
        self.masks.iter().map(|m| m.mask.clone()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct FileRepr {
    format: String,
    width: usize,
    height: usize,
    #[serde(default)]
    source: SourceMetadata,
    masks: Vec<MaskRepr>,
}

#[derive(Serialize, Deserialize)]
struct MaskRepr {
    id: u64,
    area: u64,
    bbox: [usize; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicted_iou: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stability_score: Option<f64>,
    rle: Vec<u32>,
}

/// Parse and validate a mask set. The second value lists non-fatal
/// findings: run vectors that were not canonical and got normalized.
pub fn parse_mask_set(text: &str) -> Result<(MaskSet, Vec<String>)> {
    let repr: FileRepr = serde_json::from_str(text)?;
    if repr.format != MASK_FORMAT_TAG {
        return Err(Error::Schema(format!(
            "format tag {:?}, expected {:?}",
            repr.format, MASK_FORMAT_TAG
        )));
    }
    let dims = GridDims::new(repr.width, repr.height)
        .map_err(|e| Error::Schema(format!("image dims: {e}")))?;

    let mut warnings = Vec::new();
    let mut seen = HashSet::with_capacity(repr.masks.len());
    let mut masks = Vec::with_capacity(repr.masks.len());
    for m in repr.masks {
        if !seen.insert(m.id) {
            return Err(Error::DuplicateId(m.id));
        }
        let mask = BinaryMask::from_runs(dims, &m.rle).map_err(|e| Error::Mask {
            id: m.id,
            field: "rle",
            message: e.to_string(),
        })?;
        if !runs_are_canonical(&m.rle) {
            warnings.push(format!("mask {}: rle contains zero-length runs, normalized", m.id));
        }
        if mask.area() != m.area {
            return Err(Error::Mask {
                id: m.id,
                field: "area",
                message: format!("declared {} but rle decodes to {}", m.area, mask.area()),
            });
        }
        let [x, y, w, h] = m.bbox;
        let declared = BBox { x, y, w, h };
        if declared != mask.bbox() {
            let b = mask.bbox();
            return Err(Error::Mask {
                id: m.id,
                field: "bbox",
                message: format!(
                    "declared [{x}, {y}, {w}, {h}] but rle spans [{}, {}, {}, {}]",
                    b.x, b.y, b.w, b.h
                ),
            });
        }
        for (field, v) in [("predicted_iou", m.predicted_iou), ("stability_score", m.stability_score)] {
            if v.is_some_and(|v| !v.is_finite()) {
                return Err(Error::Mask {
                    id: m.id,
                    field,
                    message: "must be finite".into(),
                });
            }
        }
        masks.push(MaskEntry {
            id: m.id,
            mask,
            predicted_iou: m.predicted_iou,
            stability_score: m.stability_score,
        });
    }
    Ok((
        MaskSet {
            dims,
            source: repr.source,
            masks,
        },
        warnings,
    ))
}

pub fn read_mask_set(path: impl AsRef<Path>) -> Result<(MaskSet, Vec<String>)> {
    let text = fs::read_to_string(path)?;
    parse_mask_set(&text)
}

pub fn render_mask_set(set: &MaskSet) -> Result<String> {
    let repr = FileRepr {
        format: MASK_FORMAT_TAG.to_string(),
        width: set.dims.width(),
        height: set.dims.height(),
        source: set.source.clone(),
        masks: set
            .masks
            .iter()
            .map(|m| {
                let b = m.mask.bbox();
                MaskRepr {
                    id: m.id,
                    area: m.mask.area(),
                    bbox: [b.x, b.y, b.w, b.h],
                    predicted_iou: m.predicted_iou,
                    stability_score: m.stability_score,
                    rle: m.mask.runs().to_vec(),
                }
            })
            .collect(),
    };
    let mut text = serde_json::to_string(&repr)?;
    text.push('\n');
    Ok(text)
}

pub fn write_mask_set(path: impl AsRef<Path>, set: &MaskSet) -> Result<()> {
    for m in &set.masks {
        if m.mask.dims() != set.dims {
            return Err(Error::Mask {
                id: m.id,
                field: "rle",
                message: format!("mask grid {} differs from set grid {}", m.mask.dims(), set.dims),
            });
        }
    }
    fs::write(path, render_mask_set(set)?)?;
    Ok(())
}
