// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use super::otsu::OtsuThreshold;
use crate::error::{Error, Result};
use crate::matching::{ComprehensiveSet, UnitKind};
use crate::raster::{resample_nearest, BinaryMask, GridDims, NearestResample};

/// Per-pixel changed/unchanged flags.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChangeMap {
    dims: GridDims,
    changed: Vec<bool>,
}

impl ChangeMap {
    pub fn unchanged(dims: GridDims) -> Self {
        Self {
            dims,
            changed: vec![false; dims.len()],
        }
    }

    pub fn new(dims: GridDims, changed: Vec<bool>) -> Result<Self> {
        if changed.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                actual: changed.len(),
            });
        }
        Ok(Self { dims, changed })
    }

    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self {
            dims: mask.dims(),
            changed: mask.to_bitmap(),
        }
    }

    #[inline]
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn flags(&self) -> &[bool] {
        &self.changed
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.changed[self.dims.index(row, col)]
    }

    pub fn changed_count(&self) -> usize {
        self.changed.iter().filter(|c| **c).count()
    }

    pub fn to_mask(&self) -> BinaryMask {
        BinaryMask::from_bitmap(self.dims, &self.changed).expect("flags match dims")
    }

    pub fn paint(&mut self, region: &BinaryMask) -> Result<()> {
        self.dims.ensure_eq(&region.dims())?;
        for (start, len) in region.spans() {
            self.changed[start..start + len].fill(true);
        }
        Ok(())
    }
}

impl NearestResample for ChangeMap {
    fn resize_nearest(&self, target: GridDims) -> Self {
        Self {
            dims: target,
            changed: resample_nearest(self.dims, &self.changed, target),
        }
    }
}

/// Changed flag per unit: score strictly above the threshold. With
/// `matched_unchanged`, matched units are never flagged.
pub fn classify_units(
    set: &ComprehensiveSet,
    scores: &[f64],
    threshold: Option<&OtsuThreshold>,
    matched_unchanged: bool,
) -> Result<Vec<bool>> {
    if scores.len() != set.units.len() {
        return Err(Error::ScoreCountMismatch {
            count: scores.len(),
            units: set.units.len(),
        });
    }
    Ok(set
        .units
        .iter()
        .zip(scores)
        .map(|(u, &s)| {
            let eligible = !(matched_unchanged && u.kind == UnitKind::Matched);
            eligible && threshold.is_some_and(|t| t.is_above(s))
        })
        .collect())
}

/// Paint every flagged unit's region. Regions of changed units may overlap;
/// any pixel covered by a changed unit is changed.
pub fn rasterize(set: &ComprehensiveSet, changed: &[bool]) -> Result<ChangeMap> {
    if changed.len() != set.units.len() {
        return Err(Error::ScoreCountMismatch {
            count: changed.len(),
            units: set.units.len(),
        });
    }
    let mut map = ChangeMap::unchanged(set.dims);
    for (u, _) in set.units.iter().zip(changed).filter(|(_, &c)| c) {
        map.paint(&u.region)?;
    }
    Ok(map)
}

/// Threshold unit scores and paint the changed units. No threshold means
/// nothing changed.
pub fn classify_and_rasterize(
    set: &ComprehensiveSet,
    scores: &[f64],
    threshold: Option<&OtsuThreshold>,
) -> Result<ChangeMap> {
    let flags = classify_units(set, scores, threshold, false)?;
    rasterize(set, &flags)
}
