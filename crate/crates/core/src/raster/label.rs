// SPDX-License-Identifier: Apache-2.0

//! Label maps, paint-order flattening of overlapping masks, and 4-connected
//! component extraction.

use alloc::vec;
use alloc::vec::Vec;

use super::mask::IndexRleBuilder;
use super::{BinaryMask, GridDims};
use crate::error::{Error, Result};

/// Per-pixel integer labels; 0 is background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    dims: GridDims,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(dims: GridDims, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                actual: labels.len(),
            });
        }
        Ok(Self { dims, labels })
    }

    pub fn background(dims: GridDims) -> Self {
        Self {
            dims,
            labels: vec![0; dims.len()],
        }
    }

    #[inline]
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[self.dims.index(row, col)]
    }

    /// Pixels carrying `label`.
    pub fn mask_of(&self, label: u32) -> BinaryMask {
        let mut b = IndexRleBuilder::default();
        for (i, _) in self.labels.iter().enumerate().filter(|(_, &l)| l == label) {
            b.push(i);
        }
        b.finish(self.dims)
    }

    /// Sorted, deduplicated nonzero labels that own at least one pixel.
    pub fn present_labels(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.labels.iter().copied().filter(|&l| l != 0).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Pixel count per label, indexed by label value.
    pub fn histogram(&self) -> Vec<u64> {
        let max = self.labels.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; max + 1];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }
}

/// Paint masks in list order; mask `i` writes label `i + 1`, and later
/// masks overwrite earlier ones.
pub fn flatten(dims: GridDims, masks: &[BinaryMask]) -> Result<LabelMap> {
    let order: Vec<usize> = (0..masks.len()).collect();
    paint(dims, masks, &order)
}

/// Like [`flatten`] but paints in descending area order (ties keep list
/// order), so small masks survive inside the large masks that contain
/// them. Labels still refer to positions in `masks`.
pub fn flatten_by_area(dims: GridDims, masks: &[BinaryMask]) -> Result<LabelMap> {
    let mut order: Vec<usize> = (0..masks.len()).collect();
    order.sort_by(|&a, &b| masks[b].area().cmp(&masks[a].area()));
    paint(dims, masks, &order)
}

fn paint(dims: GridDims, masks: &[BinaryMask], order: &[usize]) -> Result<LabelMap> {
    for m in masks {
        dims.ensure_eq(&m.dims())?;
    }
    if masks.len() >= u32::MAX as usize {
        return Err(Error::InvalidParameter {
            name: "masks",
            reason: "too many masks to label",
        });
    }
    let mut labels = vec![0u32; dims.len()];
    for &i in order {
        let label = i as u32 + 1;
        for (start, len) in masks[i].spans() {
            labels[start..start + len].fill(label);
        }
    }
    Ok(LabelMap { dims, labels })
}

/// Split a mask into its 4-connected components, largest first. Equal
/// areas are ordered by the scan position of each component's first pixel.
pub fn connected_components(mask: &BinaryMask) -> Vec<BinaryMask> {
    let values: Vec<u64> = mask.to_bitmap().into_iter().map(u64::from).collect();
    let mut comps: Vec<BinaryMask> = value_components(mask.dims(), &values, 0)
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    comps.sort_by_key(|m| core::cmp::Reverse(m.area()));
    comps
}

/// 4-connected regions of equal value in `values`, skipping `background`.
///
/// Regions come out in scan order of their first pixel, each paired with
/// its value.
pub fn value_components(dims: GridDims, values: &[u64], background: u64) -> Vec<(u64, BinaryMask)> {
    assert_eq!(values.len(), dims.len(), "value grid does not match dims");
    let (w, h) = (dims.width(), dims.height());
    let mut comp = vec![u32::MAX; dims.len()];
    let mut seeds: Vec<u64> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();

    for start in 0..dims.len() {
        let v = values[start];
        if v == background || comp[start] != u32::MAX {
            continue;
        }
        let id = seeds.len() as u32;
        seeds.push(v);
        comp[start] = id;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (r, c) = (p / w, p % w);
            let mut visit = |q: usize| {
                if comp[q] == u32::MAX && values[q] == v {
                    comp[q] = id;
                    stack.push(q);
                }
            };
            if c > 0 {
                visit(p - 1);
            }
            if c + 1 < w {
                visit(p + 1);
            }
            if r > 0 {
                visit(p - w);
            }
            if r + 1 < h {
                visit(p + w);
            }
        }
    }

    let mut builders: Vec<IndexRleBuilder> = (0..seeds.len()).map(|_| IndexRleBuilder::default()).collect();
    for (i, &c) in comp.iter().enumerate() {
        if c != u32::MAX {
            builders[c as usize].push(i);
        }
    }
    seeds
        .into_iter()
        .zip(builders)
        .map(|(v, b)| (v, b.finish(dims)))
        .collect()
}
