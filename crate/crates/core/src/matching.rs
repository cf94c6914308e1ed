// SPDX-License-Identifier: Apache-2.0

//! Cross-epoch mask matching and overlay splitting.
//!
//! Masks from the two epochs are first paired one-to-one by IoU. Whatever
//! is left unmatched is flattened per epoch and overlaid; every distinct
//! `(t1 label, t2 label)` combination, cut into 4-connected pieces, becomes
//! its own analysis unit. Matched pairs and split pieces together form the
//! comprehensive set that gets scored.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::raster::{flatten_by_area, value_components, BinaryMask, GridDims};

/// A segmentation mask with the id it carries in its mask set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectMask {
    pub id: u64,
    pub mask: BinaryMask,
}

impl ObjectMask {
    pub fn new(id: u64, mask: BinaryMask) -> Self {
        Self { id, mask }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchPair {
    pub id_t1: u64,
    pub id_t2: u64,
    /// Positions of the two masks in the input lists.
    pub index_t1: usize,
    pub index_t2: usize,
    pub iou: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchOutcome {
    pub pairs: Vec<MatchPair>,
    pub leftover_t1: Vec<ObjectMask>,
    pub leftover_t2: Vec<ObjectMask>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Matched,
    SplitBoth,
    OnlyT1,
    OnlyT2,
}

impl UnitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            UnitKind::Matched => "matched",
            UnitKind::SplitBoth => "split_both",
            UnitKind::OnlyT1 => "only_t1",
            UnitKind::OnlyT2 => "only_t2",
        }
    }

    /// The kind this unit would have with the epochs exchanged.
    pub fn swapped(&self) -> Self {
        match self {
            UnitKind::OnlyT1 => UnitKind::OnlyT2,
            UnitKind::OnlyT2 => UnitKind::OnlyT1,
            k => *k,
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisUnit {
    pub region: BinaryMask,
    pub kind: UnitKind,
    /// Id of the contributing t1 mask, if any.
    pub source_t1: Option<u64>,
    /// Id of the contributing t2 mask, if any.
    pub source_t2: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComprehensiveSet {
    pub dims: GridDims,
    pub units: Vec<AnalysisUnit>,
}

impl ComprehensiveSet {
    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

fn check_set(dims: GridDims, set: &[ObjectMask]) -> Result<()> {
    let mut ids: Vec<u64> = Vec::with_capacity(set.len());
    for m in set {
        dims.ensure_eq(&m.mask.dims())?;
        ids.push(m.id);
    }
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateId { id: w[0] });
    }
    Ok(())
}

/// Greedy one-to-one matching by descending IoU.
///
/// Every cross-epoch pair with `iou >= t_iou` is a candidate. Candidates are
/// visited from highest IoU down (equal IoU by ascending `(id_t1, id_t2)`)
/// and accepted when neither mask has been taken yet.
pub fn match_masks(
    dims: GridDims,
    set_t1: &[ObjectMask],
    set_t2: &[ObjectMask],
    t_iou: f64,
) -> Result<MatchOutcome> {
    if !(t_iou > 0.0 && t_iou <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "t_iou",
            reason: "must lie in (0, 1]",
        });
    }
    check_set(dims, set_t1)?;
    check_set(dims, set_t2)?;

    let boxes2: Vec<_> = set_t2.iter().map(|m| m.mask.bbox()).collect();
    let mut candidates: Vec<MatchPair> = Vec::new();
    for (i, a) in set_t1.iter().enumerate() {
        let box_a = a.mask.bbox();
        for (j, b) in set_t2.iter().enumerate() {
            if !box_a.intersects(&boxes2[j]) {
                continue;
            }
            let iou = a.mask.iou(&b.mask)?;
            if iou >= t_iou {
                candidates.push(MatchPair {
                    id_t1: a.id,
                    id_t2: b.id,
                    index_t1: i,
                    index_t2: j,
                    iou,
                });
            }
        }
    }
    candidates.sort_by(|x, y| {
        y.iou
            .partial_cmp(&x.iou)
            .unwrap_or(Ordering::Equal)
            .then(x.id_t1.cmp(&y.id_t1))
            .then(x.id_t2.cmp(&y.id_t2))
    });

    let mut taken1 = alloc::vec![false; set_t1.len()];
    let mut taken2 = alloc::vec![false; set_t2.len()];
    let mut pairs = Vec::new();
    for c in candidates {
        if taken1[c.index_t1] || taken2[c.index_t2] {
            continue;
        }
        taken1[c.index_t1] = true;
        taken2[c.index_t2] = true;
        pairs.push(c);
    }

    let leftovers = |set: &[ObjectMask], taken: &[bool]| -> Vec<ObjectMask> {
        set.iter()
            .zip(taken)
            .filter(|(_, &t)| !t)
            .map(|(m, _)| m.clone())
            .collect()
    };
    Ok(MatchOutcome {
        leftover_t1: leftovers(set_t1, &taken1),
        leftover_t2: leftovers(set_t2, &taken2),
        pairs,
    })
}

/// Overlay-partition the unmatched masks of both epochs.
///
/// Each epoch is flattened in descending-area paint order. Pixels are keyed
/// by their `(t1 label, t2 label)` pair; every nonzero key region is split
/// into 4-connected components and components of at least `min_area`
/// pixels become units. Units are ordered by the scan position of their
/// first pixel.
pub fn split_masks(
    dims: GridDims,
    leftover_t1: &[ObjectMask],
    leftover_t2: &[ObjectMask],
    min_area: u64,
) -> Result<Vec<AnalysisUnit>> {
    check_set(dims, leftover_t1)?;
    check_set(dims, leftover_t2)?;
    if leftover_t1.is_empty() && leftover_t2.is_empty() {
        return Ok(Vec::new());
    }
    let masks1: Vec<BinaryMask> = leftover_t1.iter().map(|m| m.mask.clone()).collect();
    let masks2: Vec<BinaryMask> = leftover_t2.iter().map(|m| m.mask.clone()).collect();
    let l1 = flatten_by_area(dims, &masks1)?;
    let l2 = flatten_by_area(dims, &masks2)?;

    let keys: Vec<u64> = l1
        .labels()
        .iter()
        .zip(l2.labels())
        .map(|(&a, &b)| ((a as u64) << 32) | b as u64)
        .collect();

    let units = value_components(dims, &keys, 0)
        .into_iter()
        .filter(|(_, region)| region.area() >= min_area.max(1))
        .map(|(key, region)| {
            let a = (key >> 32) as usize;
            let b = (key & 0xffff_ffff) as usize;
            let source_t1 = (a != 0).then(|| leftover_t1[a - 1].id);
            let source_t2 = (b != 0).then(|| leftover_t2[b - 1].id);
            let kind = match (source_t1, source_t2) {
                (Some(_), Some(_)) => UnitKind::SplitBoth,
                (Some(_), None) => UnitKind::OnlyT1,
                _ => UnitKind::OnlyT2,
            };
            AnalysisUnit {
                region,
                kind,
                source_t1,
                source_t2,
            }
        })
        .collect();
    Ok(units)
}

/// Turn each matched pair into a unit covering the union of both masks and
/// append the split units after them.
pub fn build_comprehensive_set(
    dims: GridDims,
    set_t1: &[ObjectMask],
    set_t2: &[ObjectMask],
    pairs: &[MatchPair],
    split_units: Vec<AnalysisUnit>,
) -> Result<ComprehensiveSet> {
    let mut units = Vec::with_capacity(pairs.len() + split_units.len());
    for p in pairs {
        let a = set_t1.get(p.index_t1).ok_or(Error::InvalidParameter {
            name: "pairs",
            reason: "t1 index out of range",
        })?;
        let b = set_t2.get(p.index_t2).ok_or(Error::InvalidParameter {
            name: "pairs",
            reason: "t2 index out of range",
        })?;
        dims.ensure_eq(&a.mask.dims())?;
        units.push(AnalysisUnit {
            region: a.mask.union(&b.mask)?,
            kind: UnitKind::Matched,
            source_t1: Some(a.id),
            source_t2: Some(b.id),
        });
    }
    for u in &split_units {
        dims.ensure_eq(&u.region.dims())?;
    }
    units.extend(split_units);
    Ok(ComprehensiveSet { dims, units })
}

/// Matching, splitting and assembly in one call.
pub fn comprehensive_set(
    dims: GridDims,
    set_t1: &[ObjectMask],
    set_t2: &[ObjectMask],
    t_iou: f64,
    min_area: u64,
) -> Result<(ComprehensiveSet, Vec<MatchPair>)> {
    let outcome = match_masks(dims, set_t1, set_t2, t_iou)?;
    let split = split_masks(dims, &outcome.leftover_t1, &outcome.leftover_t2, min_area)?;
    let set = build_comprehensive_set(dims, set_t1, set_t2, &outcome.pairs, split)?;
    Ok((set, outcome.pairs))
}
