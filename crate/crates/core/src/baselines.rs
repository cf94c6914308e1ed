// SPDX-License-Identifier: Apache-2.0

//! Change vector analysis baselines.
//!
//! `cva_map` thresholds the per-pixel spectral difference magnitude with
//! Otsu. `cva_sam` averages the magnitude inside segmentation regions taken
//! from both epochs and thresholds the region means instead; pixels no
//! region covers keep their pixelwise decision.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{flatten_by_area, BinaryMask, GridDims, MultiBandImage};
use crate::scoring::{otsu_threshold, ChangeMap, DEFAULT_OTSU_BINS};

/// Non-negative per-pixel change magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeMap {
    dims: GridDims,
    values: Vec<f64>,
}

impl MagnitudeMap {
    pub fn new(dims: GridDims, values: Vec<f64>) -> Result<Self> {
        if values.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidParameter {
                name: "magnitude",
                reason: "values must be finite and non-negative",
            });
        }
        Ok(Self { dims, values })
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CvaOptions {
    /// Standardize each band of each image to zero mean, unit variance first.
    pub normalize: bool,
    pub otsu_bins: usize,
}

impl Default for CvaOptions {
    fn default() -> Self {
        Self {
            normalize: false,
            otsu_bins: DEFAULT_OTSU_BINS,
        }
    }
}

fn band_stats(img: &MultiBandImage) -> Vec<(f64, f64)> {
    let n = img.dims().len() as f64;
    (0..img.bands())
        .map(|b| {
            let vals = img.data().iter().skip(b).step_by(img.bands()).map(|&v| v as f64);
            let mean = vals.clone().sum::<f64>() / n;
            let var = vals.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let sd = libm::sqrt(var);
            (mean, if sd > 0.0 { sd } else { 1.0 })
        })
        .collect()
}

/// `m(p) = sqrt(sum_b (img2_b(p) - img1_b(p))^2)`.
pub fn cva_magnitude(img1: &MultiBandImage, img2: &MultiBandImage, normalize: bool) -> Result<MagnitudeMap> {
    img1.dims().ensure_eq(&img2.dims())?;
    if img1.bands() != img2.bands() {
        return Err(Error::BandMismatch {
            expected: img1.bands(),
            actual: img2.bands(),
        });
    }
    let bands = img1.bands();
    let (s1, s2) = if normalize {
        (band_stats(img1), band_stats(img2))
    } else {
        (vec![(0.0, 1.0); bands], vec![(0.0, 1.0); bands])
    };
    let values = img1
        .data()
        .chunks_exact(bands)
        .zip(img2.data().chunks_exact(bands))
        .map(|(p1, p2)| {
            let sq: f64 = (0..bands)
                .map(|b| {
                    let a = (p1[b] as f64 - s1[b].0) / s1[b].1;
                    let c = (p2[b] as f64 - s2[b].0) / s2[b].1;
                    (c - a) * (c - a)
                })
                .sum();
            libm::sqrt(sq)
        })
        .collect();
    Ok(MagnitudeMap {
        dims: img1.dims(),
        values,
    })
}

/// Pixelwise Otsu over all magnitudes; changed iff above the threshold.
pub fn cva_map(magnitude: &MagnitudeMap, bins: usize) -> ChangeMap {
    let changed = match otsu_threshold(&magnitude.values, bins) {
        Some(t) => magnitude.values.iter().map(|&m| t.is_above(m)).collect(),
        None => vec![false; magnitude.dims.len()],
    };
    ChangeMap::new(magnitude.dims, changed).expect("one flag per pixel")
}

/// Classic CVA from two images.
pub fn cva(img1: &MultiBandImage, img2: &MultiBandImage, opts: &CvaOptions) -> Result<ChangeMap> {
    let m = cva_magnitude(img1, img2, opts.normalize)?;
    Ok(cva_map(&m, opts.otsu_bins))
}

/// Object-level CVA over regions from both epochs' masks.
///
/// All masks are flattened together in descending-area paint order. Each
/// label owning at least `min_area` pixels is a region scored by its mean
/// magnitude; Otsu runs over those region means. Pixels outside every
/// kept region take the pixelwise [`cva_map`] decision.
pub fn cva_sam(
    magnitude: &MagnitudeMap,
    masks_t1: &[BinaryMask],
    masks_t2: &[BinaryMask],
    min_area: u64,
    bins: usize,
) -> Result<ChangeMap> {
    let dims = magnitude.dims;
    let all: Vec<BinaryMask> = masks_t1.iter().chain(masks_t2).cloned().collect();
    let labels = flatten_by_area(dims, &all)?;

    let mut count = vec![0u64; all.len() + 1];
    let mut sum = vec![0f64; all.len() + 1];
    for (&l, &m) in labels.labels().iter().zip(&magnitude.values) {
        count[l as usize] += 1;
        sum[l as usize] += m;
    }
    let kept: Vec<usize> = (1..=all.len()).filter(|&l| count[l] > 0 && count[l] >= min_area.max(1)).collect();
    let means: Vec<f64> = kept.iter().map(|&l| sum[l] / count[l] as f64).collect();
    let threshold = otsu_threshold(&means, bins);

    let mut region_changed = vec![None; all.len() + 1];
    for (&l, &mean) in kept.iter().zip(&means) {
        region_changed[l] = Some(threshold.is_some_and(|t| t.is_above(mean)));
    }
    let fallback = cva_map(magnitude, bins);
    let changed = labels
        .labels()
        .iter()
        .zip(fallback.flags())
        .map(|(&l, &pixel)| region_changed[l as usize].unwrap_or(pixel))
        .collect();
    ChangeMap::new(dims, changed)
}
