// SPDX-License-Identifier: Apache-2.0

//! Multi-band rasters plus bilinear and nearest-neighbor resampling.

use alloc::vec::Vec;

use super::{GridDims, LabelMap};
use crate::error::{Error, Result};

/// Pixel-interleaved multi-band image: `data[(row * width + col) * bands + b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBandImage {
    dims: GridDims,
    bands: usize,
    data: Vec<f32>,
}

impl MultiBandImage {
    pub fn new(dims: GridDims, bands: usize, data: Vec<f32>) -> Result<Self> {
        if bands == 0 {
            return Err(Error::InvalidParameter {
                name: "bands",
                reason: "must be at least 1",
            });
        }
        if data.len() != dims.len() * bands {
            return Err(Error::LengthMismatch {
                expected: dims.len() * bands,
                actual: data.len(),
            });
        }
        Ok(Self { dims, bands, data })
    }

    #[inline]
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn bands(&self) -> usize {
        self.bands
    }

    #[inline]
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn pixel(&self, index: usize) -> &[f32] {
        &self.data[index * self.bands..(index + 1) * self.bands]
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, band: usize) -> f32 {
        self.data[self.dims.index(row, col) * self.bands + band]
    }
}

/// Target dims that scale the longest side to `long_side`, preserving
/// aspect ratio. The short side is rounded half-up and clamped to 1.
pub fn long_side_dims(dims: GridDims, long_side: usize) -> Result<GridDims> {
    if long_side == 0 {
        return Err(Error::InvalidParameter {
            name: "long_side",
            reason: "must be at least 1",
        });
    }
    let (w, h) = (dims.width() as u128, dims.height() as u128);
    let l = long_side as u128;
    let scale = |short: u128, long: u128| ((2 * short * l + long) / (2 * long)).max(1) as usize;
    if w >= h {
        GridDims::new(long_side, scale(h, w))
    } else {
        GridDims::new(scale(w, h), long_side)
    }
}

/// Resize so the longest side equals `long_side`, bilinear per band.
pub fn resize_image(img: &MultiBandImage, long_side: usize) -> Result<MultiBandImage> {
    let target = long_side_dims(img.dims, long_side)?;
    Ok(resize_bilinear(img, target))
}

/// Bilinear resampling with pixel-center alignment; sample coordinates are
/// clamped at the borders. Resizing to the same dims is the identity.
pub fn resize_bilinear(img: &MultiBandImage, target: GridDims) -> MultiBandImage {
    if target == img.dims {
        return img.clone();
    }
    let (sw, sh) = (img.dims.width(), img.dims.height());
    let (dw, dh) = (target.width(), target.height());
    let xs: Vec<(usize, usize, f32)> = (0..dw).map(|x| sample_axis(x, sw, dw)).collect();
    let ys: Vec<(usize, usize, f32)> = (0..dh).map(|y| sample_axis(y, sh, dh)).collect();
    let bands = img.bands;
    let mut data = Vec::with_capacity(target.len() * bands);
    for &(y0, y1, fy) in &ys {
        for &(x0, x1, fx) in &xs {
            for b in 0..bands {
                let p00 = img.data[(y0 * sw + x0) * bands + b];
                let p01 = img.data[(y0 * sw + x1) * bands + b];
                let p10 = img.data[(y1 * sw + x0) * bands + b];
                let p11 = img.data[(y1 * sw + x1) * bands + b];
                let top = p00 + (p01 - p00) * fx;
                let bottom = p10 + (p11 - p10) * fx;
                data.push(top + (bottom - top) * fy);
            }
        }
    }
    MultiBandImage {
        dims: target,
        bands,
        data,
    }
}

fn sample_axis(i: usize, src: usize, dst: usize) -> (usize, usize, f32) {
    let s = ((i as f64 + 0.5) * src as f64 / dst as f64 - 0.5).clamp(0.0, (src - 1) as f64);
    let i0 = s as usize;
    let i1 = (i0 + 1).min(src - 1);
    (i0, i1, (s - i0 as f64) as f32)
}

/// Source index sampled for destination index `i` when resampling an axis
/// of length `src` to `dst`: `floor((i + 0.5) * src / dst)`.
#[inline]
pub(crate) fn nearest_source(i: usize, src: usize, dst: usize) -> usize {
    (((2 * i + 1) as u128 * src as u128) / (2 * dst as u128)) as usize
}

pub(crate) fn resample_nearest<T: Copy>(src_dims: GridDims, data: &[T], target: GridDims) -> Vec<T> {
    let (sw, sh) = (src_dims.width(), src_dims.height());
    let (dw, dh) = (target.width(), target.height());
    let cols: Vec<usize> = (0..dw).map(|x| nearest_source(x, sw, dw)).collect();
    let mut out = Vec::with_capacity(target.len());
    for y in 0..dh {
        let row = nearest_source(y, sh, dh) * sw;
        out.extend(cols.iter().map(|&c| data[row + c]));
    }
    out
}

/// Maps that can be resampled by nearest neighbor without altering values.
pub trait NearestResample: Sized {
    fn resize_nearest(&self, target: GridDims) -> Self;
}

impl NearestResample for LabelMap {
    fn resize_nearest(&self, target: GridDims) -> Self {
        let labels = resample_nearest(self.dims(), self.labels(), target);
        LabelMap::new(target, labels).expect("resampled length matches target")
    }
}

pub fn resize_nearest<M: NearestResample>(map: &M, target: GridDims) -> M {
    map.resize_nearest(target)
}
