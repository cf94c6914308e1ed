// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use image::{GrayImage, Luma};
use mergesam_core::{BinaryMask, ChangeMap, GridDims, MultiBandImage};

use super::{Error, Result};

pub const UNCHANGED: u8 = 0;
pub const CHANGED: u8 = 255;

fn dims_of(w: u32, h: u32) -> Result<GridDims> {
    Ok(GridDims::new(w as usize, h as usize)?)
}

/// Load an image as 3-band RGB with raw 8-bit values as floats.
pub fn read_image(path: impl AsRef<Path>) -> Result<MultiBandImage> {
    let rgb = image::open(path)?.into_rgb8();
    let dims = dims_of(rgb.width(), rgb.height())?;
    let data = rgb.into_raw().into_iter().map(f32::from).collect();
    Ok(MultiBandImage::new(dims, 3, data)?)
}

pub fn write_change_map(path: impl AsRef<Path>, map: &ChangeMap) -> Result<()> {
    let d = map.dims();
    let pixels = map
        .flags()
        .iter()
        .map(|&c| if c { CHANGED } else { UNCHANGED })
        .collect();
    let img = GrayImage::from_raw(d.width() as u32, d.height() as u32, pixels)
        .expect("buffer sized to dims");
    img.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

/// Read a 0/255 change map. Color inputs are reduced to luma first; any
/// other value is rejected.
pub fn read_change_map(path: impl AsRef<Path>) -> Result<ChangeMap> {
    let gray = image::open(path)?.into_luma8();
    let dims = dims_of(gray.width(), gray.height())?;
    let mut flags = Vec::with_capacity(dims.len());
    for (col, row, &Luma([v])) in gray.enumerate_pixels() {
        match v {
            UNCHANGED => flags.push(false),
            CHANGED => flags.push(true),
            value => {
                return Err(Error::ChangeMapValue {
                    value,
                    row: row as usize,
                    col: col as usize,
                })
            }
        }
    }
    Ok(ChangeMap::new(dims, flags)?)
}

/// Read an ignore mask: every nonzero pixel is excluded from evaluation.
pub fn read_ignore_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let gray = image::open(path)?.into_luma8();
    let dims = dims_of(gray.width(), gray.height())?;
    let bits: Vec<bool> = gray.as_raw().iter().map(|&v| v != 0).collect();
    Ok(BinaryMask::from_bitmap(dims, &bits)?)
}
