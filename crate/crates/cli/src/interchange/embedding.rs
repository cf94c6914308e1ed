// SPDX-License-Identifier: Apache-2.0

//! Binary embedding grids.
//!
//! Layout (all integers `u32` little-endian):
//!
//! | offset | field    |
//! |--------|----------|
//! | 0      | `MSEM`   |
//! | 4      | version  |
//! | 8      | grid_h   |
//! | 12     | grid_w   |
//! | 16     | dim      |
//! | 20     | image_h  |
//! | 24     | image_w  |
//! | 28     | payload: `grid_h * grid_w * dim` little-endian `f32`, row-major, dim fastest |

use std::fs;
use std::path::Path;

use mergesam_core::{EmbeddingGrid, GridDims};

use super::{Error, Result};

pub const EMBEDDING_MAGIC: [u8; 4] = *b"MSEM";
pub const EMBEDDING_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 28;

pub fn encode_embedding(grid: &EmbeddingGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + grid.data().len() * 4);
    out.extend_from_slice(&EMBEDDING_MAGIC);
    for v in [
        EMBEDDING_VERSION,
        grid.grid_h() as u32,
        grid.grid_w() as u32,
        grid.dim() as u32,
        grid.image_dims().height() as u32,
        grid.image_dims().width() as u32,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for v in grid.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_embedding(bytes: &[u8]) -> Result<EmbeddingGrid> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != EMBEDDING_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let version = word(0);
    if version != EMBEDDING_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let (grid_h, grid_w, dim) = (word(1) as usize, word(2) as usize, word(3) as usize);
    let (image_h, image_w) = (word(4) as usize, word(5) as usize);
    let image = GridDims::new(image_w, image_h)
        .map_err(|e| Error::Schema(format!("embedding image dims: {e}")))?;
    if grid_h == 0 || grid_w == 0 || dim == 0 {
        return Err(Error::Schema(format!(
            "embedding grid {grid_h}x{grid_w}x{dim} has an empty axis"
        )));
    }
    let count = grid_h
        .checked_mul(grid_w)
        .and_then(|n| n.checked_mul(dim))
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Schema("embedding payload size overflows".into()))?;
    let expected = HEADER_LEN + count;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::TrailingBytes {
            extra: bytes.len() - expected,
        });
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(EmbeddingGrid::new(grid_h, grid_w, dim, image, data)?)
}

pub fn read_embedding(path: impl AsRef<Path>) -> Result<EmbeddingGrid> {
    decode_embedding(&fs::read(path)?)
}

pub fn write_embedding(path: impl AsRef<Path>, grid: &EmbeddingGrid) -> Result<()> {
    fs::write(path, encode_embedding(grid))?;
    Ok(())
}
