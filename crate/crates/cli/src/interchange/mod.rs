// SPDX-License-Identifier: Apache-2.0

//! File formats shared with the mask/embedding exporter.
//!
//! * mask sets: JSON text tagged `mergesam-masks/1`, row-major RLE per mask
//! * embedding grids: little-endian binary with an `MSEM` header
//! * change maps: single-channel 8-bit PNG, 0 = unchanged, 255 = changed

mod embedding;
mod masks;
mod raster;

use std::io;

pub use embedding::{decode_embedding, encode_embedding, read_embedding, write_embedding, EMBEDDING_MAGIC, EMBEDDING_VERSION, HEADER_LEN};
pub use masks::{parse_mask_set, read_mask_set, render_mask_set, write_mask_set, MaskEntry, MaskSet, SourceMetadata, MASK_FORMAT_TAG};
pub use raster::{read_change_map, read_ignore_mask, read_image, write_change_map, CHANGED, UNCHANGED};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("image codec: {0}")]
    Image(#[from] image::ImageError),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("mask {id}: field `{field}`: {message}")]
    Mask {
        id: u64,
        field: &'static str,
        message: String,
    },

    #[error("mask id {0} appears more than once")]
    DuplicateId(u64),

    #[error("bad magic {0:?}, expected \"MSEM\"")]
    BadMagic([u8; 4]),

    #[error("unsupported embedding version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("{extra} unexpected trailing bytes after payload")]
    TrailingBytes { extra: usize },

    #[error("change map pixel value {value} at ({row}, {col}) is neither 0 nor 255")]
    ChangeMapValue { value: u8, row: usize, col: usize },

    #[error(transparent)]
    Core(#[from] mergesam_core::Error),
}

impl Error {
    /// I/O failures versus content that failed validation.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Image(image::ImageError::IoError(_)))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
