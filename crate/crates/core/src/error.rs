// SPDX-License-Identifier: Apache-2.0

use crate::raster::GridDims;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    EmptyGrid { width: usize, height: usize },

    #[error("grid {width}x{height} is too large")]
    GridTooLarge { width: usize, height: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimsMismatch { expected: GridDims, actual: GridDims },

    #[error("buffer length {actual} does not match expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("run lengths sum to {actual}, expected {expected} pixels")]
    RunSumMismatch { expected: u64, actual: u64 },

    #[error("band count mismatch: {expected} vs {actual}")]
    BandMismatch { expected: usize, actual: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    VectorLenMismatch { left: usize, right: usize },

    #[error("mask id {id} appears more than once")]
    DuplicateId { id: u64 },

    #[error("region is empty")]
    EmptyRegion,

    #[error("{count} scores supplied for {units} analysis units")]
    ScoreCountMismatch { count: usize, units: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("no pixels to evaluate")]
    NoPixels,
}

pub type Result<T> = core::result::Result<T, Error>;
