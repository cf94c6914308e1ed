// SPDX-License-Identifier: Apache-2.0

//! Unsupervised change detection for bitemporal imagery from segmentation
//! masks and image-encoder embeddings.
//!
//! The pipeline takes one mask set and one embedding grid per epoch:
//!
//! 1. [`matching::match_masks`] pairs masks across epochs one-to-one by IoU.
//! 2. [`matching::split_masks`] overlays the unmatched masks and cuts them
//!    into intersection and difference pieces, so objects that split, merge
//!    or partly change get their own analysis units.
//! 3. Every unit is scored by the mean squared difference of its average
//!    embedding in the two epochs ([`scoring::mean_embedding`],
//!    [`scoring::mse`]).
//! 4. [`scoring::otsu_threshold`] separates changed from unchanged units and
//!    the changed regions are painted into a [`ChangeMap`].
//!
//! [`baselines`] holds pixel and object-level change vector analysis and
//! [`evaluation`] the confusion-matrix metrics.
//!
//! The crate is `no_std` and needs only `alloc`; file formats and the
//! command-line tool live in the `mergesam` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
mod error;
pub mod evaluation;
pub mod matching;
pub mod raster;
pub mod scoring;

pub use error::{Error, Result};
pub use evaluation::{confusion, metrics, ConfusionCounts, MetricsReport};
pub use matching::{AnalysisUnit, ComprehensiveSet, MatchPair, ObjectMask, UnitKind};
pub use raster::{BBox, BinaryMask, GridDims, LabelMap, MultiBandImage};
pub use scoring::{run_pipeline, ChangeMap, EmbeddingGrid, PipelineConfig, PipelineOutput};
