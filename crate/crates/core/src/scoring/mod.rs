// SPDX-License-Identifier: Apache-2.0

//! Unit scoring, thresholding and the end-to-end pipeline.

mod change;
mod embedding;
mod otsu;
mod pipeline;

pub use change::{classify_and_rasterize, classify_units, rasterize, ChangeMap};
pub use embedding::{mean_embedding, mse, EmbeddingGrid};
pub use otsu::{bin_edge, otsu_threshold, otsu_threshold_weighted, OtsuThreshold, MIN_SCORE_SPREAD};
pub use pipeline::{
    run_pipeline, unit_score, PipelineConfig, PipelineOutput, UnitScore, DEFAULT_MIN_AREA,
    DEFAULT_OTSU_BINS, DEFAULT_T_IOU,
};
