// SPDX-License-Identifier: Apache-2.0

//! Grid geometry: masks, label maps, components and resampling.

mod grid;
mod label;
mod mask;
mod resize;

pub use grid::{BBox, GridDims};
pub use label::{connected_components, flatten, flatten_by_area, value_components, LabelMap};
pub use mask::{iou, rle_encode, runs_are_canonical, BinaryMask};
pub use resize::{
    long_side_dims, resize_bilinear, resize_image, resize_nearest, MultiBandImage, NearestResample,
};

pub(crate) use resize::resample_nearest;
