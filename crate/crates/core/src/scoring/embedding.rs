// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GridDims};

/// A `grid_h x grid_w x dim` feature array covering an image of
/// `image` dims. Values are stored row-major with the feature axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingGrid {
    grid_h: usize,
    grid_w: usize,
    dim: usize,
    image: GridDims,
    data: Vec<f32>,
}

impl EmbeddingGrid {
    pub fn new(grid_h: usize, grid_w: usize, dim: usize, image: GridDims, data: Vec<f32>) -> Result<Self> {
        if grid_h == 0 || grid_w == 0 || dim == 0 {
            return Err(Error::InvalidParameter {
                name: "embedding shape",
                reason: "grid_h, grid_w and dim must all be at least 1",
            });
        }
        let expected = grid_h
            .checked_mul(grid_w)
            .and_then(|n| n.checked_mul(dim))
            .ok_or(Error::InvalidParameter {
                name: "embedding shape",
                reason: "element count overflows",
            })?;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "embedding values",
                reason: "must be finite",
            });
        }
        Ok(Self {
            grid_h,
            grid_w,
            dim,
            image,
            data,
        })
    }

    /// A grid whose every cell holds `value`.
    pub fn constant(grid_h: usize, grid_w: usize, image: GridDims, value: &[f32]) -> Result<Self> {
        let data = value.iter().copied().cycle().take(grid_h * grid_w * value.len()).collect();
        Self::new(grid_h, grid_w, value.len(), image, data)
    }

    pub fn grid_h(&self) -> usize {
        self.grid_h
    }

    pub fn grid_w(&self) -> usize {
        self.grid_w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image_dims(&self) -> GridDims {
        self.image
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn cell(&self, row: usize, col: usize) -> &[f32] {
        let start = (row * self.grid_w + col) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn cell_mut(&mut self, row: usize, col: usize) -> &mut [f32] {
        let start = (row * self.grid_w + col) * self.dim;
        &mut self.data[start..start + self.dim]
    }
}

/// Average feature vector over the pixels of `region`.
///
/// Pixel `(r, c)` reads cell `(floor(r * grid_h / H), floor(c * grid_w / W))`,
/// so the result is the cell vectors weighted by how many region pixels
/// fall in each cell.
pub fn mean_embedding(region: &BinaryMask, grid: &EmbeddingGrid) -> Result<Vec<f64>> {
    grid.image.ensure_eq(&region.dims())?;
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let (w, h) = (grid.image.width(), grid.image.height());
    let col_cell: Vec<usize> = (0..w).map(|c| c * grid.grid_w / w).collect();
    let mut counts = vec![0u64; grid.grid_h * grid.grid_w];
    for (start, len) in region.spans() {
        let mut p = start;
        let end = start + len;
        while p < end {
            let row = p / w;
            let row_end = end.min((row + 1) * w);
            let base = (row * grid.grid_h / h) * grid.grid_w;
            for c in (p - row * w)..(row_end - row * w) {
                counts[base + col_cell[c]] += 1;
            }
            p = row_end;
        }
    }

    let mut acc = vec![0f64; grid.dim];
    for (cell, &n) in counts.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let v = &grid.data[cell * grid.dim..(cell + 1) * grid.dim];
        for (a, &x) in acc.iter_mut().zip(v) {
            *a += n as f64 * x as f64;
        }
    }
    let total = region.area() as f64;
    acc.iter_mut().for_each(|a| *a /= total);
    Ok(acc)
}

/// Mean squared difference, `(1/D) * sum (a_i - b_i)^2`.
pub fn mse(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::VectorLenMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.len() as f64)
}
