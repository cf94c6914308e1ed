// SPDX-License-Identifier: Apache-2.0

use core::fmt;

use crate::error::{Error, Result};

/// Width and height of a pixel grid. Both are at least 1 and the pixel
/// count fits in a `u32`, so run lengths never overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridDims {
    width: usize,
    height: usize,
}

impl GridDims {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyGrid { width, height });
        }
        match width.checked_mul(height) {
            Some(n) if n <= u32::MAX as usize => Ok(Self { width, height }),
            _ => Err(Error::GridTooLarge { width, height }),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels, `width * height`.
    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }

    /// Always false; kept alongside `len` for clippy.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.width + col
    }

    #[inline]
    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index / self.width, index % self.width)
    }

    pub(crate) fn ensure_eq(&self, other: &GridDims) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimsMismatch {
                expected: *self,
                actual: *other,
            })
        }
    }
}

impl fmt::Display for GridDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Axis-aligned pixel box: top-left corner plus extents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BBox {
    pub fn is_empty(&self) -> bool {
        self.w == 0 || self.h == 0
    }

    /// True when the two boxes share at least one pixel.
    pub fn intersects(&self, other: &BBox) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        self.x < other.x + other.w
            && other.x < self.x + self.w
            && self.y < other.y + other.h
            && other.y < self.y + self.h
    }

    pub fn fits(&self, dims: GridDims) -> bool {
        self.x + self.w <= dims.width() && self.y + self.h <= dims.height()
    }
}
