// SPDX-License-Identifier: Apache-2.0

//! Run-length encoded binary masks.
//!
//! Runs are counted in row-major order. The first run counts zeros (and may
//! be empty), after which runs alternate between ones and zeros. Every run
//! past the first is nonzero, which makes the encoding canonical: two masks
//! are equal exactly when their run vectors are equal.

use alloc::vec;
use alloc::vec::Vec;

use super::{BBox, GridDims};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    dims: GridDims,
    runs: Vec<u32>,
    area: u64,
}

/// Encode a row-major boolean grid.
pub fn rle_encode(dims: GridDims, bitmap: &[bool]) -> Result<BinaryMask> {
    BinaryMask::from_bitmap(dims, bitmap)
}

/// Intersection over union of two masks on the same grid.
///
/// Two empty masks have an IoU of 0.
pub fn iou(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    a.dims.ensure_eq(&b.dims)?;
    let (inter, union) = a.overlap_counts(b);
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}

/// True when `runs` is already in canonical form (no zero run after the first).
pub fn runs_are_canonical(runs: &[u32]) -> bool {
    !runs.is_empty() && runs.iter().skip(1).all(|&r| r != 0)
}

impl BinaryMask {
    pub fn empty(dims: GridDims) -> Self {
        Self {
            dims,
            runs: vec![dims.len() as u32],
            area: 0,
        }
    }

    pub fn full(dims: GridDims) -> Self {
        Self {
            dims,
            runs: vec![0, dims.len() as u32],
            area: dims.len() as u64,
        }
    }

    pub fn from_bitmap(dims: GridDims, bitmap: &[bool]) -> Result<Self> {
        if bitmap.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                actual: bitmap.len(),
            });
        }
        let mut w = RunWriter::new();
        let mut cur = false;
        let mut len = 0u32;
        for &bit in bitmap {
            if bit != cur {
                w.push(cur, len);
                cur = bit;
                len = 0;
            }
            len += 1;
        }
        w.push(cur, len);
        Ok(w.finish(dims))
    }

    /// Build from raw run lengths, merging any zero-length runs.
    pub fn from_runs(dims: GridDims, runs: &[u32]) -> Result<Self> {
        let total: u64 = runs.iter().map(|&r| r as u64).sum();
        if total != dims.len() as u64 {
            return Err(Error::RunSumMismatch {
                expected: dims.len() as u64,
                actual: total,
            });
        }
        let mut w = RunWriter::new();
        for (i, &r) in runs.iter().enumerate() {
            w.push(i % 2 == 1, r);
        }
        Ok(w.finish(dims))
    }

    /// Build from strictly increasing flat pixel indices.
    pub fn from_sorted_indices<I>(dims: GridDims, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut b = IndexRleBuilder::default();
        for idx in indices {
            if idx >= dims.len() || (b.open_len > 0 && idx < b.open_start + b.open_len) {
                return Err(Error::InvalidParameter {
                    name: "indices",
                    reason: "must be strictly increasing and inside the grid",
                });
            }
            b.push(idx);
        }
        Ok(b.finish(dims))
    }

    #[inline]
    pub fn dims(&self) -> GridDims {
        self.dims
    }

    #[inline]
    pub fn runs(&self) -> &[u32] {
        &self.runs
    }

    /// Number of one-pixels.
    #[inline]
    pub fn area(&self) -> u64 {
        self.area
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.area == 0
    }

    pub fn to_bitmap(&self) -> Vec<bool> {
        let mut out = vec![false; self.dims.len()];
        for (start, len) in self.spans() {
            out[start..start + len].fill(true);
        }
        out
    }

    /// Iterate the one-runs as `(flat_start, length)` pairs in scan order.
    pub fn spans(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut pos = 0usize;
        self.runs.iter().enumerate().filter_map(move |(i, &r)| {
            let start = pos;
            pos += r as usize;
            (i % 2 == 1).then_some((start, r as usize))
        })
    }

    /// Iterate flat indices of all one-pixels.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.spans().flat_map(|(s, l)| s..s + l)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        if row >= self.dims.height() || col >= self.dims.width() {
            return false;
        }
        let idx = self.dims.index(row, col);
        let mut pos = 0usize;
        for (i, &r) in self.runs.iter().enumerate() {
            pos += r as usize;
            if idx < pos {
                return i % 2 == 1;
            }
        }
        false
    }

    /// Tightest box around the one-pixels; a zero box for empty masks.
    pub fn bbox(&self) -> BBox {
        let w = self.dims.width();
        let (mut x0, mut x1, mut y0, mut y1) = (usize::MAX, 0usize, usize::MAX, 0usize);
        let mut any = false;
        for (start, len) in self.spans() {
            any = true;
            let end = start + len - 1;
            let (r0, c0) = (start / w, start % w);
            let (r1, c1) = (end / w, end % w);
            y0 = y0.min(r0);
            y1 = y1.max(r1);
            if r0 == r1 {
                x0 = x0.min(c0);
                x1 = x1.max(c1);
            } else {
                x0 = 0;
                x1 = w - 1;
            }
        }
        if !any {
            return BBox::default();
        }
        BBox {
            x: x0,
            y: y0,
            w: x1 - x0 + 1,
            h: y1 - y0 + 1,
        }
    }

    /// `(|a ∩ b|, |a ∪ b|)`. Dims are assumed equal.
    fn overlap_counts(&self, other: &BinaryMask) -> (u64, u64) {
        let mut inter = 0u64;
        let mut union = 0u64;
        walk_runs(&self.runs, &other.runs, |a, b, len| {
            if a && b {
                inter += len as u64;
            }
            if a || b {
                union += len as u64;
            }
        });
        (inter, union)
    }

    pub fn intersection_area(&self, other: &BinaryMask) -> Result<u64> {
        self.dims.ensure_eq(&other.dims)?;
        Ok(self.overlap_counts(other).0)
    }

    pub fn iou(&self, other: &BinaryMask) -> Result<f64> {
        iou(self, other)
    }

    fn combine(&self, other: &BinaryMask, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        self.dims.ensure_eq(&other.dims)?;
        let mut w = RunWriter::new();
        walk_runs(&self.runs, &other.runs, |a, b, len| w.push(op(a, b), len));
        Ok(w.finish(self.dims))
    }

    pub fn union(&self, other: &BinaryMask) -> Result<Self> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &BinaryMask) -> Result<Self> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &BinaryMask) -> Result<Self> {
        self.combine(other, |a, b| a && !b)
    }
}

/// Walk two run streams covering the same number of pixels, calling `f`
/// with the pixel values of each maximal common stretch.
fn walk_runs(a: &[u32], b: &[u32], mut f: impl FnMut(bool, bool, u32)) {
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut ra, mut rb) = (0u32, 0u32);
    loop {
        while ra == 0 {
            if ia >= a.len() {
                return;
            }
            ra = a[ia];
            ia += 1;
        }
        while rb == 0 {
            if ib >= b.len() {
                return;
            }
            rb = b[ib];
            ib += 1;
        }
        let step = ra.min(rb);
        // ia/ib already point one past the active run
        f(ia % 2 == 0, ib % 2 == 0, step);
        ra -= step;
        rb -= step;
    }
}

/// Appends value runs, merging adjacent runs of equal value.
struct RunWriter {
    runs: Vec<u32>,
    last: bool,
    area: u64,
}

impl RunWriter {
    fn new() -> Self {
        Self {
            runs: Vec::new(),
            last: false,
            area: 0,
        }
    }

    fn push(&mut self, value: bool, len: u32) {
        if len == 0 {
            return;
        }
        if value {
            self.area += len as u64;
        }
        if self.runs.is_empty() {
            if value {
                self.runs.push(0);
            }
            self.runs.push(len);
        } else if value == self.last {
            *self.runs.last_mut().unwrap() += len;
        } else {
            self.runs.push(len);
        }
        self.last = value;
    }

    fn finish(mut self, dims: GridDims) -> BinaryMask {
        if self.runs.is_empty() {
            self.runs.push(dims.len() as u32);
        }
        BinaryMask {
            dims,
            runs: self.runs,
            area: self.area,
        }
    }
}

/// Builds a mask from increasing flat indices of its one-pixels.
#[derive(Default)]
pub(crate) struct IndexRleBuilder {
    runs: Vec<u32>,
    pos: usize,
    open_start: usize,
    open_len: usize,
    area: u64,
}

impl IndexRleBuilder {
    #[inline]
    pub(crate) fn push(&mut self, idx: usize) {
        if self.open_len > 0 && idx == self.open_start + self.open_len {
            self.open_len += 1;
            return;
        }
        self.close();
        self.open_start = idx;
        self.open_len = 1;
    }

    fn close(&mut self) {
        if self.open_len == 0 {
            return;
        }
        self.runs.push((self.open_start - self.pos) as u32);
        self.runs.push(self.open_len as u32);
        self.area += self.open_len as u64;
        self.pos = self.open_start + self.open_len;
        self.open_len = 0;
    }

    pub(crate) fn finish(mut self, dims: GridDims) -> BinaryMask {
        self.close();
        let n = dims.len();
        if self.pos < n {
            self.runs.push((n - self.pos) as u32);
        }
        BinaryMask {
            dims,
            runs: self.runs,
            area: self.area,
        }
    }
}
