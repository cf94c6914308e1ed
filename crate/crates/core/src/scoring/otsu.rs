// SPDX-License-Identifier: Apache-2.0

//! Otsu thresholding over arbitrary real-valued scores.
//!
//! Scores are histogrammed into `bins` equal-width bins spanning the
//! observed `[min, max]`. Candidate thresholds are the interior bin edges
//! `e_k = min + (max - min) * k / bins` for `k = 1..bins`; edge `e_k` puts
//! every score `s <= e_k` in the low class. The chosen edge maximizes the
//! between-class variance `w0 * w1 * (mu0 - mu1)^2`, where `w` are class
//! weight fractions and `mu` are the class means of the actual scores (not
//! of bin centers). Ties keep the lowest edge.

use alloc::vec;
use alloc::vec::Vec;

/// Scores spanning less than this range carry no threshold.
pub const MIN_SCORE_SPREAD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OtsuThreshold {
    /// Threshold value; scores strictly above it form the high class.
    pub value: f64,
    /// Edge index `k` in `1..bins`.
    pub edge: usize,
    pub between_class_variance: f64,
}

impl OtsuThreshold {
    #[inline]
    pub fn is_above(&self, score: f64) -> bool {
        score > self.value
    }
}

/// Edge `k` of a `bins`-bin histogram over `[min, max]`.
#[inline]
pub fn bin_edge(min: f64, max: f64, k: usize, bins: usize) -> f64 {
    min + (max - min) * k as f64 / bins as f64
}

/// Unweighted Otsu threshold. Non-finite scores are ignored. Returns `None`
/// when the scores have no spread or `bins < 2`.
pub fn otsu_threshold(scores: &[f64], bins: usize) -> Option<OtsuThreshold> {
    otsu_impl(scores.iter().map(|&s| (s, 1.0)), bins)
}

/// Otsu threshold where each score counts `weight` times.
///
/// Scores with non-positive or non-finite weight are ignored.
pub fn otsu_threshold_weighted(scores: &[f64], weights: &[f64], bins: usize) -> Option<OtsuThreshold> {
    assert_eq!(scores.len(), weights.len(), "one weight per score");
    otsu_impl(scores.iter().copied().zip(weights.iter().copied()), bins)
}

fn otsu_impl(samples: impl Iterator<Item = (f64, f64)> + Clone, bins: usize) -> Option<OtsuThreshold> {
    if bins < 2 {
        return None;
    }
    let valid = samples.filter(|&(s, w)| s.is_finite() && w.is_finite() && w > 0.0);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (s, _) in valid.clone() {
        min = min.min(s);
        max = max.max(s);
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(max - min >= MIN_SCORE_SPREAD) {
        return None;
    }

    let edges: Vec<f64> = (0..=bins).map(|k| bin_edge(min, max, k, bins)).collect();
    let mut weight = vec![0f64; bins];
    let mut sum = vec![0f64; bins];
    let (mut total_w, mut total_s) = (0f64, 0f64);
    for (s, w) in valid {
        let b = bin_of(s, min, max, &edges, bins);
        weight[b] += w;
        sum[b] += w * s;
        total_w += w;
        total_s += w * s;
    }

    let mut best: Option<OtsuThreshold> = None;
    let (mut w0, mut s0) = (0f64, 0f64);
    for k in 1..bins {
        w0 += weight[k - 1];
        s0 += sum[k - 1];
        let w1 = total_w - w0;
        if w0 <= 0.0 || w1 <= 0.0 {
            continue;
        }
        let s1 = total_s - s0;
        let var = between_class_variance(w0, s0, w1, s1, total_w);
        if best.is_none_or(|b| var > b.between_class_variance) {
            best = Some(OtsuThreshold {
                value: edges[k],
                edge: k,
                between_class_variance: var,
            });
        }
    }
    best.filter(|b| b.between_class_variance > 0.0)
}

#[inline]
fn between_class_variance(w0: f64, s0: f64, w1: f64, s1: f64, total: f64) -> f64 {
    let mu0 = s0 / w0;
    let mu1 = s1 / w1;
    (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1)
}

/// Bin `b` holds scores with `edges[b] < s <= edges[b + 1]`; bin 0 also
/// takes `min` itself.
fn bin_of(s: f64, min: f64, max: f64, edges: &[f64], bins: usize) -> usize {
    let guess = ((s - min) / (max - min) * bins as f64) as usize;
    let mut b = guess.min(bins - 1);
    while b > 0 && s <= edges[b] {
        b -= 1;
    }
    while b + 1 < bins && s > edges[b + 1] {
        b += 1;
    }
    b
}
