// SPDX-License-Identifier: Apache-2.0

//! Pixel confusion counts and the five accuracy metrics (precision, recall,
//! F1, overall accuracy, kappa). "Changed" is the positive class.

use crate::error::{Error, Result};
use crate::raster::BinaryMask;
use crate::scoring::ChangeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Counts with prediction and reference exchanged.
    pub fn transposed(&self) -> Self {
        Self {
            tp: self.tp,
            fp: self.fn_,
            fn_: self.fp,
            tn: self.tn,
        }
    }
}

/// Which ratios had a zero denominator and were reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Undefined {
    pub precision: bool,
    pub recall: bool,
    pub f1: bool,
    pub kappa: bool,
}

impl Undefined {
    pub fn any(&self) -> bool {
        self.precision || self.recall || self.f1 || self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub oa: f64,
    pub kappa: f64,
    pub counts: ConfusionCounts,
    pub undefined: Undefined,
}

/// Pixelwise confusion counts, skipping pixels set in `ignore`.
pub fn confusion(pred: &ChangeMap, reference: &ChangeMap, ignore: Option<&BinaryMask>) -> Result<ConfusionCounts> {
    pred.dims().ensure_eq(&reference.dims())?;
    let skip = match ignore {
        Some(m) => {
            pred.dims().ensure_eq(&m.dims())?;
            Some(m.to_bitmap())
        }
        None => None,
    };
    let mut c = ConfusionCounts::default();
    for (i, (&p, &r)) in pred.flags().iter().zip(reference.flags()).enumerate() {
        if skip.as_ref().is_some_and(|s| s[i]) {
            continue;
        }
        match (p, r) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

/// Derive the five metrics. Zero-denominator ratios come back as 0 and are
/// flagged in [`MetricsReport::undefined`].
///
/// Kappa is evaluated from integer numerator and denominator,
/// `(N(tp + tn) - A) / (N^2 - A)` with
/// `A = (tp + fp)(tp + fn) + (fn + tn)(fp + tn)`, so constant predictions
/// give exactly 0 and perfect ones exactly 1.
pub fn metrics(counts: &ConfusionCounts) -> Result<MetricsReport> {
    let n = counts.total();
    if n == 0 {
        return Err(Error::NoPixels);
    }
    let ConfusionCounts { tp, fp, fn_, tn } = *counts;
    let (precision, p_undef) = ratio(tp, tp + fp);
    let (recall, r_undef) = ratio(tp, tp + fn_);
    // 2pr / (p + r) is 0/0 whenever tp is 0
    let (f1, f1_undef) = if tp == 0 {
        (0.0, true)
    } else {
        ratio(2 * tp, 2 * tp + fp + fn_)
    };
    let oa = (tp + tn) as f64 / n as f64;

    let (tp, fp, fn_, tn, n) = (tp as i128, fp as i128, fn_ as i128, tn as i128, n as i128);
    let chance = (tp + fp) * (tp + fn_) + (fn_ + tn) * (fp + tn);
    let num = n * (tp + tn) - chance;
    let den = n * n - chance;
    let (kappa, k_undef) = if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    };

    Ok(MetricsReport {
        precision,
        recall,
        f1,
        oa,
        kappa,
        counts: *counts,
        undefined: Undefined {
            precision: p_undef,
            recall: r_undef,
            f1: f1_undef,
            kappa: k_undef,
        },
    })
}
