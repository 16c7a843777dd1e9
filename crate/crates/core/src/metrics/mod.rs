//! Pixel-wise binary segmentation metrics.
//!
//! A [`ConfusionMatrix`] holds TP/TN/FP/FN as fractions of all evaluated
//! pixels, so the four entries sum to one and the "total observations"
//! term of the kappa formula is 1. Masks are first tallied into exact
//! integer [`PixelCounts`]; fractions are derived on read-out, which keeps
//! pooled set-level results independent of evaluation order.
//!
//! | metric | formula |
//! |---|---|
//! | accuracy | `tp + tn` |
//! | Jaccard (IoU) | `tp / (tp + fp + fn)` |
//! | FNR, FPR | `fn / (fn + tp)`, `fp / (fp + tn)` |
//! | AUROC (single operating point) | `1 − (FPR + FNR) / 2` |
//! | Cohen's kappa | `(fa − fc) / (1 − fc)`, `fa = tp + tn`, `fc = (tn+fn)(tn+fp) + (fp+tp)(fn+tp)` |
//!
//! The AUROC here is computed from one operating point, which makes it the
//! balanced accuracy; it is not the area under a threshold sweep.

mod grade;
mod report;

pub use grade::{grade, AgreementScale, Band, BELOW_SCALE};
pub use report::{evaluate, evaluate_set, EvalReport, SetReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::BinaryMask;

/// Tolerance on `tp + tn + fp + fn = 1`.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Exact pixel tallies for one or more prediction/truth pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl PixelCounts {
    pub fn tally(pred: &BinaryMask, truth: &BinaryMask) -> Result<Self> {
        if !pred.same_shape(truth) {
            return Err(Error::mismatch(format!(
                "prediction is {}x{}, truth is {}x{}",
                pred.width(),
                pred.height(),
                truth.width(),
                truth.height()
            )));
        }
        let mut c = PixelCounts::default();
        for (&p, &t) in pred.data().iter().zip(truth.data()) {
            match (p, t) {
                (true, true) => c.tp += 1,
                (false, false) => c.tn += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            tp: self.tp + other.tp,
            tn: self.tn + other.tn,
            fp: self.fp + other.fp,
            fn_: self.fn_ + other.fn_,
        }
    }

    pub fn matrix(&self) -> Result<ConfusionMatrix> {
        let n = self.total();
        if n == 0 {
            return Err(Error::EmptyInput("no pixels to evaluate"));
        }
        let n = n as f64;
        Ok(ConfusionMatrix {
            tp: self.tp as f64 / n,
            tn: self.tn as f64 / n,
            fp: self.fp as f64 / n,
            fn_: self.fn_ as f64 / n,
        })
    }
}

/// TP/TN/FP/FN as fractions of all evaluated pixels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: f64,
    pub tn: f64,
    pub fp: f64,
    #[serde(rename = "fn")]
    pub fn_: f64,
}

impl ConfusionMatrix {
    /// Validates non-negativity and the unit sum.
    pub fn from_fractions(tp: f64, tn: f64, fp: f64, fn_: f64) -> Result<Self> {
        let all = [tp, tn, fp, fn_];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "confusion entries must be finite and non-negative: {all:?}"
            )));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "confusion entries sum to {sum}, expected 1"
            )));
        }
        Ok(Self { tp, tn, fp, fn_ })
    }

    /// The matrix with prediction and truth swapped (`fp` and `fn` trade places).
    pub fn transposed(&self) -> Self {
        Self {
            fp: self.fn_,
            fn_: self.fp,
            ..*self
        }
    }

    fn truth_positive(&self) -> f64 {
        self.tp + self.fn_
    }

    fn truth_negative(&self) -> f64 {
        self.tn + self.fp
    }
}

pub fn confusion(pred: &BinaryMask, truth: &BinaryMask) -> Result<ConfusionMatrix> {
    PixelCounts::tally(pred, truth)?.matrix()
}

pub fn accuracy(cm: &ConfusionMatrix) -> f64 {
    (cm.tp + cm.tn) / (cm.tp + cm.tn + cm.fp + cm.fn_)
}

pub fn jaccard(cm: &ConfusionMatrix) -> Result<f64> {
    let denom = cm.tp + cm.fp + cm.fn_;
    if denom == 0.0 {
        return Err(Error::UndefinedMetric("jaccard"));
    }
    Ok(cm.tp / denom)
}

pub fn false_negative_rate(cm: &ConfusionMatrix) -> Result<f64> {
    let pos = cm.truth_positive();
    if pos == 0.0 {
        return Err(Error::UndefinedMetric("false negative rate"));
    }
    Ok(cm.fn_ / pos)
}

pub fn false_positive_rate(cm: &ConfusionMatrix) -> Result<f64> {
    let neg = cm.truth_negative();
    if neg == 0.0 {
        return Err(Error::UndefinedMetric("false positive rate"));
    }
    Ok(cm.fp / neg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub fnr: f64,
    pub fpr: f64,
}

/// Both error rates; undefined unless truth contains both classes.
pub fn rates(cm: &ConfusionMatrix) -> Result<Rates> {
    Ok(Rates {
        fnr: false_negative_rate(cm)?,
        fpr: false_positive_rate(cm)?,
    })
}

/// `1 − (FPR + FNR) / 2`.
pub fn auroc_from_rates(fnr: f64, fpr: f64) -> f64 {
    1.0 - (fpr + fnr) / 2.0
}

pub fn auroc(cm: &ConfusionMatrix) -> Result<f64> {
    let r = rates(cm).map_err(|_| Error::UndefinedMetric("auroc"))?;
    Ok(auroc_from_rates(r.fnr, r.fpr))
}

/// Cohen's kappa with the total number of observations fixed at 1.
///
/// Undefined when chance agreement is total, i.e. prediction and truth are
/// both entirely one and the same class.
pub fn kappa(cm: &ConfusionMatrix) -> Result<f64> {
    const N: f64 = 1.0;
    let only_negative = cm.tp == 0.0 && cm.fp == 0.0 && cm.fn_ == 0.0;
    let only_positive = cm.tn == 0.0 && cm.fp == 0.0 && cm.fn_ == 0.0;
    if only_negative || only_positive {
        return Err(Error::UndefinedMetric("kappa"));
    }
    let fa = cm.tp + cm.tn;
    let fc = ((cm.tn + cm.fn_) * (cm.tn + cm.fp) + (cm.fp + cm.tp) * (cm.fn_ + cm.tp)) / N;
    if N - fc <= 0.0 {
        return Err(Error::UndefinedMetric("kappa"));
    }
    Ok((fa - fc) / (N - fc))
}
