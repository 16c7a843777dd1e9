use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BinaryMask, GrayImage};
use crate::error::Error;

pub const DEFAULT_THRESHOLD: u8 = 128;

/// How [`binarize`] picks its cut-off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Fixed(u8),
    /// Between-class variance maximisation over all 256 cut-offs.
    Automatic,
}

impl Default for ThresholdMethod {
    fn default() -> Self {
        ThresholdMethod::Fixed(DEFAULT_THRESHOLD)
    }
}

impl fmt::Display for ThresholdMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMethod::Fixed(t) => write!(f, "{t}"),
            ThresholdMethod::Automatic => f.write_str("auto"),
        }
    }
}

impl FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "auto" | "automatic" | "otsu" => Ok(ThresholdMethod::Automatic),
            other => other
                .parse::<u8>()
                .map(ThresholdMethod::Fixed)
                .map_err(|_| Error::InvalidParameter(format!("threshold `{s}` is not 0-255 or `auto`"))),
        }
    }
}

/// Dark pixels (`intensity <= t`) become foreground.
pub fn binarize(image: &GrayImage, method: ThresholdMethod) -> BinaryMask {
    let t = match method {
        ThresholdMethod::Fixed(t) => t,
        ThresholdMethod::Automatic => otsu_threshold(image),
    };
    image.map(|v| v <= t)
}

/// Cut-off `t` maximising the between-class variance of the split
/// `{v <= t}` / `{v > t}`.
///
/// Ties go to the smallest `t`. An image with a single intensity has no
/// valid split and yields 0.
pub fn otsu_threshold(image: &GrayImage) -> u8 {
    let mut hist = [0u64; 256];
    for &v in image.data() {
        hist[v as usize] += 1;
    }
    let total = image.len() as f64;
    let sum_total: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &h)| i as f64 * h as f64)
        .sum();

    let mut best_t = 0u8;
    let mut best_var = 0.0f64;
    let mut w_low = 0.0f64;
    let mut sum_low = 0.0f64;
    for (t, &h) in hist.iter().enumerate() {
        w_low += h as f64;
        sum_low += t as f64 * h as f64;
        let w_high = total - w_low;
        if w_low == 0.0 {
            continue;
        }
        if w_high == 0.0 {
            break;
        }
        let m_low = sum_low / w_low;
        let m_high = (sum_total - sum_low) / w_high;
        let var = w_low * w_high * (m_low - m_high) * (m_low - m_high);
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    best_t
}
