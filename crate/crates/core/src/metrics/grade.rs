//! Qualitative agreement scales for AUROC and kappa.
//!
//! Bands are printed with two-decimal bounds that leave gaps on the real
//! line (0.20 then 0.21). Each band therefore runs from its own lower bound
//! up to, but excluding, the next band's lower bound; the top band is closed
//! at 1. A band whose bound is printed as a strict inequality ("> 0.75")
//! excludes that bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Label reported when an AUROC falls under the lowest printed band.
pub const BELOW_SCALE: &str = "below scale";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgreementScale {
    /// Letter-grade bands for AUROC, 0.50 to 1.
    TraditionalAuroc,
    /// Six kappa bands from "no agreement" to "almost perfect agreement".
    LandisKoch,
    /// Three coarse kappa bands.
    Fleiss,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Band {
    pub lower: f64,
    pub lower_inclusive: bool,
    pub label: &'static str,
}

const fn band(lower: f64, label: &'static str) -> Band {
    Band {
        lower,
        lower_inclusive: true,
        label,
    }
}

const AUROC_BANDS: [Band; 5] = [
    band(0.50, "no agreement (F)"),
    band(0.60, "poor agreement (D)"),
    band(0.70, "fair agreement (C)"),
    band(0.80, "good agreement (B)"),
    band(0.90, "excellent agreement (A)"),
];

const LANDIS_KOCH_BANDS: [Band; 6] = [
    band(-1.0, "no agreement"),
    band(0.0, "slight agreement"),
    band(0.21, "fair agreement"),
    band(0.41, "moderate agreement"),
    band(0.61, "substantial agreement"),
    band(0.81, "almost perfect agreement"),
];

const FLEISS_BANDS: [Band; 3] = [
    band(-1.0, "poor agreement"),
    band(0.40, "fair to good agreement"),
    Band {
        lower: 0.75,
        lower_inclusive: false,
        label: "excellent agreement",
    },
];

impl AgreementScale {
    pub const ALL: [AgreementScale; 3] = [
        AgreementScale::TraditionalAuroc,
        AgreementScale::LandisKoch,
        AgreementScale::Fleiss,
    ];

    /// Bands in ascending order.
    pub fn bands(self) -> &'static [Band] {
        match self {
            AgreementScale::TraditionalAuroc => &AUROC_BANDS,
            AgreementScale::LandisKoch => &LANDIS_KOCH_BANDS,
            AgreementScale::Fleiss => &FLEISS_BANDS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AgreementScale::TraditionalAuroc => "traditional AUROC scale",
            AgreementScale::LandisKoch => "Landis-Koch kappa scale",
            AgreementScale::Fleiss => "Fleiss kappa scale",
        }
    }

    /// Closed domain `[min, 1]`.
    pub fn domain(self) -> (f64, f64) {
        (self.bands()[0].lower, 1.0)
    }
}

impl std::str::FromStr for AgreementScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auroc" | "traditional" | "traditional_auroc" => Ok(AgreementScale::TraditionalAuroc),
            "landis-koch" | "landis_koch" | "landis" => Ok(AgreementScale::LandisKoch),
            "fleiss" => Ok(AgreementScale::Fleiss),
            _ => Err(Error::InvalidParameter(format!("unknown agreement scale `{s}`"))),
        }
    }
}

/// Label of the band containing `value`.
pub fn grade(value: f64, scale: AgreementScale) -> Result<&'static str> {
    let (min, max) = scale.domain();
    if value.is_nan() || value > max {
        return Err(Error::OutOfScaleDomain {
            value,
            scale: scale.name(),
        });
    }
    if value < min {
        return Err(match scale {
            AgreementScale::TraditionalAuroc => Error::BelowScale {
                value,
                scale: scale.name(),
            },
            _ => Error::OutOfScaleDomain {
                value,
                scale: scale.name(),
            },
        });
    }
    let band = scale
        .bands()
        .iter()
        .rev()
        .find(|b| value > b.lower || (b.lower_inclusive && value == b.lower))
        .expect("value is inside the domain");
    Ok(band.label)
}
