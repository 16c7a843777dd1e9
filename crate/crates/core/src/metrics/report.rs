use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    accuracy, auroc, false_negative_rate, false_positive_rate, grade, jaccard, kappa, AgreementScale, ConfusionMatrix,
    PixelCounts, BELOW_SCALE,
};
use crate::error::{Error, Result};
use crate::raster::BinaryMask;

/// Every metric for one comparison. Metrics that are undefined for the
/// matrix (a class absent from truth, say) are `None`, never 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub cm: ConfusionMatrix,
    pub acc: f64,
    pub jac: Option<f64>,
    pub auroc: Option<f64>,
    pub kap: Option<f64>,
    pub fnr: Option<f64>,
    pub fpr: Option<f64>,
    pub auroc_grade: Option<String>,
    pub kap_landis: Option<String>,
    pub kap_fleiss: Option<String>,
}

impl EvalReport {
    pub fn from_matrix(cm: ConfusionMatrix) -> Self {
        let auroc = auroc(&cm).ok();
        let kap = kappa(&cm).ok();
        let auroc_grade = auroc.map(|v| match grade(v, AgreementScale::TraditionalAuroc) {
            Ok(label) => label.to_string(),
            Err(_) => BELOW_SCALE.to_string(),
        });
        let kap_grade = |scale| kap.and_then(|k| grade(k, scale).ok()).map(str::to_string);
        Self {
            acc: accuracy(&cm),
            jac: jaccard(&cm).ok(),
            auroc,
            kap,
            fnr: false_negative_rate(&cm).ok(),
            fpr: false_positive_rate(&cm).ok(),
            auroc_grade,
            kap_landis: kap_grade(AgreementScale::LandisKoch),
            kap_fleiss: kap_grade(AgreementScale::Fleiss),
            cm,
        }
    }

    pub fn from_counts(counts: &PixelCounts) -> Result<Self> {
        counts.matrix().map(Self::from_matrix)
    }

    pub(crate) const CSV_HEADER: [&'static str; 14] = [
        "image",
        "tp",
        "tn",
        "fp",
        "fn",
        "acc",
        "jac",
        "auroc",
        "kap",
        "fnr",
        "fpr",
        "auroc_grade",
        "kap_landis",
        "kap_fleiss",
    ];

    fn csv_row(&self, image: &str) -> [String; 14] {
        let num = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let text = |v: &Option<String>| v.clone().unwrap_or_default();
        [
            image.to_string(),
            self.cm.tp.to_string(),
            self.cm.tn.to_string(),
            self.cm.fp.to_string(),
            self.cm.fn_.to_string(),
            self.acc.to_string(),
            num(self.jac),
            num(self.auroc),
            num(self.kap),
            num(self.fnr),
            num(self.fpr),
            text(&self.auroc_grade),
            text(&self.kap_landis),
            text(&self.kap_fleiss),
        ]
    }
}

pub fn evaluate(pred: &BinaryMask, truth: &BinaryMask) -> Result<EvalReport> {
    EvalReport::from_counts(&PixelCounts::tally(pred, truth)?)
}

/// Per-image reports plus a micro-averaged report over pooled pixel counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetReport {
    pub per_image: Vec<EvalReport>,
    pub micro: EvalReport,
}

#[derive(Serialize)]
struct NamedReport<'a> {
    image: &'a str,
    #[serde(flatten)]
    report: &'a EvalReport,
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    images: Vec<NamedReport<'a>>,
    micro: &'a EvalReport,
}

impl SetReport {
    /// JSON document: `{"images": [{"image": name, ...}], "micro": {...}}`.
    ///
    /// `names` labels `per_image` in order.
    pub fn to_json(&self, names: &[String]) -> Result<String> {
        assert_eq!(names.len(), self.per_image.len(), "one name per image");
        let doc = ReportDocument {
            images: names
                .iter()
                .zip(&self.per_image)
                .map(|(image, report)| NamedReport { image, report })
                .collect(),
            micro: &self.micro,
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    /// One CSV row per image and a final `micro` row; undefined metrics are
    /// empty cells.
    pub fn to_csv(&self, names: &[String]) -> Result<String> {
        assert_eq!(names.len(), self.per_image.len(), "one name per image");
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
        w.write_record(EvalReport::CSV_HEADER).map_err(csv_err)?;
        for (name, report) in names.iter().zip(&self.per_image) {
            w.write_record(report.csv_row(name)).map_err(csv_err)?;
        }
        w.write_record(self.micro.csv_row("micro")).map_err(csv_err)?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Evaluates each `(prediction, truth)` pair and pools all pixels for the
/// micro report.
pub fn evaluate_set(pairs: &[(BinaryMask, BinaryMask)]) -> Result<SetReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("no prediction/truth pairs"));
    }
    let counts: Vec<PixelCounts> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (pred, truth))| {
            PixelCounts::tally(pred, truth).map_err(|e| match e {
                Error::DimensionMismatch { context } => Error::mismatch(format!("pair {i}: {context}")),
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let pooled = counts.iter().fold(PixelCounts::default(), |acc, c| acc.merge(*c));
    Ok(SetReport {
        per_image: counts.iter().map(EvalReport::from_counts).collect::<Result<_>>()?,
        micro: EvalReport::from_counts(&pooled)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(w: usize, bits: &[u8]) -> BinaryMask {
        BinaryMask::new(w, bits.len() / w, bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    #[test]
    fn identical_masks() {
        let t = m(3, &[1, 0, 0, 1, 1, 0]);
        let r = evaluate(&t, &t).unwrap();
        assert_eq!((r.acc, r.jac, r.auroc, r.kap), (1.0, Some(1.0), Some(1.0), Some(1.0)));
        assert_eq!(r.auroc_grade.as_deref(), Some("excellent agreement (A)"));
        assert_eq!(r.kap_landis.as_deref(), Some("almost perfect agreement"));
        assert_eq!(r.kap_fleiss.as_deref(), Some("excellent agreement"));
    }

    #[test]
    fn two_by_two_fixture() {
        let truth = m(2, &[1, 1, 0, 0]);
        let pred = m(2, &[1, 0, 1, 0]);
        let r = evaluate(&pred, &truth).unwrap();
        assert_eq!(r.acc, 0.5);
        assert!((r.jac.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.auroc, Some(0.5));
        assert_eq!(r.kap, Some(0.0));
        assert_eq!(r.auroc_grade.as_deref(), Some("no agreement (F)"));
        assert_eq!(r.kap_landis.as_deref(), Some("slight agreement"));
    }

    #[test]
    fn absent_class_is_reported_absent() {
        let truth = m(2, &[0, 0, 0, 0]);
        let r = evaluate(&truth, &truth).unwrap();
        assert_eq!(r.acc, 1.0);
        assert_eq!((r.jac, r.auroc, r.kap, r.fnr), (None, None, None, None));
        assert_eq!(r.fpr, Some(0.0));
        assert_eq!(r.auroc_grade, None);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"jac\":null"));
    }

    #[test]
    fn low_auroc_is_below_scale() {
        let truth = m(2, &[1, 1, 0, 0]);
        let r = evaluate(&truth.complement(), &truth).unwrap();
        assert_eq!(r.auroc, Some(0.0));
        assert_eq!(r.auroc_grade.as_deref(), Some(BELOW_SCALE));
    }

    #[test]
    fn set_errors() {
        assert!(matches!(evaluate_set(&[]), Err(Error::EmptyInput(_))));
        let a = m(2, &[1, 0, 0, 1]);
        let b = m(4, &[1, 0, 0, 1]);
        let err = evaluate_set(&[(a.clone(), a.clone()), (a, b)]).unwrap_err();
        assert!(err.to_string().contains("pair 1"), "{err}");
    }

    #[test]
    fn emission_formats() {
        let truth = m(2, &[1, 1, 0, 0]);
        let pred = m(2, &[1, 0, 1, 0]);
        let set = evaluate_set(&[(pred, truth.clone()), (truth.clone(), truth)]).unwrap();
        let names = vec!["a".to_string(), "b".to_string()];
        let csv = set.to_csv(&names).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "image,tp,tn,fp,fn,acc,jac,auroc,kap,fnr,fpr,auroc_grade,kap_landis,kap_fleiss");
        assert_eq!(lines.len(), 4);
        assert!(lines[3].starts_with("micro,"));
        let json: serde_json::Value = serde_json::from_str(&set.to_json(&names).unwrap()).unwrap();
        assert_eq!(json["images"][1]["image"], "b");
        assert_eq!(json["images"][1]["kap"], 1.0);
        assert_eq!(json["micro"]["cm"]["fn"], 0.125);
    }
}
