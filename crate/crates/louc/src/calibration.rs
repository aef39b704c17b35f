//! Accuracy- and precision-based calibration of annotators.
//!
//! Calibration is the signed gap between how confident an annotator reports
//! being and how well they actually perform over a question subset:
//! mean normalized confidence minus accuracy (or minus precision, with the
//! confidence mean restricted to positive predictions). Negative values mark
//! under-confidence, positive values over-confidence, and values within a
//! tolerance band of zero count as calibrated.

use std::fmt;
use std::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::{self, ConfusionOutcome, QuestionSubset};

/// Default half-width of the "calibrated" band around zero.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Decisions that enter the precision-based measures.
pub(crate) const POSITIVE_OUTCOMES: [ConfusionOutcome; 2] = [
    ConfusionOutcome::TruePositive,
    ConfusionOutcome::FalsePositive,
];

/// Which performance measure a calibration (or LOUC) value is based on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Accuracy,
    Precision,
}

impl Basis {
    pub fn label(self) -> &'static str {
        match self {
            Basis::Accuracy => "accuracy",
            Basis::Precision => "precision",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "acc" | "accuracy" => Ok(Basis::Accuracy),
            "p" | "precision" => Ok(Basis::Precision),
            other => Err(Error::InvalidArgument(format!(
                "unknown basis '{other}' (expected acc or p)"
            ))),
        }
    }
}

/// A calibration score. `value` is `None` exactly when the underlying
/// performance measure is undefined on the subset (precision without any
/// positive prediction); defined values lie in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationValue {
    pub value: Option<f64>,
    pub basis: Basis,
}

impl CalibrationValue {
    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }

    pub fn expect_defined(&self) -> Result<f64> {
        self.value.ok_or_else(|| {
            Error::UndefinedMeasure(format!("{}-based calibration is undefined", self.basis))
        })
    }
}

/// Confidence class of an annotator under a tolerance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfidenceClass {
    UnderConfident,
    Calibrated,
    OverConfident,
}

impl ConfidenceClass {
    pub fn label(self) -> &'static str {
        match self {
            ConfidenceClass::UnderConfident => "under-confident",
            ConfidenceClass::Calibrated => "calibrated",
            ConfidenceClass::OverConfident => "over-confident",
        }
    }
}

impl fmt::Display for ConfidenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Accuracy-based calibration: mean normalized confidence minus accuracy over
/// the subset. Always defined for a non-empty subset.
pub fn cal_accuracy(
    dataset: &Dataset,
    annotator: &str,
    subset: &QuestionSubset,
) -> Result<CalibrationValue> {
    if subset.is_empty() {
        return Err(Error::EmptySubset("accuracy-based calibration"));
    }
    let mean = measures::mean_normalized_confidence(dataset, annotator, subset, None)?
        .expect("unfiltered mean over a non-empty subset is defined");
    let accuracy = measures::accuracy(dataset, annotator, subset)?;
    Ok(CalibrationValue {
        value: Some(mean - accuracy),
        basis: Basis::Accuracy,
    })
}

/// Precision-based calibration: mean normalized confidence over positive
/// predictions minus precision. Undefined (`value: None`) exactly when the
/// subset holds no positive prediction.
pub fn cal_precision(
    dataset: &Dataset,
    annotator: &str,
    subset: &QuestionSubset,
) -> Result<CalibrationValue> {
    let mean =
        measures::mean_normalized_confidence(dataset, annotator, subset, Some(&POSITIVE_OUTCOMES))?;
    let precision = measures::precision(dataset, annotator, subset)?;
    // Both terms share the TP-or-FP denominator, so they are undefined together.
    let value = match (mean, precision) {
        (Some(mean), Some(precision)) => Some(mean - precision),
        _ => None,
    };
    Ok(CalibrationValue {
        value,
        basis: Basis::Precision,
    })
}

/// Calibration under the chosen basis.
pub fn calibration(
    dataset: &Dataset,
    annotator: &str,
    subset: &QuestionSubset,
    basis: Basis,
) -> Result<CalibrationValue> {
    match basis {
        Basis::Accuracy => cal_accuracy(dataset, annotator, subset),
        Basis::Precision => cal_precision(dataset, annotator, subset),
    }
}

/// Classifies a defined calibration value against the tolerance band
/// [-epsilon, epsilon]; the boundary is inclusive on both sides.
pub fn classify(cal: CalibrationValue, epsilon: f64) -> Result<ConfidenceClass> {
    if epsilon < 0.0 || epsilon.is_nan() {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
            expected: ">= 0",
        });
    }
    let value = cal.expect_defined()?;
    Ok(if value < -epsilon {
        ConfidenceClass::UnderConfident
    } else if value > epsilon {
        ConfidenceClass::OverConfident
    } else {
        ConfidenceClass::Calibrated
    })
}
