//! Leave-one-out calibration: the contribution of each single decision to an
//! annotator's absolute calibration level.
//!
//! For a decision on question `q`, the value is
//! `|Cal(Q_h)| - |Cal(Q_h \ {q})|` where `Q_h` is the annotator's full
//! answered set. Negative values mark decisions whose presence makes the
//! annotator MORE calibrated (removing them would push the absolute
//! calibration up); positive values mark decisions that pull calibration away
//! from zero. Under the precision basis, decisions that never enter the
//! measure (TN and FN) are structurally zero.
//!
//! The implementation maintains running sums so each annotator's full batch
//! costs O(B); the brute-force two-evaluation route through
//! [`crate::calibration`] is kept as the independent test oracle.

use std::collections::BTreeMap;

use crate::calibration::Basis;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::measures::{self, ConfusionOutcome};

/// LOUC value of one decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoucValue {
    /// `|Cal(Q_h)| - |Cal(Q_h \ {q})|`, in [-1, 1].
    pub value: f64,
    pub basis: Basis,
    /// True when the decision is excluded from the basis measure (TN/FN under
    /// precision), which forces the value to exactly 0.
    pub structurally_zero: bool,
}

/// Batch result for one decision: either a value or an explicit marker that
/// the leave-one-out subset degenerates (nothing left to measure on).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoucEntry {
    Value(LoucValue),
    Degenerate,
}

impl LoucEntry {
    pub fn value(&self) -> Option<LoucValue> {
        match self {
            LoucEntry::Value(v) => Some(*v),
            LoucEntry::Degenerate => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, LoucEntry::Degenerate)
    }
}

struct Decision {
    question_id: String,
    normalized_confidence: f64,
    outcome: ConfusionOutcome,
}

fn decisions_for(dataset: &Dataset, annotator: &str) -> Result<Vec<Decision>> {
    let records = dataset
        .records_for(annotator)
        .ok_or_else(|| Error::AnnotatorNotFound(annotator.to_string()))?;
    let mut decisions = Vec::with_capacity(records.len());
    for record in records {
        let question = dataset
            .question(&record.question_id)
            .ok_or_else(|| Error::QuestionNotFound(record.question_id.clone()))?;
        decisions.push(Decision {
            question_id: record.question_id.clone(),
            normalized_confidence: measures::normalize_confidence(record.confidence)?,
            outcome: measures::confusion_outcome(record, question)?,
        });
    }
    Ok(decisions)
}

/// LOUC value of a single decision over the annotator's full answered set.
pub fn louc(
    dataset: &Dataset,
    annotator: &str,
    question_id: &str,
    basis: Basis,
) -> Result<LoucValue> {
    let entries = louc_all(dataset, annotator, basis)?;
    match entries.get(question_id) {
        Some(LoucEntry::Value(value)) => Ok(*value),
        Some(LoucEntry::Degenerate) => Err(Error::DegenerateSubset(format!(
            "removing question {question_id} leaves nothing to compute \
             {basis}-based calibration on for annotator {annotator}"
        ))),
        None => {
            if dataset.question(question_id).is_none() {
                Err(Error::QuestionNotFound(question_id.to_string()))
            } else {
                Err(Error::RecordNotFound {
                    annotator: annotator.to_string(),
                    question: question_id.to_string(),
                })
            }
        }
    }
}

/// LOUC values for every decision of one annotator. Decisions whose
/// leave-one-out subset degenerates appear as explicit [`LoucEntry::Degenerate`]
/// markers rather than being omitted.
///
/// Errors with [`Error::UndefinedMeasure`] when the base calibration itself is
/// undefined (precision basis and no positive prediction at all).
pub fn louc_all(
    dataset: &Dataset,
    annotator: &str,
    basis: Basis,
) -> Result<BTreeMap<String, LoucEntry>> {
    let decisions = decisions_for(dataset, annotator)?;
    if decisions.is_empty() {
        return Err(Error::DegenerateSubset(format!(
            "annotator {annotator} has no records"
        )));
    }
    match basis {
        Basis::Accuracy => Ok(accuracy_louc(&decisions)),
        Basis::Precision => precision_louc(&decisions, annotator),
    }
}

fn accuracy_louc(decisions: &[Decision]) -> BTreeMap<String, LoucEntry> {
    let total = decisions.len();
    let confidence_sum: f64 = decisions.iter().map(|d| d.normalized_confidence).sum();
    let correct = decisions.iter().filter(|d| d.outcome.is_correct()).count();
    let base = confidence_sum / total as f64 - correct as f64 / total as f64;

    let mut out = BTreeMap::new();
    for decision in decisions {
        let entry = if total == 1 {
            LoucEntry::Degenerate
        } else {
            let rest = (total - 1) as f64;
            let rest_correct = correct - usize::from(decision.outcome.is_correct());
            let leave_one_out =
                (confidence_sum - decision.normalized_confidence) / rest - rest_correct as f64 / rest;
            LoucEntry::Value(LoucValue {
                value: base.abs() - leave_one_out.abs(),
                basis: Basis::Accuracy,
                structurally_zero: false,
            })
        };
        out.insert(decision.question_id.clone(), entry);
    }
    out
}

fn precision_louc(
    decisions: &[Decision],
    annotator: &str,
) -> Result<BTreeMap<String, LoucEntry>> {
    let positives: Vec<&Decision> = decisions
        .iter()
        .filter(|d| d.outcome.predicted_positive())
        .collect();
    if positives.is_empty() {
        return Err(Error::UndefinedMeasure(format!(
            "precision-based calibration is undefined for annotator {annotator}: \
             no positive predictions"
        )));
    }
    let positive_count = positives.len();
    let confidence_sum: f64 = positives.iter().map(|d| d.normalized_confidence).sum();
    let true_positives = positives
        .iter()
        .filter(|d| d.outcome == ConfusionOutcome::TruePositive)
        .count();
    let base =
        confidence_sum / positive_count as f64 - true_positives as f64 / positive_count as f64;

    let mut out = BTreeMap::new();
    for decision in decisions {
        let entry = if !decision.outcome.predicted_positive() {
            // TN/FN never enter either calibration term; the difference is 0
            // without computing anything.
            LoucEntry::Value(LoucValue {
                value: 0.0,
                basis: Basis::Precision,
                structurally_zero: true,
            })
        } else if positive_count == 1 {
            LoucEntry::Degenerate
        } else {
            let rest = (positive_count - 1) as f64;
            let rest_tp =
                true_positives - usize::from(decision.outcome == ConfusionOutcome::TruePositive);
            let leave_one_out =
                (confidence_sum - decision.normalized_confidence) / rest - rest_tp as f64 / rest;
            LoucEntry::Value(LoucValue {
                value: base.abs() - leave_one_out.abs(),
                basis: Basis::Precision,
                structurally_zero: false,
            })
        };
        out.insert(decision.question_id.clone(), entry);
    }
    Ok(out)
}
