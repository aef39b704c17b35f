//! Per-decision transforms and subset-level evaluation measures.
//!
//! The per-decision layer turns a reported confidence into a binary predicted
//! label (strictly above 0.5 means "match"), a normalized confidence
//! `2*|c - 0.5|` that measures conviction independent of the decision, and a
//! confusion outcome against the reference match. The subset layer aggregates
//! those into accuracy, precision and mean normalized confidence over a
//! [`QuestionSubset`].
//!
//! Measures with an empty denominator (precision with no positive
//! predictions, a filtered confidence mean with nothing left) return a
//! first-class `None` rather than an error, so downstream calibration can
//! propagate "undefined" instead of crashing mid-report.

use std::collections::BTreeSet;
use std::fmt;

use crate::dataset::{AnnotationRecord, Dataset, Question};
use crate::error::{Error, Result};

/// Reported confidences strictly above this value assert a match.
pub const DECISION_THRESHOLD: f64 = 0.5;

fn check_confidence(confidence: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&confidence) {
        return Err(Error::OutOfRange {
            name: "confidence",
            value: confidence,
            expected: "[0, 1]",
        });
    }
    Ok(())
}

/// Normalized confidence `2*|c - 0.5|`: 0 at neutrality, 1 at either extreme.
///
/// Computed by reflecting onto the upper half first, which keeps the result
/// bit-identical for `c` and `1.0 - c`; the naive absolute-value form loses
/// that exactness to the rounding of `1.0 - c` below 0.5.
pub fn normalize_confidence(confidence: f64) -> Result<f64> {
    check_confidence(confidence)?;
    Ok(2.0 * (confidence.max(1.0 - confidence) - 0.5))
}

/// The binary decision a confidence encodes: true iff strictly above 0.5.
/// A confidence of exactly 0.5 is a predicted non-match.
pub fn predicted_label(confidence: f64) -> Result<bool> {
    check_confidence(confidence)?;
    Ok(confidence > DECISION_THRESHOLD)
}

/// Confusion-matrix classification of a single decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfusionOutcome {
    TruePositive,
    FalsePositive,
    TrueNegative,
    FalseNegative,
}

impl ConfusionOutcome {
    pub fn from_labels(predicted_match: bool, true_match: bool) -> Self {
        match (predicted_match, true_match) {
            (true, true) => ConfusionOutcome::TruePositive,
            (true, false) => ConfusionOutcome::FalsePositive,
            (false, false) => ConfusionOutcome::TrueNegative,
            (false, true) => ConfusionOutcome::FalseNegative,
        }
    }

    pub fn is_correct(self) -> bool {
        matches!(
            self,
            ConfusionOutcome::TruePositive | ConfusionOutcome::TrueNegative
        )
    }

    pub fn predicted_positive(self) -> bool {
        matches!(
            self,
            ConfusionOutcome::TruePositive | ConfusionOutcome::FalsePositive
        )
    }

    pub fn code(self) -> &'static str {
        match self {
            ConfusionOutcome::TruePositive => "TP",
            ConfusionOutcome::FalsePositive => "FP",
            ConfusionOutcome::TrueNegative => "TN",
            ConfusionOutcome::FalseNegative => "FN",
        }
    }
}

impl fmt::Display for ConfusionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Classifies one decision against its question's true label.
pub fn confusion_outcome(
    record: &AnnotationRecord,
    question: &Question,
) -> Result<ConfusionOutcome> {
    if record.question_id != question.id {
        return Err(Error::InvalidArgument(format!(
            "record is for question {} but question {} was given",
            record.question_id, question.id
        )));
    }
    Ok(ConfusionOutcome::from_labels(
        predicted_label(record.confidence)?,
        question.true_label,
    ))
}

/// A set of question ids that subset-level measures are restricted to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuestionSubset {
    ids: BTreeSet<String>,
}

impl QuestionSubset {
    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            ids: ids.into_iter().map(Into::into).collect(),
        }
    }

    /// Every question in the dataset.
    pub fn full(dataset: &Dataset) -> Self {
        Self::new(dataset.questions().iter().map(|q| q.id.clone()))
    }

    /// The questions one annotator answered.
    pub fn answered_by(dataset: &Dataset, annotator: &str) -> Result<Self> {
        let records = dataset
            .records_for(annotator)
            .ok_or_else(|| Error::AnnotatorNotFound(annotator.to_string()))?;
        Ok(Self::new(records.iter().map(|r| r.question_id.clone())))
    }

    pub fn insert(&mut self, id: impl Into<String>) -> bool {
        self.ids.insert(id.into())
    }

    pub fn remove(&mut self, id: &str) -> bool {
        self.ids.remove(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for QuestionSubset {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Resolves a subset into (record, question) pairs for one annotator, ordered
/// by the question series. Errors if the annotator is unknown, a question id
/// is unknown, or the annotator skipped a subset question.
pub(crate) fn subset_decisions<'a>(
    dataset: &'a Dataset,
    annotator: &str,
    subset: &QuestionSubset,
) -> Result<Vec<(&'a AnnotationRecord, &'a Question)>> {
    if !dataset.contains_annotator(annotator) {
        return Err(Error::AnnotatorNotFound(annotator.to_string()));
    }
    let mut decisions = Vec::with_capacity(subset.len());
    for id in subset.iter() {
        let question = dataset
            .question(id)
            .ok_or_else(|| Error::QuestionNotFound(id.to_string()))?;
        let record = dataset
            .record(annotator, id)
            .ok_or_else(|| Error::SubsetNotCovered {
                annotator: annotator.to_string(),
                question: id.to_string(),
            })?;
        decisions.push((record, question));
    }
    decisions.sort_by_key(|(_, q)| q.order_index);
    Ok(decisions)
}

/// Proportion of subset decisions labeled correctly (TP or TN).
pub fn accuracy(dataset: &Dataset, annotator: &str, subset: &QuestionSubset) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset("accuracy"));
    }
    let decisions = subset_decisions(dataset, annotator, subset)?;
    let mut correct = 0usize;
    for (record, question) in &decisions {
        if confusion_outcome(record, question)?.is_correct() {
            correct += 1;
        }
    }
    Ok(correct as f64 / decisions.len() as f64)
}

/// Fraction of positive predictions in the subset that are correct, or `None`
/// when the annotator made no positive prediction there.
pub fn precision(
    dataset: &Dataset,
    annotator: &str,
    subset: &QuestionSubset,
) -> Result<Option<f64>> {
    let decisions = subset_decisions(dataset, annotator, subset)?;
    let mut positives = 0usize;
    let mut true_positives = 0usize;
    for (record, question) in &decisions {
        let outcome = confusion_outcome(record, question)?;
        if outcome.predicted_positive() {
            positives += 1;
            if outcome == ConfusionOutcome::TruePositive {
                true_positives += 1;
            }
        }
    }
    if positives == 0 {
        return Ok(None);
    }
    Ok(Some(true_positives as f64 / positives as f64))
}

/// Mean normalized confidence over the subset, optionally restricted to
/// decisions whose confusion outcome is in `outcome_filter`. `None` when the
/// filtered set is empty.
pub fn mean_normalized_confidence(
    dataset: &Dataset,
    annotator: &str,
    subset: &QuestionSubset,
    outcome_filter: Option<&[ConfusionOutcome]>,
) -> Result<Option<f64>> {
    let decisions = subset_decisions(dataset, annotator, subset)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for (record, question) in &decisions {
        if let Some(filter) = outcome_filter {
            let outcome = confusion_outcome(record, question)?;
            if !filter.contains(&outcome) {
                continue;
            }
        }
        sum += normalize_confidence(record.confidence)?;
        count += 1;
    }
    if count == 0 {
        return Ok(None);
    }
    Ok(Some(sum / count as f64))
}
