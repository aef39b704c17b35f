//! Core data model for recorded human matching decisions.
//!
//! A [`Dataset`] ties together the ordered series of matching questions shown
//! to annotators, the expert reference match used to grade them, and one
//! confidence/response-time record per (annotator, question) decision. The
//! dataset is immutable after construction and safe to share across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::measures;

/// A pair of attribute identifiers, one from each of the two schemata being
/// matched.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributePair {
    pub left: String,
    pub right: String,
}

impl AttributePair {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Self {
        Self {
            left: left.into(),
            right: right.into(),
        }
    }
}

impl fmt::Display for AttributePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// One matching question: an attribute pair plus its position in the series
/// and its ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct Question {
    pub id: String,
    /// Position in the ordered question series; 0-based and contiguous
    /// within a dataset.
    pub order_index: usize,
    pub pair: AttributePair,
    /// True iff the pair belongs to the reference match.
    pub true_label: bool,
}

/// Expert-curated set of attribute pairs considered correct matches.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceMatch {
    pairs: BTreeSet<AttributePair>,
}

impl ReferenceMatch {
    /// Builds the set; duplicate pairs collapse silently (set semantics).
    pub fn new(pairs: impl IntoIterator<Item = AttributePair>) -> Self {
        Self {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn contains(&self, pair: &AttributePair) -> bool {
        self.pairs.contains(pair)
    }

    pub fn pairs(&self) -> impl Iterator<Item = &AttributePair> {
        self.pairs.iter()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl FromIterator<AttributePair> for ReferenceMatch {
    fn from_iter<I: IntoIterator<Item = AttributePair>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// A single recorded decision: the reported confidence and the response time.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRecord {
    pub annotator_id: String,
    pub question_id: String,
    /// Reported confidence in [0, 1]; values strictly above 0.5 assert a match.
    pub confidence: f64,
    /// Wall-clock answering time; strictly positive.
    pub response_time_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct AnnotatorIndex {
    /// question_id -> index into `Dataset::records`.
    by_question: BTreeMap<String, usize>,
    /// Record indices ordered by the question's `order_index`.
    ordered: Vec<usize>,
}

/// Immutable collection of questions, annotators, decisions and the reference
/// match, with indexed access by annotator and question.
///
/// [`Dataset::new`] enforces every integrity rule and is the only constructor
/// regular code should use. [`Dataset::from_parts_unchecked`] skips the checks
/// so that [`crate::ingest::validate`] has something to report on.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    questions: Vec<Question>,
    question_by_id: BTreeMap<String, usize>,
    annotators: BTreeSet<String>,
    records: Vec<AnnotationRecord>,
    by_annotator: BTreeMap<String, AnnotatorIndex>,
    reference: ReferenceMatch,
}

impl Dataset {
    /// Builds a dataset, deriving the annotator set from the records and
    /// verifying every integrity rule. The question list is stored sorted by
    /// `order_index`.
    pub fn new(
        mut questions: Vec<Question>,
        records: Vec<AnnotationRecord>,
        reference: ReferenceMatch,
    ) -> Result<Self> {
        questions.sort_by_key(|q| q.order_index);
        let annotators: BTreeSet<String> =
            records.iter().map(|r| r.annotator_id.clone()).collect();
        let dataset = Self::from_parts_unchecked(questions, annotators, records, reference);
        let violations = crate::ingest::validate(&dataset);
        if let Some(first) = violations.first() {
            let extra = violations.len() - 1;
            let detail = if extra == 0 {
                first.to_string()
            } else {
                format!("{first} (+{extra} more)")
            };
            return Err(Error::Integrity(detail));
        }
        Ok(dataset)
    }

    /// Assembles a dataset without integrity checks. Intended for tests and
    /// for staging data that [`crate::ingest::validate`] will inspect; other
    /// operations assume a dataset that passes validation.
    pub fn from_parts_unchecked(
        questions: Vec<Question>,
        annotators: BTreeSet<String>,
        records: Vec<AnnotationRecord>,
        reference: ReferenceMatch,
    ) -> Self {
        let mut question_by_id = BTreeMap::new();
        for (i, q) in questions.iter().enumerate() {
            question_by_id.entry(q.id.clone()).or_insert(i);
        }
        let mut by_annotator: BTreeMap<String, AnnotatorIndex> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            let index = by_annotator.entry(r.annotator_id.clone()).or_default();
            // On duplicate (annotator, question) pairs the first record wins;
            // validation reports the duplicate.
            index.by_question.entry(r.question_id.clone()).or_insert(i);
            index.ordered.push(i);
        }
        for index in by_annotator.values_mut() {
            index.ordered.sort_by_key(|&i| {
                let order = question_by_id
                    .get(&records[i].question_id)
                    .map(|&qi| questions[qi].order_index)
                    .unwrap_or(usize::MAX);
                (order, i)
            });
        }
        Self {
            questions,
            question_by_id,
            annotators,
            records,
            by_annotator,
            reference,
        }
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn question(&self, id: &str) -> Option<&Question> {
        self.question_by_id.get(id).map(|&i| &self.questions[i])
    }

    pub fn question_count(&self) -> usize {
        self.questions.len()
    }

    pub fn annotators(&self) -> &BTreeSet<String> {
        &self.annotators
    }

    pub fn annotator_count(&self) -> usize {
        self.annotators.len()
    }

    pub fn contains_annotator(&self, id: &str) -> bool {
        self.annotators.contains(id)
    }

    pub fn records(&self) -> &[AnnotationRecord] {
        &self.records
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn record(&self, annotator: &str, question: &str) -> Option<&AnnotationRecord> {
        self.by_annotator
            .get(annotator)?
            .by_question
            .get(question)
            .map(|&i| &self.records[i])
    }

    /// All records of one annotator, ordered by the question series, or `None`
    /// for an unknown annotator.
    pub fn records_for(&self, annotator: &str) -> Option<Vec<&AnnotationRecord>> {
        let index = self.by_annotator.get(annotator)?;
        Some(index.ordered.iter().map(|&i| &self.records[i]).collect())
    }

    pub fn reference(&self) -> &ReferenceMatch {
        &self.reference
    }
}

/// Sparse similarity matrix holding one similarity entry per answered
/// question.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseSimilarityMatrix {
    entries: BTreeMap<AttributePair, f64>,
}

impl SparseSimilarityMatrix {
    /// Builds a matrix from explicit entries; values must lie in [0, 1].
    /// Later duplicates of a pair overwrite earlier ones.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (AttributePair, f64)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (pair, value) in entries {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name: "similarity",
                    value,
                    expected: "[0, 1]",
                });
            }
            map.insert(pair, value);
        }
        Ok(Self { entries: map })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&AttributePair, f64)> {
        self.entries.iter().map(|(p, &v)| (p, v))
    }

    pub fn get(&self, pair: &AttributePair) -> Option<f64> {
        self.entries.get(pair).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Builds the annotator's sparse similarity matrix: one entry per answered
/// question, valued at the reported confidence.
pub fn build_similarity_matrix(
    dataset: &Dataset,
    annotator: &str,
) -> Result<SparseSimilarityMatrix> {
    let records = dataset
        .records_for(annotator)
        .ok_or_else(|| Error::AnnotatorNotFound(annotator.to_string()))?;
    let mut entries = BTreeMap::new();
    for record in records {
        let question = dataset
            .question(&record.question_id)
            .ok_or_else(|| Error::QuestionNotFound(record.question_id.clone()))?;
        entries.insert(question.pair.clone(), record.confidence);
    }
    Ok(SparseSimilarityMatrix { entries })
}

/// Binarizes a similarity matrix: the pairs whose entry is strictly greater
/// than `delta`. An entry equal to `delta` is a predicted non-match; shared
/// with [`crate::measures::predicted_label`] via the strict inequality.
pub fn threshold_match(matrix: &SparseSimilarityMatrix, delta: f64) -> BTreeSet<AttributePair> {
    matrix
        .entries
        .iter()
        .filter(|&(_, &v)| v > delta)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Convenience: the annotator's predicted match under the default 0.5
/// decision threshold.
pub fn predicted_match(dataset: &Dataset, annotator: &str) -> Result<BTreeSet<AttributePair>> {
    let matrix = build_similarity_matrix(dataset, annotator)?;
    Ok(threshold_match(&matrix, measures::DECISION_THRESHOLD))
}
