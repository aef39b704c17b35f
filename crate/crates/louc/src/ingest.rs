//! Loading, validating and serializing annotation logs and reference matches.
//!
//! The annotation format is delimiter-separated text with a header row and
//! the required columns `annotator_id`, `question_id`, `left_attribute`,
//! `right_attribute`, `confidence`, `response_time_seconds`, plus an optional
//! `order_index` column. Question order follows the `order_index` column when
//! present (values need only be distinct; they are ranked), and
//! first-appearance order otherwise. A question's true label is always
//! computed against the reference match, never read from the annotation file.
//!
//! The reference match is a separate two-column file
//! (`left_attribute,right_attribute`).

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::dataset::{AnnotationRecord, AttributePair, Dataset, Question, ReferenceMatch};
use crate::error::{Error, Result};

/// Scale the confidence column is declared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConfidenceScale {
    /// 0 to 100, 50 neutral: the scale annotation interfaces collect.
    #[default]
    Percent0To100,
    /// Already in [0, 1].
    Unit0To1,
}

impl ConfidenceScale {
    fn to_unit(self, raw: f64) -> Option<f64> {
        match self {
            ConfidenceScale::Percent0To100 => {
                if (0.0..=100.0).contains(&raw) {
                    Some(raw / 100.0)
                } else {
                    None
                }
            }
            ConfidenceScale::Unit0To1 => {
                if (0.0..=1.0).contains(&raw) {
                    Some(raw)
                } else {
                    None
                }
            }
        }
    }

    fn bounds(self) -> &'static str {
        match self {
            ConfidenceScale::Percent0To100 => "[0, 100]",
            ConfidenceScale::Unit0To1 => "[0, 1]",
        }
    }
}

/// Ingest behavior switches.
#[derive(Debug, Clone, Default)]
pub struct IngestConfig {
    pub confidence_scale: ConfidenceScale,
    /// In strict mode (the default via [`IngestConfig::strict`]) any bad row
    /// aborts the load; otherwise bad rows are rejected and reported.
    pub lenient: bool,
}

impl IngestConfig {
    pub fn strict(confidence_scale: ConfidenceScale) -> Self {
        Self {
            confidence_scale,
            lenient: false,
        }
    }

    pub fn lenient(confidence_scale: ConfidenceScale) -> Self {
        Self {
            confidence_scale,
            lenient: true,
        }
    }
}

/// One rejected row and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowRejection {
    /// 1-based line number in the source file (the header is line 1).
    pub row: usize,
    pub reason: String,
}

/// What a load saw: rows read, rows rejected and the reasons.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rejections: Vec<RowRejection>,
}

impl IngestReport {
    pub fn rows_rejected(&self) -> usize {
        self.rejections.len()
    }

    pub fn rows_accepted(&self) -> usize {
        self.rows_read - self.rejections.len()
    }
}

const REQUIRED_COLUMNS: [&str; 6] = [
    "annotator_id",
    "question_id",
    "left_attribute",
    "right_attribute",
    "confidence",
    "response_time_seconds",
];

struct Columns {
    annotator: usize,
    question: usize,
    left: usize,
    right: usize,
    confidence: usize,
    time: usize,
    order: Option<usize>,
}

fn locate_columns(path: &Path, headers: &csv::StringRecord) -> Result<Columns> {
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
            })
    };
    for name in REQUIRED_COLUMNS {
        find(name)?;
    }
    Ok(Columns {
        annotator: find("annotator_id")?,
        question: find("question_id")?,
        left: find("left_attribute")?,
        right: find("right_attribute")?,
        confidence: find("confidence")?,
        time: find("response_time_seconds")?,
        order: headers.iter().position(|h| h.trim() == "order_index"),
    })
}

struct QuestionDraft {
    pair: AttributePair,
    order_value: Option<u64>,
    first_appearance: usize,
}

/// Loads an annotation log into a [`Dataset`] graded against `reference`.
pub fn load_annotations(
    path: impl AsRef<Path>,
    config: &IngestConfig,
    reference: ReferenceMatch,
) -> Result<(Dataset, IngestReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_annotations_from_reader(file, path, config, reference)
}

/// As [`load_annotations`], over any reader; `path` only labels errors.
pub fn load_annotations_from_reader(
    reader: impl Read,
    path: impl AsRef<Path>,
    config: &IngestConfig,
    reference: ReferenceMatch,
) -> Result<(Dataset, IngestReport)> {
    let path = path.as_ref();
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?
        .clone();
    let columns = locate_columns(path, &headers)?;

    let mut report = IngestReport::default();
    let mut records: Vec<AnnotationRecord> = Vec::new();
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let mut questions: BTreeMap<String, QuestionDraft> = BTreeMap::new();
    let mut pair_owner: BTreeMap<AttributePair, String> = BTreeMap::new();
    let mut appearance = 0usize;

    let reject = |report: &mut IngestReport, row: usize, reason: String| -> Result<()> {
        if config.lenient {
            crate::vlog(format_args!("{}: row {row} rejected: {reason}", path.display()));
            report.rejections.push(RowRejection { row, reason });
            Ok(())
        } else {
            Err(Error::Ingest {
                path: path.to_path_buf(),
                row,
                reason,
            })
        }
    };

    for (index, result) in csv_reader.records().enumerate() {
        report.rows_read += 1;
        // Data rows start on line 2; quoted multi-line fields would shift
        // this, but the format forbids them in practice.
        let line = index + 2;
        let record = match result {
            Ok(record) => record,
            Err(e) => {
                reject(&mut report, line, format!("malformed row: {e}"))?;
                continue;
            }
        };
        let field = |i: usize| record.get(i).unwrap_or("").to_string();
        let annotator_id = field(columns.annotator);
        let question_id = field(columns.question);
        let left = field(columns.left);
        let right = field(columns.right);

        if annotator_id.is_empty() || question_id.is_empty() {
            reject(
                &mut report,
                line,
                "empty annotator_id or question_id".to_string(),
            )?;
            continue;
        }
        if left.is_empty() || right.is_empty() {
            reject(&mut report, line, "empty attribute identifier".to_string())?;
            continue;
        }

        let raw_confidence: f64 = match field(columns.confidence).parse() {
            Ok(v) => v,
            Err(_) => {
                reject(
                    &mut report,
                    line,
                    format!("unparseable confidence '{}'", field(columns.confidence)),
                )?;
                continue;
            }
        };
        let Some(confidence) = config.confidence_scale.to_unit(raw_confidence) else {
            reject(
                &mut report,
                line,
                format!(
                    "confidence {raw_confidence} outside declared scale {}",
                    config.confidence_scale.bounds()
                ),
            )?;
            continue;
        };

        let time: f64 = match field(columns.time).parse() {
            Ok(v) => v,
            Err(_) => {
                reject(
                    &mut report,
                    line,
                    format!(
                        "unparseable response_time_seconds '{}'",
                        field(columns.time)
                    ),
                )?;
                continue;
            }
        };
        if time <= 0.0 || !time.is_finite() {
            reject(
                &mut report,
                line,
                format!("non-positive response time {time}"),
            )?;
            continue;
        }

        let order_value: Option<u64> = match columns.order {
            None => None,
            Some(i) => match field(i).parse() {
                Ok(v) => Some(v),
                Err(_) => {
                    reject(
                        &mut report,
                        line,
                        format!("unparseable order_index '{}'", field(i)),
                    )?;
                    continue;
                }
            },
        };

        let pair = AttributePair::new(left, right);
        // Question consistency: a question id pins its pair and order; a pair
        // belongs to a single question.
        match questions.get(&question_id) {
            Some(existing) => {
                if existing.pair != pair {
                    reject(
                        &mut report,
                        line,
                        format!(
                            "question {question_id} redefined with pair {pair}, \
                             previously {}",
                            existing.pair
                        ),
                    )?;
                    continue;
                }
                if existing.order_value != order_value {
                    reject(
                        &mut report,
                        line,
                        format!("question {question_id} has conflicting order_index values"),
                    )?;
                    continue;
                }
            }
            None => {
                if let Some(owner) = pair_owner.get(&pair) {
                    if owner != &question_id {
                        reject(
                            &mut report,
                            line,
                            format!("pair {pair} already belongs to question {owner}"),
                        )?;
                        continue;
                    }
                }
            }
        }

        let key = (annotator_id.clone(), question_id.clone());
        if seen.contains(&key) {
            reject(
                &mut report,
                line,
                format!("duplicate record for annotator {annotator_id} on question {question_id}"),
            )?;
            continue;
        }

        // Row accepted: register the question on first sight.
        if !questions.contains_key(&question_id) {
            pair_owner.insert(pair.clone(), question_id.clone());
            questions.insert(
                question_id.clone(),
                QuestionDraft {
                    pair,
                    order_value,
                    first_appearance: appearance,
                },
            );
            appearance += 1;
        }
        seen.insert(key);
        records.push(AnnotationRecord {
            annotator_id,
            question_id,
            confidence,
            response_time_seconds: time,
        });
    }

    // Rank questions: by explicit order values when the column is present,
    // by first appearance otherwise.
    let mut drafts: Vec<(String, QuestionDraft)> = questions.into_iter().collect();
    if columns.order.is_some() {
        let mut seen_orders: BTreeMap<u64, String> = BTreeMap::new();
        for (id, draft) in &drafts {
            let Some(value) = draft.order_value else {
                continue;
            };
            if let Some(other) = seen_orders.insert(value, id.clone()) {
                return Err(Error::Integrity(format!(
                    "{}: questions {other} and {id} share order_index {value}",
                    path.display()
                )));
            }
        }
        drafts.sort_by_key(|(_, d)| (d.order_value, d.first_appearance));
    } else {
        drafts.sort_by_key(|(_, d)| d.first_appearance);
    }
    let question_list: Vec<Question> = drafts
        .into_iter()
        .enumerate()
        .map(|(rank, (id, draft))| Question {
            id,
            order_index: rank,
            true_label: reference.contains(&draft.pair),
            pair: draft.pair,
        })
        .collect();

    let dataset = Dataset::new(question_list, records, reference)?;
    Ok((dataset, report))
}

/// Loads a reference match. Returns the set plus one warning per duplicate
/// row collapsed by set semantics.
pub fn load_reference(path: impl AsRef<Path>) -> Result<(ReferenceMatch, Vec<String>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    load_reference_from_reader(file, path)
}

/// As [`load_reference`], over any reader.
pub fn load_reference_from_reader(
    reader: impl Read,
    path: impl AsRef<Path>,
) -> Result<(ReferenceMatch, Vec<String>)> {
    let path = path.as_ref();
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            source: e,
        })?
        .clone();
    let left_col = headers
        .iter()
        .position(|h| h.trim() == "left_attribute")
        .ok_or_else(|| Error::MissingColumn {
            path: path.to_path_buf(),
            column: "left_attribute".to_string(),
        })?;
    let right_col = headers
        .iter()
        .position(|h| h.trim() == "right_attribute")
        .ok_or_else(|| Error::MissingColumn {
            path: path.to_path_buf(),
            column: "right_attribute".to_string(),
        })?;

    let mut pairs = BTreeSet::new();
    let mut warnings = Vec::new();
    for (index, result) in csv_reader.records().enumerate() {
        let line = index + 2;
        let record = result.map_err(|e| Error::Ingest {
            path: path.to_path_buf(),
            row: line,
            reason: format!("malformed row: {e}"),
        })?;
        let left = record.get(left_col).unwrap_or("").to_string();
        let right = record.get(right_col).unwrap_or("").to_string();
        if left.is_empty() || right.is_empty() {
            return Err(Error::Ingest {
                path: path.to_path_buf(),
                row: line,
                reason: "empty attribute identifier".to_string(),
            });
        }
        let pair = AttributePair::new(left, right);
        if !pairs.insert(pair.clone()) {
            warnings.push(format!("row {line}: duplicate reference pair {pair}"));
        }
    }
    Ok((ReferenceMatch::new(pairs), warnings))
}

/// A broken dataset invariant: which rule, on which entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub entity: String,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}: {}", self.invariant, self.entity, self.detail)
    }
}

/// Checks every dataset invariant and returns one violation per breach;
/// an empty list means the dataset is sound. Violations are data, not errors.
pub fn validate(dataset: &Dataset) -> Vec<Violation> {
    let mut violations = Vec::new();
    let push = |violations: &mut Vec<Violation>,
                invariant: &'static str,
                entity: String,
                detail: String| {
        violations.push(Violation {
            invariant,
            entity,
            detail,
        });
    };

    // Questions: unique ids, non-empty attribute names, unique pairs,
    // contiguous order indexes, labels consistent with the reference.
    let mut ids = BTreeSet::new();
    let mut pairs: BTreeMap<&AttributePair, &str> = BTreeMap::new();
    let mut orders = BTreeSet::new();
    for question in dataset.questions() {
        if !ids.insert(question.id.as_str()) {
            push(
                &mut violations,
                "question-id-unique",
                format!("question {}", question.id),
                "duplicate question id".to_string(),
            );
        }
        if question.pair.left.is_empty() || question.pair.right.is_empty() {
            push(
                &mut violations,
                "attribute-identifiers-non-empty",
                format!("question {}", question.id),
                format!("pair {} has an empty side", question.pair),
            );
        }
        if let Some(owner) = pairs.insert(&question.pair, &question.id) {
            push(
                &mut violations,
                "pair-unique",
                format!("question {}", question.id),
                format!("pair {} already used by question {owner}", question.pair),
            );
        }
        if !orders.insert(question.order_index) {
            push(
                &mut violations,
                "order-index-distinct",
                format!("question {}", question.id),
                format!("duplicate order_index {}", question.order_index),
            );
        }
        let expected = dataset.reference().contains(&question.pair);
        if question.true_label != expected {
            push(
                &mut violations,
                "true-label-matches-reference",
                format!("question {}", question.id),
                format!(
                    "true_label {} but the reference says {expected}",
                    question.true_label
                ),
            );
        }
    }
    let question_count = dataset.question_count();
    if !orders.is_empty() {
        let min = *orders.iter().next().unwrap();
        let max = *orders.iter().next_back().unwrap();
        if min != 0 || max != question_count - 1 || orders.len() != question_count {
            push(
                &mut violations,
                "order-index-contiguous",
                "question series".to_string(),
                format!(
                    "order indexes must cover 0..{} exactly",
                    question_count - 1
                ),
            );
        }
    }

    // Records: in-range values, known question and annotator, uniqueness.
    let mut seen: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut annotators_with_records: BTreeSet<&str> = BTreeSet::new();
    for record in dataset.records() {
        let entity = format!(
            "record ({}, {})",
            record.annotator_id, record.question_id
        );
        if !(0.0..=1.0).contains(&record.confidence) {
            push(
                &mut violations,
                "confidence-in-range",
                entity.clone(),
                format!("confidence {} outside [0, 1]", record.confidence),
            );
        }
        if record.response_time_seconds <= 0.0 || !record.response_time_seconds.is_finite() {
            push(
                &mut violations,
                "response-time-positive",
                entity.clone(),
                format!("response time {}", record.response_time_seconds),
            );
        }
        if dataset.question(&record.question_id).is_none() {
            push(
                &mut violations,
                "record-question-exists",
                entity.clone(),
                format!("question {} is not in the dataset", record.question_id),
            );
        }
        if !dataset.contains_annotator(&record.annotator_id) {
            push(
                &mut violations,
                "record-annotator-known",
                entity.clone(),
                format!("annotator {} is not in the dataset", record.annotator_id),
            );
        }
        if !seen.insert((record.annotator_id.as_str(), record.question_id.as_str())) {
            push(
                &mut violations,
                "record-unique-per-annotator-question",
                entity,
                "duplicate record for this annotator and question".to_string(),
            );
        }
        annotators_with_records.insert(record.annotator_id.as_str());
    }
    for annotator in dataset.annotators() {
        if !annotators_with_records.contains(annotator.as_str()) {
            push(
                &mut violations,
                "annotator-has-records",
                format!("annotator {annotator}"),
                "annotator has no records".to_string(),
            );
        }
    }
    violations
}

/// Serializes a dataset back to the annotation format: unit-scale
/// confidences, shortest-round-trip floats, one `order_index` column, rows
/// sorted by annotator then question order.
pub fn annotations_to_csv(dataset: &Dataset) -> String {
    let mut out = String::from(
        "annotator_id,question_id,left_attribute,right_attribute,confidence,response_time_seconds,order_index\n",
    );
    for annotator in dataset.annotators() {
        for record in dataset.records_for(annotator).expect("annotator is known") {
            let question = dataset
                .question(&record.question_id)
                .expect("records reference known questions");
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                escape(&record.annotator_id),
                escape(&record.question_id),
                escape(&question.pair.left),
                escape(&question.pair.right),
                record.confidence,
                record.response_time_seconds,
                question.order_index,
            ));
        }
    }
    out
}

/// Serializes a reference match to its two-column format.
pub fn reference_to_csv(reference: &ReferenceMatch) -> String {
    let mut out = String::from("left_attribute,right_attribute\n");
    for pair in reference.pairs() {
        out.push_str(&format!("{},{}\n", escape(&pair.left), escape(&pair.right)));
    }
    out
}

fn escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn write_annotations(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path: PathBuf = path.as_ref().to_path_buf();
    std::fs::write(&path, annotations_to_csv(dataset)).map_err(|e| Error::Io {
        path,
        source: e,
    })
}

pub fn write_reference(reference: &ReferenceMatch, path: impl AsRef<Path>) -> Result<()> {
    let path: PathBuf = path.as_ref().to_path_buf();
    std::fs::write(&path, reference_to_csv(reference)).map_err(|e| Error::Io {
        path,
        source: e,
    })
}

/// Convenience for loading a cohort from its two files in one call.
pub fn load_cohort(
    annotations: impl AsRef<Path>,
    reference: impl AsRef<Path>,
    config: &IngestConfig,
) -> Result<(Dataset, IngestReport, Vec<String>)> {
    let (reference, warnings) = load_reference(reference)?;
    let (dataset, report) = load_annotations(annotations, config, reference)?;
    Ok((dataset, report, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = "left_attribute,right_attribute\na0,b0\na1,b1\n";

    fn reference() -> ReferenceMatch {
        load_reference_from_reader(REFERENCE.as_bytes(), "ref.csv")
            .unwrap()
            .0
    }

    fn load(text: &str, config: &IngestConfig) -> Result<(Dataset, IngestReport)> {
        load_annotations_from_reader(text.as_bytes(), "annotations.csv", config, reference())
    }

    const HEADER: &str =
        "annotator_id,question_id,left_attribute,right_attribute,confidence,response_time_seconds\n";

    #[test]
    fn percent_scale_endpoints() {
        let text = format!(
            "{HEADER}h1,q1,a0,b0,100,12\nh1,q2,a1,b1,50,8\nh1,q3,a2,b2,0,5\n"
        );
        let (ds, report) = load(&text, &IngestConfig::default()).unwrap();
        assert_eq!(report.rows_read, 3);
        assert_eq!(report.rows_rejected(), 0);
        assert_eq!(ds.record("h1", "q1").unwrap().confidence, 1.0);
        assert_eq!(ds.record("h1", "q2").unwrap().confidence, 0.5);
        assert_eq!(
            crate::measures::normalize_confidence(ds.record("h1", "q2").unwrap().confidence)
                .unwrap(),
            0.0
        );
        assert_eq!(ds.record("h1", "q3").unwrap().confidence, 0.0);
    }

    #[test]
    fn unit_scale_rejects_out_of_range() {
        let text = format!("{HEADER}h1,q1,a0,b0,1.2,12\n");
        let config = IngestConfig::strict(ConfidenceScale::Unit0To1);
        assert!(matches!(
            load(&text, &config),
            Err(Error::Ingest { row: 2, .. })
        ));
    }

    #[test]
    fn missing_column_is_reported() {
        let text = "annotator_id,question_id,left_attribute,right_attribute,confidence\nh1,q1,a0,b0,80\n";
        assert!(matches!(
            load(text, &IngestConfig::default()),
            Err(Error::MissingColumn { column, .. }) if column == "response_time_seconds"
        ));
    }

    #[test]
    fn duplicate_row_aborts_in_strict_mode() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,12\nh1,q1,a0,b0,70,9\n");
        assert!(matches!(
            load(&text, &IngestConfig::default()),
            Err(Error::Ingest { row: 3, .. })
        ));
    }

    #[test]
    fn duplicate_row_is_rejected_in_lenient_mode() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,12\nh1,q1,a0,b0,70,9\n");
        let config = IngestConfig::lenient(ConfidenceScale::Percent0To100);
        let (ds, report) = load(&text, &config).unwrap();
        assert_eq!(report.rows_read, 2);
        assert_eq!(report.rows_rejected(), 1);
        assert_eq!(report.rejections[0].row, 3);
        // Never last-write-wins: the first row stands.
        assert_eq!(ds.record("h1", "q1").unwrap().confidence, 0.8);
        assert_eq!(report.rows_accepted(), ds.record_count());
    }

    #[test]
    fn non_positive_time_is_rejected() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,0\n");
        assert!(load(&text, &IngestConfig::default()).is_err());
    }

    #[test]
    fn conflicting_pair_for_question_is_rejected() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,12\nh2,q1,a9,b9,70,9\n");
        assert!(matches!(
            load(&text, &IngestConfig::default()),
            Err(Error::Ingest { row: 3, .. })
        ));
    }

    #[test]
    fn true_labels_come_from_the_reference() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,12\nh1,q2,a9,b9,20,7\n");
        let (ds, _) = load(&text, &IngestConfig::default()).unwrap();
        assert!(ds.question("q1").unwrap().true_label);
        assert!(!ds.question("q2").unwrap().true_label);
    }

    #[test]
    fn question_order_follows_first_appearance() {
        let text = format!("{HEADER}h1,q9,a9,b9,80,12\nh1,q1,a0,b0,20,7\n");
        let (ds, _) = load(&text, &IngestConfig::default()).unwrap();
        assert_eq!(ds.question("q9").unwrap().order_index, 0);
        assert_eq!(ds.question("q1").unwrap().order_index, 1);
    }

    #[test]
    fn explicit_order_column_wins() {
        let text = "annotator_id,question_id,left_attribute,right_attribute,confidence,response_time_seconds,order_index\n\
                    h1,q9,a9,b9,80,12,5\n\
                    h1,q1,a0,b0,20,7,2\n";
        let (ds, _) = load_annotations_from_reader(
            text.as_bytes(),
            "annotations.csv",
            &IngestConfig::default(),
            reference(),
        )
        .unwrap();
        // Values 5 and 2 rank to 1 and 0.
        assert_eq!(ds.question("q9").unwrap().order_index, 1);
        assert_eq!(ds.question("q1").unwrap().order_index, 0);
    }

    #[test]
    fn empty_reference_file() {
        let (reference, warnings) =
            load_reference_from_reader("left_attribute,right_attribute\n".as_bytes(), "ref.csv")
                .unwrap();
        assert!(reference.is_empty());
        assert!(warnings.is_empty());
    }

    #[test]
    fn duplicate_reference_pair_warns() {
        let text = "left_attribute,right_attribute\na0,b0\na0,b0\na1,b1\n";
        let (reference, warnings) =
            load_reference_from_reader(text.as_bytes(), "ref.csv").unwrap();
        assert_eq!(reference.len(), 2);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn validate_clean_dataset() {
        let text = format!("{HEADER}h1,q1,a0,b0,80,12\nh1,q2,a1,b1,20,7\n");
        let (ds, _) = load(&text, &IngestConfig::default()).unwrap();
        assert!(validate(&ds).is_empty());
    }

    #[test]
    fn validate_reports_injected_duplicates() {
        use crate::dataset::Question;
        let questions = vec![Question {
            id: "q1".into(),
            order_index: 0,
            pair: AttributePair::new("a0", "b0"),
            true_label: false,
        }];
        let record = AnnotationRecord {
            annotator_id: "h1".into(),
            question_id: "q1".into(),
            confidence: 0.8,
            response_time_seconds: 10.0,
        };
        let ds = Dataset::from_parts_unchecked(
            questions,
            BTreeSet::from(["h1".to_string()]),
            vec![record.clone(), record],
            ReferenceMatch::default(),
        );
        let violations = validate(&ds);
        assert!(violations
            .iter()
            .any(|v| v.invariant == "record-unique-per-annotator-question"));
    }

    #[test]
    fn validate_reports_unknown_question() {
        let record = AnnotationRecord {
            annotator_id: "h1".into(),
            question_id: "ghost".into(),
            confidence: 0.8,
            response_time_seconds: 10.0,
        };
        let ds = Dataset::from_parts_unchecked(
            Vec::new(),
            BTreeSet::from(["h1".to_string()]),
            vec![record],
            ReferenceMatch::default(),
        );
        let violations = validate(&ds);
        assert!(violations.iter().any(|v| v.invariant == "record-question-exists"));
    }

    #[test]
    fn full_study_shaped_cohort_loads_with_expected_counts() {
        // 147 annotators x 30 questions, half of them matches.
        let original = crate::synth::generate(&crate::synth::CohortSpec::default()).unwrap();
        let (reference, _) = load_reference_from_reader(
            reference_to_csv(original.reference()).as_bytes(),
            "ref.csv",
        )
        .unwrap();
        assert_eq!(reference.len(), 15);
        let config = IngestConfig::strict(ConfidenceScale::Unit0To1);
        let (ds, report) = load_annotations_from_reader(
            annotations_to_csv(&original).as_bytes(),
            "ann.csv",
            &config,
            reference,
        )
        .unwrap();
        assert_eq!(report.rows_read, 4410);
        assert_eq!(ds.record_count(), 4410);
        assert_eq!(ds.annotator_count(), 147);
        assert_eq!(ds.question_count(), 30);
        let means = crate::timing::question_mean_times(&ds).unwrap();
        assert_eq!(means.len(), 30);
        assert!(means.iter().all(|m| m.sample_count == 147));
    }

    #[test]
    fn round_trip_preserves_the_dataset() {
        let spec = crate::synth::CohortSpec {
            annotator_count: 6,
            question_count: 9,
            seed: 5,
            ..crate::synth::CohortSpec::default()
        };
        let original = crate::synth::generate(&spec).unwrap();
        let annotations = annotations_to_csv(&original);
        let reference_csv = reference_to_csv(original.reference());
        let (reference, _) =
            load_reference_from_reader(reference_csv.as_bytes(), "ref.csv").unwrap();
        let config = IngestConfig::strict(ConfidenceScale::Unit0To1);
        let (reloaded, report) =
            load_annotations_from_reader(annotations.as_bytes(), "ann.csv", &config, reference)
                .unwrap();
        assert_eq!(report.rows_read, original.record_count());
        assert_eq!(original, reloaded);
    }
}
