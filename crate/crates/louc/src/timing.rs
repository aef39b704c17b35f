//! Response-time normalization across annotators and questions.
//!
//! Raw response times mix two effects: how hard the question is and how fast
//! the annotator is in general. Per-question mean times capture the first,
//! the per-annotator answering delta captures the second, and the normalized
//! response time removes both: `(T - mean_q) - delta_h`. For an annotator who
//! answered every question, the normalized times average to zero.

use std::collections::BTreeMap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Mean response time of one question across the annotators who answered it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuestionMeanTime {
    pub question_id: String,
    pub mean_seconds: f64,
    pub sample_count: usize,
}

/// Per-question mean response times, computed once and reused.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuestionMeans {
    map: BTreeMap<String, QuestionMeanTime>,
}

impl QuestionMeans {
    pub fn get(&self, question_id: &str) -> Option<&QuestionMeanTime> {
        self.map.get(question_id)
    }

    pub fn mean_seconds(&self, question_id: &str) -> Option<f64> {
        self.map.get(question_id).map(|m| m.mean_seconds)
    }

    pub fn iter(&self) -> impl Iterator<Item = &QuestionMeanTime> {
        self.map.values()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Mean response time per question, over all annotators who answered it.
/// The annotator's own time is included in the mean; there is no
/// leave-self-out correction.
pub fn question_mean_times(dataset: &Dataset) -> Result<QuestionMeans> {
    // Accumulate in annotator-id order so the result is bit-identical no
    // matter how the records were stored.
    let mut sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for annotator in dataset.annotators() {
        for record in dataset.records_for(annotator).expect("annotator is known") {
            let entry = sums.entry(record.question_id.as_str()).or_insert((0.0, 0));
            entry.0 += record.response_time_seconds;
            entry.1 += 1;
        }
    }
    let mut map = BTreeMap::new();
    for question in dataset.questions() {
        let (sum, count) = sums
            .get(question.id.as_str())
            .copied()
            .unwrap_or((0.0, 0));
        if count == 0 {
            return Err(Error::QuestionUnanswered(question.id.clone()));
        }
        map.insert(
            question.id.clone(),
            QuestionMeanTime {
                question_id: question.id.clone(),
                mean_seconds: sum / count as f64,
                sample_count: count,
            },
        );
    }
    Ok(QuestionMeans { map })
}

/// An annotator's mean deviation from the per-question mean times. Negative
/// values mark annotators who are faster than the cohort on average.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsweringDelta {
    pub annotator_id: String,
    pub delta_seconds: f64,
}

pub fn answering_delta(dataset: &Dataset, annotator: &str) -> Result<AnsweringDelta> {
    let means = question_mean_times(dataset)?;
    answering_delta_with(dataset, &means, annotator)
}

/// As [`answering_delta`] but reusing precomputed question means. The mean is
/// taken over the annotator's answered questions only.
pub fn answering_delta_with(
    dataset: &Dataset,
    means: &QuestionMeans,
    annotator: &str,
) -> Result<AnsweringDelta> {
    let records = dataset
        .records_for(annotator)
        .ok_or_else(|| Error::AnnotatorNotFound(annotator.to_string()))?;
    if records.is_empty() {
        return Err(Error::DegenerateSubset(format!(
            "annotator {annotator} has no records"
        )));
    }
    let mut sum = 0.0;
    for record in &records {
        let mean = means
            .mean_seconds(&record.question_id)
            .ok_or_else(|| Error::QuestionNotFound(record.question_id.clone()))?;
        sum += record.response_time_seconds - mean;
    }
    Ok(AnsweringDelta {
        annotator_id: annotator.to_string(),
        delta_seconds: sum / records.len() as f64,
    })
}

/// A decision's response-time deviation relative to the annotator's own
/// average deviation: `(T - mean_q) - delta_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedTime {
    pub value_seconds: f64,
}

pub fn normalized_time(
    dataset: &Dataset,
    annotator: &str,
    question_id: &str,
) -> Result<NormalizedTime> {
    let means = question_mean_times(dataset)?;
    let delta = answering_delta_with(dataset, &means, annotator)?;
    let record = dataset
        .record(annotator, question_id)
        .ok_or_else(|| Error::RecordNotFound {
            annotator: annotator.to_string(),
            question: question_id.to_string(),
        })?;
    let mean = means
        .mean_seconds(question_id)
        .ok_or_else(|| Error::QuestionNotFound(question_id.to_string()))?;
    Ok(NormalizedTime {
        value_seconds: (record.response_time_seconds - mean) - delta.delta_seconds,
    })
}

/// Normalized times for every decision of one annotator, in question order.
pub fn normalized_times_for(
    dataset: &Dataset,
    means: &QuestionMeans,
    annotator: &str,
) -> Result<Vec<(String, f64)>> {
    let delta = answering_delta_with(dataset, means, annotator)?;
    let records = dataset
        .records_for(annotator)
        .ok_or_else(|| Error::AnnotatorNotFound(annotator.to_string()))?;
    let mut out = Vec::with_capacity(records.len());
    for record in records {
        let mean = means
            .mean_seconds(&record.question_id)
            .ok_or_else(|| Error::QuestionNotFound(record.question_id.clone()))?;
        out.push((
            record.question_id.clone(),
            (record.response_time_seconds - mean) - delta.delta_seconds,
        ));
    }
    Ok(out)
}
