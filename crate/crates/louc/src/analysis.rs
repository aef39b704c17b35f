//! Cohort-level analyses: dataset summaries, confusion aggregates, fast/slow
//! time splits, quantile calibration curves, by-label distributions, LOUC
//! scatter datasets and LOUC sign fractions.
//!
//! Every table cell is a composition of the public operations in
//! [`crate::measures`], [`crate::calibration`], [`crate::timing`] and
//! [`crate::louc`]; this module only adds means, counts and quantile
//! summaries on top.

use std::collections::{BTreeMap, BTreeSet};

use crate::calibration::{self, Basis};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::louc::{louc_all, LoucEntry};
use crate::measures::{self, QuestionSubset};
use crate::table::{CellValue, FigureTable};
use crate::timing;

/// Top-level cohort statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortSummary {
    pub annotator_count: usize,
    pub decision_count: usize,
    pub predicted_positive_count: usize,
    pub predicted_positive_fraction: f64,
    pub predicted_negative_fraction: f64,
    /// Mean normalized confidence pooled over all decisions.
    pub mean_normalized_confidence: f64,
    /// Mean over annotators of their total answering time, in minutes.
    pub mean_session_minutes: f64,
    /// Mean response time pooled over all decisions, in seconds.
    pub mean_decision_seconds: f64,
}

impl CohortSummary {
    pub fn to_table(&self) -> FigureTable {
        let mut table = FigureTable::new(
            "cohort_summary",
            &[
                "annotator_count",
                "decision_count",
                "predicted_positive_count",
                "predicted_positive_fraction",
                "predicted_negative_fraction",
                "mean_normalized_confidence",
                "mean_session_minutes",
                "mean_decision_seconds",
            ],
        );
        table.push_row(vec![
            self.annotator_count.into(),
            self.decision_count.into(),
            self.predicted_positive_count.into(),
            self.predicted_positive_fraction.into(),
            self.predicted_negative_fraction.into(),
            self.mean_normalized_confidence.into(),
            self.mean_session_minutes.into(),
            self.mean_decision_seconds.into(),
        ]);
        table
    }
}

/// Aggregates the whole cohort: counts, predicted-label split, overall mean
/// normalized confidence and timing averages.
pub fn summarize(dataset: &Dataset) -> Result<CohortSummary> {
    let decision_count = dataset.record_count();
    if decision_count == 0 {
        return Err(Error::InvalidArgument(
            "cannot summarize a dataset without records".to_string(),
        ));
    }
    let mut positive = 0usize;
    let mut confidence_sum = 0.0;
    let mut time_sum = 0.0;
    for record in dataset.records() {
        if measures::predicted_label(record.confidence)? {
            positive += 1;
        }
        confidence_sum += measures::normalize_confidence(record.confidence)?;
        time_sum += record.response_time_seconds;
    }
    let mut session_sum_minutes = 0.0;
    for annotator in dataset.annotators() {
        let records = dataset.records_for(annotator).expect("annotator is known");
        let session_seconds: f64 = records.iter().map(|r| r.response_time_seconds).sum();
        session_sum_minutes += session_seconds / 60.0;
    }
    let n = decision_count as f64;
    Ok(CohortSummary {
        annotator_count: dataset.annotator_count(),
        decision_count,
        predicted_positive_count: positive,
        predicted_positive_fraction: positive as f64 / n,
        predicted_negative_fraction: (decision_count - positive) as f64 / n,
        mean_normalized_confidence: confidence_sum / n,
        mean_session_minutes: session_sum_minutes / dataset.annotator_count() as f64,
        mean_decision_seconds: time_sum / n,
    })
}

/// 2x2 confusion counts pooled over all decisions, with rates normalized per
/// true label (row).
pub fn confusion_aggregate(dataset: &Dataset) -> Result<FigureTable> {
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for record in dataset.records() {
        let question = dataset
            .question(&record.question_id)
            .ok_or_else(|| Error::QuestionNotFound(record.question_id.clone()))?;
        let outcome = measures::confusion_outcome(record, question)?;
        *counts.entry(outcome.code()).or_insert(0) += 1;
    }
    let count = |code: &str| counts.get(code).copied().unwrap_or(0);
    let match_total = count("TP") + count("FN");
    let non_match_total = count("FP") + count("TN");

    let mut table = FigureTable::new(
        "confusion",
        &[
            "true_label",
            "predicted_label",
            "outcome",
            "count",
            "row_rate",
        ],
    );
    let rate = |n: usize, total: usize| -> CellValue {
        if total == 0 {
            CellValue::Null
        } else {
            (n as f64 / total as f64).into()
        }
    };
    for (true_label, predicted, code, total) in [
        (true, true, "TP", match_total),
        (true, false, "FN", match_total),
        (false, true, "FP", non_match_total),
        (false, false, "TN", non_match_total),
    ] {
        table.push_row(vec![
            true_label.into(),
            predicted.into(),
            code.into(),
            count(code).into(),
            rate(count(code), total),
        ]);
    }
    Ok(table)
}

/// Which side of the mean-response-time split a group holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeGroupKind {
    Fast,
    Slow,
}

impl TimeGroupKind {
    pub fn label(self) -> &'static str {
        match self {
            TimeGroupKind::Fast => "fast",
            TimeGroupKind::Slow => "slow",
        }
    }
}

/// One side of the fast/slow annotator split.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGroup {
    pub kind: TimeGroupKind,
    pub member_ids: BTreeSet<String>,
    /// Group mean of per-annotator mean response times, minus the global
    /// mean. `None` for an empty group.
    pub mean_offset_seconds: Option<f64>,
}

/// Fast/slow partition of annotators around the unweighted mean of
/// per-annotator mean response times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSplit {
    pub fast: TimeGroup,
    pub slow: TimeGroup,
    pub threshold_seconds: f64,
    /// True when one side is empty (all annotators share the same mean).
    pub degenerate: bool,
}

impl TimeSplit {
    pub fn group_of(&self, annotator: &str) -> Option<TimeGroupKind> {
        if self.fast.member_ids.contains(annotator) {
            Some(TimeGroupKind::Fast)
        } else if self.slow.member_ids.contains(annotator) {
            Some(TimeGroupKind::Slow)
        } else {
            None
        }
    }
}

/// Splits annotators into fast (mean response time at or below the cohort
/// mean of per-annotator means) and slow (above it).
pub fn split_time_groups(dataset: &Dataset) -> Result<TimeSplit> {
    if dataset.annotator_count() < 2 {
        return Err(Error::DegenerateCohort(
            "a fast/slow split needs at least two annotators".to_string(),
        ));
    }
    let mut annotator_means: Vec<(String, f64)> = Vec::with_capacity(dataset.annotator_count());
    for annotator in dataset.annotators() {
        let records = dataset.records_for(annotator).expect("annotator is known");
        let mean = records
            .iter()
            .map(|r| r.response_time_seconds)
            .sum::<f64>()
            / records.len() as f64;
        annotator_means.push((annotator.clone(), mean));
    }
    let threshold =
        annotator_means.iter().map(|(_, m)| m).sum::<f64>() / annotator_means.len() as f64;

    let mut fast_ids = BTreeSet::new();
    let mut slow_ids = BTreeSet::new();
    let (mut fast_sum, mut slow_sum) = (0.0, 0.0);
    for (id, mean) in &annotator_means {
        if *mean <= threshold {
            fast_ids.insert(id.clone());
            fast_sum += mean;
        } else {
            slow_ids.insert(id.clone());
            slow_sum += mean;
        }
    }
    let offset = |sum: f64, ids: &BTreeSet<String>| {
        if ids.is_empty() {
            None
        } else {
            Some(sum / ids.len() as f64 - threshold)
        }
    };
    let degenerate = fast_ids.is_empty() || slow_ids.is_empty();
    Ok(TimeSplit {
        fast: TimeGroup {
            kind: TimeGroupKind::Fast,
            mean_offset_seconds: offset(fast_sum, &fast_ids),
            member_ids: fast_ids,
        },
        slow: TimeGroup {
            kind: TimeGroupKind::Slow,
            mean_offset_seconds: offset(slow_sum, &slow_ids),
            member_ids: slow_ids,
        },
        threshold_seconds: threshold,
        degenerate,
    })
}

/// One annotator's decisions split into near-equal bins of ascending
/// normalized response time.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileBinning {
    pub annotator_id: String,
    bins: Vec<Vec<String>>,
}

impl QuantileBinning {
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    /// Question ids per bin, bins ordered by ascending normalized time.
    pub fn bins(&self) -> &[Vec<String>] {
        &self.bins
    }

    pub fn bin_of(&self, question_id: &str) -> Option<usize> {
        self.bins
            .iter()
            .position(|bin| bin.iter().any(|q| q == question_id))
    }
}

/// Sorts the annotator's decisions by normalized response time (ties broken
/// by question order) and cuts them into `bin_count` contiguous groups whose
/// sizes differ by at most one, larger bins first.
pub fn quantile_bins(
    dataset: &Dataset,
    annotator: &str,
    bin_count: usize,
) -> Result<QuantileBinning> {
    let means = timing::question_mean_times(dataset)?;
    quantile_bins_with(dataset, &means, annotator, bin_count)
}

fn quantile_bins_with(
    dataset: &Dataset,
    means: &timing::QuestionMeans,
    annotator: &str,
    bin_count: usize,
) -> Result<QuantileBinning> {
    if bin_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "bin_count must be at least 2, got {bin_count}"
        )));
    }
    // Already in question order, so a stable sort on the value alone breaks
    // ties by order_index.
    let mut times = timing::normalized_times_for(dataset, means, annotator)?;
    if times.len() < bin_count {
        return Err(Error::DegenerateSubset(format!(
            "annotator {annotator} answered {} questions, fewer than {bin_count} bins",
            times.len()
        )));
    }
    times.sort_by(|a, b| a.1.total_cmp(&b.1));

    let base = times.len() / bin_count;
    let extra = times.len() % bin_count;
    let mut bins = Vec::with_capacity(bin_count);
    let mut cursor = 0usize;
    for b in 0..bin_count {
        let size = base + usize::from(b < extra);
        let ids: Vec<String> = times[cursor..cursor + size]
            .iter()
            .map(|(q, _)| q.clone())
            .collect();
        cursor += size;
        bins.push(ids);
    }
    Ok(QuantileBinning {
        annotator_id: annotator.to_string(),
        bins,
    })
}

/// Precision-based calibration per response-time quantile, averaged within
/// each time group. Cells without any defined value are omitted; the
/// `dropped` column counts annotators whose calibration was undefined on that
/// bin. Annotators with fewer answers than bins are skipped entirely.
pub fn calibration_by_time_quantile(dataset: &Dataset, bin_count: usize) -> Result<FigureTable> {
    let means = timing::question_mean_times(dataset)?;
    let split = split_time_groups(dataset)?;

    struct Cell {
        sum: f64,
        defined: usize,
        dropped: usize,
    }
    let mut cells: BTreeMap<(&'static str, usize), Cell> = BTreeMap::new();
    for annotator in dataset.annotators() {
        let binning = match quantile_bins_with(dataset, &means, annotator, bin_count) {
            Ok(binning) => binning,
            Err(Error::DegenerateSubset(_)) => continue,
            Err(e) => return Err(e),
        };
        let group = split
            .group_of(annotator)
            .expect("split covers every annotator")
            .label();
        for (bin_index, question_ids) in binning.bins().iter().enumerate() {
            let subset = QuestionSubset::new(question_ids.iter().cloned());
            let cal = calibration::cal_precision(dataset, annotator, &subset)?;
            let cell = cells.entry((group, bin_index)).or_insert(Cell {
                sum: 0.0,
                defined: 0,
                dropped: 0,
            });
            match cal.value {
                Some(value) => {
                    cell.sum += value;
                    cell.defined += 1;
                }
                None => cell.dropped += 1,
            }
        }
    }

    let mut table = FigureTable::new(
        "calibration_by_time_quantile",
        &[
            "time_group",
            "quantile",
            "mean_calibration",
            "annotators",
            "dropped",
        ],
    );
    for group in ["fast", "slow"] {
        for bin_index in 0..bin_count {
            let Some(cell) = cells.get(&(group, bin_index)) else {
                continue;
            };
            if cell.defined == 0 {
                continue;
            }
            table.push_row(vec![
                group.into(),
                bin_index.into(),
                (cell.sum / cell.defined as f64).into(),
                cell.defined.into(),
                cell.dropped.into(),
            ]);
        }
    }
    Ok(table)
}

/// Which per-annotator value a by-real-label distribution reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMetric {
    /// Mean normalized confidence over the label's questions.
    NormalizedConfidence,
    /// Accuracy over the label's questions.
    Accuracy,
    /// Accuracy-based calibration over the label's questions.
    CalibrationAccuracy,
    /// Precision-based calibration over the label's questions.
    CalibrationPrecision,
}

impl LabelMetric {
    pub fn label(self) -> &'static str {
        match self {
            LabelMetric::NormalizedConfidence => "normalized_confidence",
            LabelMetric::Accuracy => "accuracy",
            LabelMetric::CalibrationAccuracy => "calibration_accuracy",
            LabelMetric::CalibrationPrecision => "calibration_precision",
        }
    }
}

/// Per (annotator, true label) metric values; `None` marks dropped entries
/// (empty label subset, or undefined measure on it).
fn label_values(
    dataset: &Dataset,
    metric: LabelMetric,
) -> Result<Vec<(String, bool, Option<f64>)>> {
    let mut out = Vec::new();
    for annotator in dataset.annotators() {
        let records = dataset.records_for(annotator).expect("annotator is known");
        for label in [true, false] {
            let ids: Vec<String> = records
                .iter()
                .filter(|r| {
                    dataset
                        .question(&r.question_id)
                        .map(|q| q.true_label == label)
                        .unwrap_or(false)
                })
                .map(|r| r.question_id.clone())
                .collect();
            if ids.is_empty() {
                out.push((annotator.clone(), label, None));
                continue;
            }
            let subset = QuestionSubset::new(ids);
            let value = match metric {
                LabelMetric::NormalizedConfidence => {
                    measures::mean_normalized_confidence(dataset, annotator, &subset, None)?
                }
                LabelMetric::Accuracy => Some(measures::accuracy(dataset, annotator, &subset)?),
                LabelMetric::CalibrationAccuracy => {
                    calibration::cal_accuracy(dataset, annotator, &subset)?.value
                }
                LabelMetric::CalibrationPrecision => {
                    calibration::cal_precision(dataset, annotator, &subset)?.value
                }
            };
            out.push((annotator.clone(), label, value));
        }
    }
    Ok(out)
}

/// Per-annotator metric values split by the question's true label. Dropped
/// annotators (empty or undefined label subset) are omitted here and counted
/// in [`calibration_by_real_label_summary`].
pub fn calibration_by_real_label(dataset: &Dataset, metric: LabelMetric) -> Result<FigureTable> {
    let mut table = FigureTable::new(
        format!("{}_by_real_label", metric.label()),
        &["annotator_id", "true_label", "value"],
    );
    for (annotator, label, value) in label_values(dataset, metric)? {
        if let Some(value) = value {
            table.push_row(vec![annotator.into(), label.into(), value.into()]);
        }
    }
    Ok(table)
}

/// Distribution summary (mean and five-number summary with linearly
/// interpolated quartiles) of the per-annotator values per true label.
pub fn calibration_by_real_label_summary(
    dataset: &Dataset,
    metric: LabelMetric,
) -> Result<FigureTable> {
    let values = label_values(dataset, metric)?;
    let mut table = FigureTable::new(
        format!("{}_by_real_label_summary", metric.label()),
        &[
            "true_label",
            "annotators",
            "dropped",
            "mean",
            "min",
            "q1",
            "median",
            "q3",
            "max",
        ],
    );
    for label in [true, false] {
        let mut defined: Vec<f64> = values
            .iter()
            .filter(|(_, l, v)| *l == label && v.is_some())
            .map(|(_, _, v)| v.unwrap())
            .collect();
        let dropped = values
            .iter()
            .filter(|(_, l, v)| *l == label && v.is_none())
            .count();
        defined.sort_by(|a, b| a.total_cmp(b));
        let stat = |v: Option<f64>| -> CellValue { v.into() };
        let (mean, min, q1, median, q3, max) = if defined.is_empty() {
            (None, None, None, None, None, None)
        } else {
            let mean = defined.iter().sum::<f64>() / defined.len() as f64;
            (
                Some(mean),
                Some(defined[0]),
                Some(quantile_sorted(&defined, 0.25)),
                Some(quantile_sorted(&defined, 0.5)),
                Some(quantile_sorted(&defined, 0.75)),
                Some(defined[defined.len() - 1]),
            )
        };
        table.push_row(vec![
            label.into(),
            defined.len().into(),
            dropped.into(),
            stat(mean),
            stat(min),
            stat(q1),
            stat(median),
            stat(q3),
            stat(max),
        ]);
    }
    Ok(table)
}

/// Quantile of an ascending-sorted slice with linear interpolation between
/// order statistics.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// One row per annotator: mean normalized confidence, accuracy and
/// accuracy-based calibration over their full answered set.
pub fn calibration_scatter(dataset: &Dataset) -> Result<FigureTable> {
    let mut table = FigureTable::new(
        "calibration_scatter",
        &[
            "annotator_id",
            "mean_normalized_confidence",
            "accuracy",
            "calibration",
        ],
    );
    for annotator in dataset.annotators() {
        let subset = QuestionSubset::answered_by(dataset, annotator)?;
        let mean = measures::mean_normalized_confidence(dataset, annotator, &subset, None)?
            .expect("annotators have at least one record");
        let accuracy = measures::accuracy(dataset, annotator, &subset)?;
        let cal = calibration::cal_accuracy(dataset, annotator, &subset)?
            .value
            .expect("accuracy-based calibration is defined on a non-empty subset");
        table.push_row(vec![
            annotator.clone().into(),
            mean.into(),
            accuracy.into(),
            cal.into(),
        ]);
    }
    Ok(table)
}

/// Disposition of one decision in a LOUC dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoucStatus {
    /// A computed leave-one-out value.
    Value,
    /// Zero by construction: the decision never enters the basis measure.
    StructuralZero,
    /// Removing the decision leaves nothing to measure on.
    Degenerate,
    /// The annotator's base calibration is undefined under this basis.
    Undefined,
}

impl LoucStatus {
    pub fn label(self) -> &'static str {
        match self {
            LoucStatus::Value => "value",
            LoucStatus::StructuralZero => "structural_zero",
            LoucStatus::Degenerate => "degenerate",
            LoucStatus::Undefined => "undefined",
        }
    }
}

/// One row per decision: normalized response time, LOUC value with its
/// status, both labels and the confusion outcome. Row order is annotator id,
/// then question order.
pub fn louc_scatter(dataset: &Dataset, basis: Basis) -> Result<FigureTable> {
    let means = timing::question_mean_times(dataset)?;
    let mut table = FigureTable::new(
        format!("louc_scatter_{}", basis.label()),
        &[
            "annotator_id",
            "question_id",
            "normalized_time_seconds",
            "louc",
            "status",
            "true_label",
            "predicted_label",
            "outcome",
        ],
    );
    for annotator in dataset.annotators() {
        let times = timing::normalized_times_for(dataset, &means, annotator)?;
        let entries = match louc_all(dataset, annotator, basis) {
            Ok(entries) => Some(entries),
            Err(Error::UndefinedMeasure(_)) => None,
            Err(e) => return Err(e),
        };
        for (question_id, normalized_time) in times {
            let question = dataset
                .question(&question_id)
                .ok_or_else(|| Error::QuestionNotFound(question_id.clone()))?;
            let record = dataset
                .record(annotator, &question_id)
                .expect("normalized times come from existing records");
            let outcome = measures::confusion_outcome(record, question)?;
            let (louc_cell, status) = match entries.as_ref().and_then(|e| e.get(&question_id)) {
                Some(LoucEntry::Value(v)) if v.structurally_zero => {
                    (CellValue::Float(v.value), LoucStatus::StructuralZero)
                }
                Some(LoucEntry::Value(v)) => (CellValue::Float(v.value), LoucStatus::Value),
                Some(LoucEntry::Degenerate) => (CellValue::Null, LoucStatus::Degenerate),
                None => (CellValue::Null, LoucStatus::Undefined),
            };
            table.push_row(vec![
                annotator.clone().into(),
                question_id.into(),
                normalized_time.into(),
                louc_cell,
                status.label().into(),
                question.true_label.into(),
                outcome.predicted_positive().into(),
                outcome.code().into(),
            ]);
        }
    }
    Ok(table)
}

/// Sign distribution of LOUC values per true label, over decisions with a
/// computed (non-structural, non-degenerate) value. Exact zeros count in
/// neither sign and are reported separately.
pub fn louc_sign_fractions(dataset: &Dataset, basis: Basis) -> Result<FigureTable> {
    struct Bucket {
        negative: usize,
        zero: usize,
        positive: usize,
    }
    let mut buckets: BTreeMap<bool, Bucket> = BTreeMap::new();
    for annotator in dataset.annotators() {
        let entries = match louc_all(dataset, annotator, basis) {
            Ok(entries) => entries,
            Err(Error::UndefinedMeasure(_)) => continue,
            Err(e) => return Err(e),
        };
        for (question_id, entry) in entries {
            let Some(value) = entry.value() else {
                continue;
            };
            if value.structurally_zero {
                continue;
            }
            let question = dataset
                .question(&question_id)
                .ok_or_else(|| Error::QuestionNotFound(question_id.clone()))?;
            let bucket = buckets.entry(question.true_label).or_insert(Bucket {
                negative: 0,
                zero: 0,
                positive: 0,
            });
            if value.value < 0.0 {
                bucket.negative += 1;
            } else if value.value > 0.0 {
                bucket.positive += 1;
            } else {
                bucket.zero += 1;
            }
        }
    }

    let mut table = FigureTable::new(
        format!("louc_sign_fractions_{}", basis.label()),
        &[
            "true_label",
            "considered",
            "negative",
            "zero",
            "positive",
            "negative_fraction",
            "positive_fraction",
        ],
    );
    for label in [true, false] {
        let (negative, zero, positive) = buckets
            .get(&label)
            .map(|b| (b.negative, b.zero, b.positive))
            .unwrap_or((0, 0, 0));
        let considered = negative + zero + positive;
        let fraction = |n: usize| -> CellValue {
            if considered == 0 {
                CellValue::Null
            } else {
                (n as f64 / considered as f64).into()
            }
        };
        table.push_row(vec![
            label.into(),
            considered.into(),
            negative.into(),
            zero.into(),
            positive.into(),
            fraction(negative),
            fraction(positive),
        ]);
    }
    Ok(table)
}

/// Which LOUC bases to include in a figure export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSelection {
    Accuracy,
    Precision,
    Both,
}

impl BasisSelection {
    pub fn bases(self) -> &'static [Basis] {
        match self {
            BasisSelection::Accuracy => &[Basis::Accuracy],
            BasisSelection::Precision => &[Basis::Precision],
            BasisSelection::Both => &[Basis::Accuracy, Basis::Precision],
        }
    }
}

/// Assembles every figure dataset under its stable name (fig1a through
/// fig3f), plus the by-label summaries and LOUC sign-fraction tables.
pub fn figure_tables(
    dataset: &Dataset,
    basis: BasisSelection,
    bin_count: usize,
) -> Result<Vec<FigureTable>> {
    let mut tables = vec![
        calibration_by_real_label(dataset, LabelMetric::NormalizedConfidence)?.renamed("fig1a"),
        calibration_by_real_label_summary(dataset, LabelMetric::NormalizedConfidence)?
            .renamed("fig1a_summary"),
        calibration_by_real_label(dataset, LabelMetric::Accuracy)?.renamed("fig1b"),
        calibration_by_real_label_summary(dataset, LabelMetric::Accuracy)?
            .renamed("fig1b_summary"),
        confusion_aggregate(dataset)?.renamed("fig1c"),
        calibration_by_time_quantile(dataset, bin_count)?.renamed("fig1d"),
        calibration_scatter(dataset)?.renamed("fig2a"),
        calibration_by_real_label(dataset, LabelMetric::CalibrationAccuracy)?.renamed("fig2b"),
        calibration_by_real_label_summary(dataset, LabelMetric::CalibrationAccuracy)?
            .renamed("fig2b_summary"),
    ];
    for &b in basis.bases() {
        let scatter = louc_scatter(dataset, b)?;
        // fig3a-3c carry the accuracy basis, fig3d-3f the precision basis.
        let (plain, by_label, positives) = match b {
            Basis::Accuracy => ("fig3a", "fig3b", "fig3c"),
            Basis::Precision => ("fig3d", "fig3e", "fig3f"),
        };
        tables.push(scatter.select(
            plain,
            &[
                "annotator_id",
                "question_id",
                "normalized_time_seconds",
                "louc",
                "status",
            ],
        )?);
        tables.push(scatter.select(
            by_label,
            &[
                "annotator_id",
                "question_id",
                "normalized_time_seconds",
                "louc",
                "status",
                "true_label",
            ],
        )?);
        let predicted_col = scatter
            .column_index("predicted_label")
            .expect("scatter has a predicted_label column");
        tables.push(
            scatter
                .filtered(positives, |row| row[predicted_col] == CellValue::Bool(true))
                .select(
                    positives,
                    &[
                        "annotator_id",
                        "question_id",
                        "normalized_time_seconds",
                        "louc",
                        "status",
                        "true_label",
                        "outcome",
                    ],
                )?,
        );
        tables.push(louc_sign_fractions(dataset, b)?);
    }
    Ok(tables)
}
