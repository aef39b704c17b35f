//! Compute accuracy- and precision-based calibration for annotators with
//! different confidence habits, and classify them against a tolerance band.
//!
//! Run with: cargo run -p louc --example calibration_basics

use louc::calibration::{cal_accuracy, cal_precision, classify, DEFAULT_EPSILON};
use louc::dataset::{AnnotationRecord, AttributePair, Dataset, Question, ReferenceMatch};
use louc::measures::QuestionSubset;

/// Six questions, half of them true matches, answered by three annotator
/// archetypes: well calibrated, over-confident, under-confident.
fn build_cohort() -> louc::Result<Dataset> {
    let questions: Vec<Question> = (0..6)
        .map(|i| Question {
            id: format!("q{i}"),
            order_index: i,
            pair: AttributePair::new(format!("s.col{i}"), format!("t.field{i}")),
            true_label: i % 2 == 0,
        })
        .collect();
    let reference = ReferenceMatch::new(
        questions
            .iter()
            .filter(|q| q.true_label)
            .map(|q| q.pair.clone()),
    );

    // Confidence per (annotator, question): the calibrated one is right 2/3
    // of the time and says so; the over-confident one is certain but often
    // wrong; the under-confident one is always right but hedges.
    let cohort: [(&str, [f64; 6]); 3] = [
        ("calm", [0.9, 0.1, 0.85, 0.8, 0.2, 0.15]),
        ("bold", [1.0, 0.0, 0.05, 0.95, 1.0, 0.9]),
        ("shy", [0.6, 0.45, 0.55, 0.4, 0.6, 0.45]),
    ];
    let mut records = Vec::new();
    for (annotator, confidences) in cohort {
        for (i, &confidence) in confidences.iter().enumerate() {
            records.push(AnnotationRecord {
                annotator_id: annotator.to_string(),
                question_id: format!("q{i}"),
                confidence,
                response_time_seconds: 12.0 + i as f64,
            });
        }
    }
    Dataset::new(questions, records, reference)
}

fn main() -> louc::Result<()> {
    let dataset = build_cohort()?;
    println!("epsilon = {DEFAULT_EPSILON}");
    for annotator in dataset.annotators() {
        let answered = QuestionSubset::answered_by(&dataset, annotator)?;

        let acc_cal = cal_accuracy(&dataset, annotator, &answered)?;
        let class = classify(acc_cal, DEFAULT_EPSILON)?;
        println!(
            "{annotator:>5}  cal(acc) = {:+.3}  -> {class}",
            acc_cal.value.unwrap()
        );

        let prec_cal = cal_precision(&dataset, annotator, &answered)?;
        match prec_cal.value {
            Some(value) => {
                let class = classify(prec_cal, DEFAULT_EPSILON)?;
                println!("       cal(p)   = {value:+.3}  -> {class}");
            }
            None => println!("       cal(p)   = undefined (no positive predictions)"),
        }
    }
    Ok(())
}
