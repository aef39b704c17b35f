//! Leave-one-out calibration per decision: which answers make an annotator
//! more calibrated (negative values) and which pull the calibration away
//! from zero (positive values).
//!
//! Run with: cargo run -p louc --example leave_one_out

use louc::calibration::Basis;
use louc::dataset::{AnnotationRecord, AttributePair, Dataset, Question, ReferenceMatch};
use louc::louc::{louc_all, LoucEntry};
use louc::measures::confusion_outcome;

fn main() -> louc::Result<()> {
    // One annotator, six questions, a mix of right and wrong calls.
    let labels = [true, true, true, false, false, false];
    let confidences = [0.9, 0.8, 0.35, 0.15, 0.75, 0.5];

    let questions: Vec<Question> = labels
        .iter()
        .enumerate()
        .map(|(i, &true_label)| Question {
            id: format!("q{i}"),
            order_index: i,
            pair: AttributePair::new(format!("a{i}"), format!("b{i}")),
            true_label,
        })
        .collect();
    let reference = ReferenceMatch::new(
        questions
            .iter()
            .filter(|q| q.true_label)
            .map(|q| q.pair.clone()),
    );
    let records: Vec<AnnotationRecord> = confidences
        .iter()
        .enumerate()
        .map(|(i, &confidence)| AnnotationRecord {
            annotator_id: "erin".to_string(),
            question_id: format!("q{i}"),
            confidence,
            response_time_seconds: 8.0 + i as f64,
        })
        .collect();
    let dataset = Dataset::new(questions, records, reference)?;

    for basis in [Basis::Accuracy, Basis::Precision] {
        println!("LOUC ({basis} basis):");
        let entries = louc_all(&dataset, "erin", basis)?;
        for question in dataset.questions() {
            let record = dataset.record("erin", &question.id).expect("answered");
            let outcome = confusion_outcome(record, question)?;
            match entries[&question.id] {
                LoucEntry::Value(v) if v.structurally_zero => {
                    println!(
                        "  {} ({outcome}): 0 (structural: never enters the precision terms)",
                        question.id
                    );
                }
                LoucEntry::Value(v) => {
                    let verdict = if v.value < 0.0 {
                        "presence improves calibration"
                    } else if v.value > 0.0 {
                        "presence hurts calibration"
                    } else {
                        "no effect"
                    };
                    println!("  {} ({outcome}): {:+.4}  ({verdict})", question.id, v.value);
                }
                LoucEntry::Degenerate => {
                    println!("  {} ({outcome}): degenerate (nothing left to measure)", question.id);
                }
            }
        }
    }
    Ok(())
}
