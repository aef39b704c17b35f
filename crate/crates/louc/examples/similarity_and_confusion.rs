//! Build an annotator's sparse similarity matrix, binarize it with the 0.5
//! threshold, and grade each decision against the reference match.
//!
//! Run with: cargo run -p louc --example similarity_and_confusion

use louc::dataset::{
    build_similarity_matrix, threshold_match, AnnotationRecord, AttributePair, Dataset, Question,
    ReferenceMatch,
};
use louc::measures::{accuracy, confusion_outcome, precision, QuestionSubset};

fn main() -> louc::Result<()> {
    // Four questions; the reference says the first two pairs are matches.
    let pairs = [
        ("invoice.total", "bill.amount"),
        ("customer.name", "client.fullName"),
        ("item.sku", "client.fullName"),
        ("order.date", "bill.amount"),
    ];
    let questions: Vec<Question> = pairs
        .iter()
        .enumerate()
        .map(|(i, (left, right))| Question {
            id: format!("q{i}"),
            order_index: i,
            pair: AttributePair::new(*left, *right),
            true_label: i < 2,
        })
        .collect();
    let reference = ReferenceMatch::new(questions.iter().take(2).map(|q| q.pair.clone()));

    // One annotator: confident yes, hesitant yes, neutral, confident no.
    let confidences = [0.95, 0.6, 0.5, 0.1];
    let records: Vec<AnnotationRecord> = confidences
        .iter()
        .enumerate()
        .map(|(i, &confidence)| AnnotationRecord {
            annotator_id: "dana".to_string(),
            question_id: format!("q{i}"),
            confidence,
            response_time_seconds: 10.0 + i as f64,
        })
        .collect();
    let dataset = Dataset::new(questions, records, reference)?;

    let matrix = build_similarity_matrix(&dataset, "dana")?;
    println!("similarity matrix ({} entries):", matrix.len());
    for (pair, value) in matrix.entries() {
        println!("  {pair} -> {value}");
    }

    let matched = threshold_match(&matrix, 0.5);
    println!("predicted match set (strictly above 0.5): {} pairs", matched.len());
    for pair in &matched {
        println!("  {pair}");
    }

    println!("decision grades:");
    for question in dataset.questions() {
        let record = dataset.record("dana", &question.id).expect("answered");
        let outcome = confusion_outcome(record, question)?;
        println!(
            "  {} at confidence {:.2} -> {}",
            question.id, record.confidence, outcome
        );
    }

    let subset = QuestionSubset::full(&dataset);
    println!("accuracy:  {:.3}", accuracy(&dataset, "dana", &subset)?);
    match precision(&dataset, "dana", &subset)? {
        Some(p) => println!("precision: {p:.3}"),
        None => println!("precision: undefined (no positive predictions)"),
    }
    Ok(())
}
