//! Load a cohort from CSV files, report ingest problems and check every
//! dataset invariant.
//!
//! Run with: cargo run -p louc --example ingest_and_validate

use louc::ingest::{self, ConfidenceScale, IngestConfig};

const ANNOTATIONS: &str = "\
annotator_id,question_id,left_attribute,right_attribute,confidence,response_time_seconds
alice,q1,po.orderNumber,order.id,85,12.5
alice,q2,po.shipTo,order.billingAddress,30,21.0
bob,q1,po.orderNumber,order.id,70,8.2
bob,q2,po.shipTo,order.billingAddress,55,14.9
bob,q2,po.shipTo,order.billingAddress,60,3.1
carol,q1,po.orderNumber,order.id,120,9.0
";

const REFERENCE: &str = "\
left_attribute,right_attribute
po.orderNumber,order.id
";

fn main() -> louc::Result<()> {
    let dir = std::env::temp_dir().join("louc-example-ingest");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let annotations_path = dir.join("annotations.csv");
    let reference_path = dir.join("reference.csv");
    std::fs::write(&annotations_path, ANNOTATIONS).expect("write annotations");
    std::fs::write(&reference_path, REFERENCE).expect("write reference");

    let (reference, warnings) = ingest::load_reference(&reference_path)?;
    println!("reference match: {} pairs, {} warnings", reference.len(), warnings.len());

    // Lenient mode rejects bad rows (the duplicate bob/q2 row and carol's
    // out-of-scale confidence) instead of aborting.
    let config = IngestConfig::lenient(ConfidenceScale::Percent0To100);
    let (dataset, report) = ingest::load_annotations(&annotations_path, &config, reference)?;

    println!(
        "read {} rows: {} accepted, {} rejected",
        report.rows_read,
        report.rows_accepted(),
        report.rows_rejected()
    );
    for rejection in &report.rejections {
        println!("  row {}: {}", rejection.row, rejection.reason);
    }

    let violations = ingest::validate(&dataset);
    println!("dataset invariant violations: {}", violations.len());

    println!(
        "loaded {} annotators x {} questions = {} decisions",
        dataset.annotator_count(),
        dataset.question_count(),
        dataset.record_count()
    );
    for question in dataset.questions() {
        println!(
            "  {} {} (true label: {})",
            question.id,
            question.pair,
            if question.true_label { "match" } else { "non-match" }
        );
    }
    Ok(())
}
