//! Normalize response times: per-question means capture difficulty,
//! answering deltas capture annotator speed, and the normalized time is what
//! remains after removing both.
//!
//! Run with: cargo run -p louc --example time_normalization

use louc::dataset::{AnnotationRecord, AttributePair, Dataset, Question, ReferenceMatch};
use louc::timing::{answering_delta, normalized_time, question_mean_times};

fn main() -> louc::Result<()> {
    let questions: Vec<Question> = (0..3)
        .map(|i| Question {
            id: format!("q{i}"),
            order_index: i,
            pair: AttributePair::new(format!("a{i}"), format!("b{i}")),
            true_label: false,
        })
        .collect();

    // "swift" is consistently fast; q2 is the hard question for everyone.
    let cohort: [(&str, [f64; 3]); 3] = [
        ("swift", [3.0, 6.0, 19.0]),
        ("steady", [10.0, 11.0, 30.0]),
        ("careful", [17.0, 13.0, 41.0]),
    ];
    let mut records = Vec::new();
    for (annotator, times) in cohort {
        for (i, &time) in times.iter().enumerate() {
            records.push(AnnotationRecord {
                annotator_id: annotator.to_string(),
                question_id: format!("q{i}"),
                confidence: 0.4,
                response_time_seconds: time,
            });
        }
    }
    let dataset = Dataset::new(questions, records, ReferenceMatch::default())?;

    let means = question_mean_times(&dataset)?;
    println!("question mean times (difficulty):");
    for mean in means.iter() {
        println!(
            "  {}: {:.1}s over {} annotators",
            mean.question_id, mean.mean_seconds, mean.sample_count
        );
    }

    println!("answering deltas (speed relative to the cohort):");
    for annotator in dataset.annotators() {
        let delta = answering_delta(&dataset, annotator)?;
        println!("  {:>7}: {:+.2}s", annotator, delta.delta_seconds);
    }

    println!("normalized times (deviation from the annotator's own habit):");
    for annotator in dataset.annotators() {
        for question in dataset.questions() {
            let nt = normalized_time(&dataset, annotator, &question.id)?;
            print!("  {:+6.2}", nt.value_seconds);
        }
        println!("   <- {annotator}");
    }
    println!("(each row averages to zero: full coverage)");
    Ok(())
}
