//! Generate a seeded synthetic cohort and summarize it. The same seed always
//! produces the same cohort, byte for byte.
//!
//! Run with: cargo run -p louc --example synthetic_cohort

use louc::analysis::{split_time_groups, summarize};
use louc::synth::{generate, CohortSpec};

fn main() -> louc::Result<()> {
    // A cohort shaped like a typical crowdsourced study: 147 annotators,
    // 30 questions, half of them true matches, slightly over-confident.
    let spec = CohortSpec {
        confidence_bias: 0.08,
        seed: 2024,
        ..CohortSpec::default()
    };
    let dataset = generate(&spec)?;

    let summary = summarize(&dataset)?;
    println!("annotators:                 {}", summary.annotator_count);
    println!("decisions:                  {}", summary.decision_count);
    println!(
        "predicted positive:         {} ({:.1}%)",
        summary.predicted_positive_count,
        100.0 * summary.predicted_positive_fraction
    );
    println!(
        "mean normalized confidence: {:.3}",
        summary.mean_normalized_confidence
    );
    println!(
        "mean session length:        {:.1} minutes",
        summary.mean_session_minutes
    );
    println!(
        "mean decision time:         {:.1} seconds",
        summary.mean_decision_seconds
    );

    let split = split_time_groups(&dataset)?;
    println!(
        "fast group: {} annotators ({:+.1}s vs cohort mean)",
        split.fast.member_ids.len(),
        split.fast.mean_offset_seconds.unwrap_or(0.0)
    );
    println!(
        "slow group: {} annotators ({:+.1}s vs cohort mean)",
        split.slow.member_ids.len(),
        split.slow.mean_offset_seconds.unwrap_or(0.0)
    );

    let again = generate(&spec)?;
    println!("regeneration identical: {}", dataset == again);
    Ok(())
}
