//! Full pipeline: generate a cohort, compute every figure dataset and write
//! them as deterministic CSV files.
//!
//! Run with: cargo run -p louc --example export_figures

use louc::analysis::{figure_tables, BasisSelection};
use louc::synth::{generate, CohortSpec};

fn main() -> louc::Result<()> {
    let dataset = generate(&CohortSpec {
        annotator_count: 60,
        question_count: 30,
        confidence_bias: -0.05,
        seed: 7,
        ..CohortSpec::default()
    })?;

    let tables = figure_tables(&dataset, BasisSelection::Both, 3)?;

    let out = std::env::temp_dir().join("louc-example-figures");
    std::fs::create_dir_all(&out).expect("output dir");
    for table in &tables {
        let path = out.join(format!("{}.csv", table.name()));
        std::fs::write(&path, table.to_csv()).expect("write table");
        println!(
            "{:<32} {:>5} rows  -> {}",
            table.name(),
            table.row_count(),
            path.display()
        );
    }

    // Peek at one: the calibration-by-quantile curves.
    let quantiles = tables.iter().find(|t| t.name() == "fig1d").expect("fig1d");
    println!("\n{}", quantiles.to_csv());
    Ok(())
}
