//! Calibration and leave-one-out-calibration (LOUC) analytics over recorded
//! human schema-matching decisions.
//!
//! Human annotators judging whether two schema attributes correspond report a
//! confidence in [0, 1] (strictly above 0.5 asserts a match) together with a
//! response time. This crate grades those decisions against an expert
//! reference match and computes:
//!
//! * **Traditional measures** — accuracy, precision and confusion outcomes
//!   over any question subset ([`measures`]).
//! * **Calibration** — mean normalized confidence minus performance, the
//!   signed gap between conviction and correctness; annotators classify as
//!   under-confident, calibrated or over-confident ([`calibration`]).
//! * **LOUC** — the leave-one-out contribution `|Cal(Q)| - |Cal(Q \ {q})|` of
//!   each single decision to the annotator's absolute calibration
//!   ([`louc`]). Negative values mark decisions that make the annotator more
//!   calibrated.
//! * **Response-time normalization** — per-question means, per-annotator
//!   answering deltas and self-relative normalized times ([`timing`]).
//! * **Cohort analyses** — summaries, confusion aggregates, fast/slow splits,
//!   calibration-by-quantile curves, by-label distributions, LOUC scatter
//!   datasets and sign fractions, exportable as deterministic CSV/JSON tables
//!   ([`analysis`], [`table`]).
//! * **Ingest and synthesis** — CSV cohort loading with validation reports
//!   ([`ingest`]) and a seeded synthetic-cohort generator ([`synth`]).
//!
//! # Quick start
//!
//! ```
//! use louc::calibration::{cal_accuracy, Basis};
//! use louc::louc::louc;
//! use louc::measures::QuestionSubset;
//! use louc::synth::{generate, CohortSpec};
//!
//! # fn main() -> louc::Result<()> {
//! let dataset = generate(&CohortSpec {
//!     annotator_count: 25,
//!     question_count: 30,
//!     seed: 7,
//!     ..CohortSpec::default()
//! })?;
//!
//! let annotator = dataset.annotators().iter().next().unwrap().clone();
//! let answered = QuestionSubset::answered_by(&dataset, &annotator)?;
//! let cal = cal_accuracy(&dataset, &annotator, &answered)?;
//! assert!(cal.value.unwrap().abs() <= 1.0);
//!
//! let question = &dataset.questions()[0].id;
//! let contribution = louc(&dataset, &annotator, question, Basis::Accuracy)?;
//! assert!(contribution.value.abs() <= 1.0);
//! # Ok(())
//! # }
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run -p louc --example ingest_and_validate
//! cargo run -p louc --example similarity_and_confusion
//! cargo run -p louc --example calibration_basics
//! cargo run -p louc --example time_normalization
//! cargo run -p louc --example leave_one_out
//! cargo run -p louc --example synthetic_cohort
//! cargo run -p louc --example export_figures
//! ```
//!
//! The `louc` binary exposes the same pipeline as subcommands
//! (`validate`, `summarize`, `calibration`, `louc`, `figures`, `synth`).

pub mod analysis;
pub mod calibration;
pub mod cli;
pub mod dataset;
mod error;
pub mod ingest;
pub mod louc;
pub mod measures;
pub mod synth;
pub mod table;
pub mod timing;

pub use error::{Error, Result};

/// Diagnostic logging gated by the `LOUC_LOG` environment variable.
/// Diagnostics go to stderr and never affect computed values.
pub(crate) fn vlog(args: std::fmt::Arguments<'_>) {
    use std::sync::OnceLock;
    static ENABLED: OnceLock<bool> = OnceLock::new();
    let enabled = *ENABLED.get_or_init(|| {
        std::env::var("LOUC_LOG")
            .map(|v| !v.is_empty() && v != "0")
            .unwrap_or(false)
    });
    if enabled {
        eprintln!("[louc] {args}");
    }
}
