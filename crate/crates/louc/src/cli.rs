//! Command-line front end: validate cohort files, summarize them, compute
//! calibration and LOUC tables, export figure datasets and generate synthetic
//! cohorts.
//!
//! Exit codes: 0 on success, 1 on data or measure errors, 2 on usage errors
//! (handled by clap before [`run`] is reached). The `LOUC_LOG` environment
//! variable turns on diagnostic logging to stderr; it never affects computed
//! values.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, BasisSelection};
use crate::calibration::{self, Basis};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::ingest::{self, ConfidenceScale, IngestConfig, IngestReport};
use crate::measures::{self, QuestionSubset};
use crate::synth::{self, CohortSpec, TimeModel};
use crate::table::{format_float, CellValue, FigureTable};

#[derive(Debug, Parser)]
#[command(
    name = "louc",
    version,
    about = "Calibration and leave-one-out-calibration analytics for human matching decisions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    /// Confidence column is on the 0..100 scale.
    Percent,
    /// Confidence column is already in [0, 1].
    Unit,
}

impl From<ScaleArg> for ConfidenceScale {
    fn from(value: ScaleArg) -> Self {
        match value {
            ScaleArg::Percent => ConfidenceScale::Percent0To100,
            ScaleArg::Unit => ConfidenceScale::Unit0To1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    /// Accuracy-based measures only.
    Acc,
    /// Precision-based measures only.
    P,
    /// Both bases.
    Both,
}

impl From<BasisArg> for BasisSelection {
    fn from(value: BasisArg) -> Self {
        match value {
            BasisArg::Acc => BasisSelection::Accuracy,
            BasisArg::P => BasisSelection::Precision,
            BasisArg::Both => BasisSelection::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum FormatArg {
    #[default]
    Csv,
    Json,
}

impl FormatArg {
    fn extension(self) -> &'static str {
        match self {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }
    }

    fn render(self, table: &FigureTable) -> String {
        match self {
            FormatArg::Csv => table.to_csv(),
            FormatArg::Json => table.to_json(),
        }
    }
}

/// Input files shared by the read commands.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// Annotation log (CSV with a header row).
    #[arg(long)]
    pub annotations: PathBuf,
    /// Reference match file (left_attribute,right_attribute).
    #[arg(long)]
    pub reference: PathBuf,
    /// Scale of the confidence column.
    #[arg(long, value_enum, default_value_t = ScaleArg::Percent)]
    pub confidence_scale: ScaleArg,
    /// Reject and report bad rows instead of aborting on the first one.
    #[arg(long)]
    pub lenient: bool,
}

impl InputArgs {
    fn config(&self) -> IngestConfig {
        IngestConfig {
            confidence_scale: self.confidence_scale.into(),
            lenient: self.lenient,
        }
    }

    fn load(&self) -> Result<(Dataset, IngestReport, Vec<String>)> {
        ingest::load_cohort(&self.annotations, &self.reference, &self.config())
    }
}

fn parse_nonnegative(s: &str) -> std::result::Result<f64, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("must be a finite value >= 0, got {value}"))
    }
}

fn parse_unit(s: &str) -> std::result::Result<f64, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(format!("must be in [0, 1], got {value}"))
    }
}

fn parse_bias(s: &str) -> std::result::Result<f64, String> {
    let value: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (-1.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(format!("must be in [-1, 1], got {value}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check cohort files against every ingest and dataset rule.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print cohort-level statistics.
    Summarize {
        #[command(flatten)]
        input: InputArgs,
        /// Also write `cohort_summary.{csv,json}` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Per-annotator calibration table with confidence classes.
    Calibration {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisArg::Both)]
        basis: BasisArg,
        /// Half-width of the "calibrated" band around zero.
        #[arg(long, default_value_t = calibration::DEFAULT_EPSILON, value_parser = parse_nonnegative)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Per-decision LOUC table.
    Louc {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisArg::Both)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Export every figure dataset (fig1a through fig3f and companions).
    Figures {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = BasisArg::Both)]
        basis: BasisArg,
        /// Number of response-time quantile bins.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
        bins: u64,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Generate a synthetic cohort in the ingest format.
    Synth {
        /// Output directory for annotations.csv and reference.csv.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 147)]
        annotators: usize,
        #[arg(long, default_value_t = 30)]
        questions: usize,
        /// Fraction of questions that are true matches.
        #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
        match_fraction: f64,
        #[arg(long, default_value_t = 0.7, value_parser = parse_unit)]
        accuracy_mean: f64,
        #[arg(long, default_value_t = 0.15, value_parser = parse_unit)]
        accuracy_spread: f64,
        /// Target mean normalized confidence minus accuracy.
        #[arg(long, default_value_t = 0.0, value_parser = parse_bias)]
        confidence_bias: f64,
        /// Scale of per-question base response times, seconds.
        #[arg(long, default_value_t = 15.0, value_parser = parse_nonnegative)]
        time_base: f64,
        /// Half-width of the per-annotator speed offset, seconds.
        #[arg(long, default_value_t = 5.0, value_parser = parse_nonnegative)]
        time_offset: f64,
        /// Half-width of the per-decision time noise, seconds.
        #[arg(long, default_value_t = 4.0, value_parser = parse_nonnegative)]
        time_noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Executes a parsed command. Returns the process exit code for outcomes that
/// already printed their details (validate with violations); other failures
/// surface as errors for main to report.
pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { input } => run_validate(input),
        Command::Summarize { input, out, format } => run_summarize(input, out, format),
        Command::Calibration {
            input,
            out,
            basis,
            epsilon,
            format,
        } => run_calibration(input, out, basis, epsilon, format),
        Command::Louc {
            input,
            out,
            basis,
            format,
        } => run_louc(input, out, basis, format),
        Command::Figures {
            input,
            out,
            basis,
            bins,
            format,
        } => run_figures(input, out, basis, bins as usize, format),
        Command::Synth {
            out,
            annotators,
            questions,
            match_fraction,
            accuracy_mean,
            accuracy_spread,
            confidence_bias,
            time_base,
            time_offset,
            time_noise,
            seed,
        } => {
            let spec = CohortSpec {
                annotator_count: annotators,
                question_count: questions,
                true_match_fraction: match_fraction,
                accuracy_mean,
                accuracy_spread,
                confidence_bias,
                time_model: TimeModel {
                    question_base_seconds: time_base,
                    annotator_offset_seconds: time_offset,
                    noise_seconds: time_noise,
                },
                seed,
            };
            run_synth(spec, out)
        }
    }
}

fn run_validate(input: InputArgs) -> Result<u8> {
    // Validation always ingests leniently so every problem is enumerated.
    let config = IngestConfig::lenient(input.confidence_scale.into());
    let (reference, warnings) = ingest::load_reference(&input.reference)?;
    for warning in &warnings {
        println!("warning: {}: {warning}", input.reference.display());
    }
    let (dataset, report) = ingest::load_annotations(&input.annotations, &config, reference)?;
    for rejection in &report.rejections {
        println!(
            "violation: {}: row {}: {}",
            input.annotations.display(),
            rejection.row,
            rejection.reason
        );
    }
    let violations = ingest::validate(&dataset);
    for violation in &violations {
        println!("violation: {violation}");
    }
    let total = report.rows_rejected() + violations.len();
    println!(
        "{} rows read, {} accepted, {total} violations",
        report.rows_read,
        report.rows_accepted()
    );
    Ok(if total == 0 { 0 } else { 1 })
}

fn run_summarize(input: InputArgs, out: Option<PathBuf>, format: FormatArg) -> Result<u8> {
    let (dataset, report, warnings) = input.load()?;
    print_load_notes(&report, &warnings);
    let summary = analysis::summarize(&dataset)?;
    println!("annotators: {}", summary.annotator_count);
    println!("decisions: {}", summary.decision_count);
    println!(
        "predicted positive: {} ({})",
        summary.predicted_positive_count,
        format_float(summary.predicted_positive_fraction)
    );
    println!(
        "predicted negative: {} ({})",
        summary.decision_count - summary.predicted_positive_count,
        format_float(summary.predicted_negative_fraction)
    );
    println!(
        "mean normalized confidence: {}",
        format_float(summary.mean_normalized_confidence)
    );
    println!(
        "mean session minutes: {}",
        format_float(summary.mean_session_minutes)
    );
    println!(
        "mean decision seconds: {}",
        format_float(summary.mean_decision_seconds)
    );
    if let Some(out) = out {
        write_tables(&out, &[summary.to_table()], format)?;
    }
    Ok(0)
}

/// Per-annotator calibration table. Undefined precision-based values render
/// as empty cells with an empty class.
fn calibration_table(
    dataset: &Dataset,
    selection: BasisSelection,
    epsilon: f64,
) -> Result<FigureTable> {
    let mut columns = vec!["annotator_id", "decisions"];
    let accuracy_columns = [
        "mean_normalized_confidence",
        "accuracy",
        "cal_accuracy",
        "class_accuracy",
    ];
    let precision_columns = [
        "positive_predictions",
        "mean_normalized_confidence_positive",
        "precision",
        "cal_precision",
        "class_precision",
    ];
    let with_accuracy = selection.bases().contains(&Basis::Accuracy);
    let with_precision = selection.bases().contains(&Basis::Precision);
    if with_accuracy {
        columns.extend(accuracy_columns);
    }
    if with_precision {
        columns.extend(precision_columns);
    }
    let mut table = FigureTable::new("calibration", &columns);

    for annotator in dataset.annotators() {
        let subset = QuestionSubset::answered_by(dataset, annotator)?;
        let mut row: Vec<CellValue> = vec![annotator.clone().into(), subset.len().into()];
        if with_accuracy {
            let mean = measures::mean_normalized_confidence(dataset, annotator, &subset, None)?
                .expect("annotators have at least one record");
            let accuracy = measures::accuracy(dataset, annotator, &subset)?;
            let cal = calibration::cal_accuracy(dataset, annotator, &subset)?;
            let class = calibration::classify(cal, epsilon)?;
            row.push(mean.into());
            row.push(accuracy.into());
            row.push(cal.value.into());
            row.push(class.label().into());
        }
        if with_precision {
            let positives = measures::mean_normalized_confidence(
                dataset,
                annotator,
                &subset,
                Some(&calibration::POSITIVE_OUTCOMES),
            )?;
            let positive_count = dataset
                .records_for(annotator)
                .expect("annotator is known")
                .iter()
                .filter(|r| measures::predicted_label(r.confidence).unwrap_or(false))
                .count();
            let precision = measures::precision(dataset, annotator, &subset)?;
            let cal = calibration::cal_precision(dataset, annotator, &subset)?;
            let class = match cal.value {
                Some(_) => CellValue::Text(calibration::classify(cal, epsilon)?.label().into()),
                None => CellValue::Null,
            };
            row.push(positive_count.into());
            row.push(positives.into());
            row.push(precision.into());
            row.push(cal.value.into());
            row.push(class);
        }
        table.push_row(row);
    }
    Ok(table)
}

fn run_calibration(
    input: InputArgs,
    out: PathBuf,
    basis: BasisArg,
    epsilon: f64,
    format: FormatArg,
) -> Result<u8> {
    let (dataset, report, warnings) = input.load()?;
    print_load_notes(&report, &warnings);
    let table = calibration_table(&dataset, basis.into(), epsilon)?;
    write_tables(&out, &[table], format)?;
    Ok(0)
}

fn run_louc(input: InputArgs, out: PathBuf, basis: BasisArg, format: FormatArg) -> Result<u8> {
    let (dataset, report, warnings) = input.load()?;
    print_load_notes(&report, &warnings);
    let selection: BasisSelection = basis.into();
    let tables: Vec<FigureTable> = selection
        .bases()
        .iter()
        .map(|&b| analysis::louc_scatter(&dataset, b))
        .collect::<Result<_>>()?;
    write_tables(&out, &tables, format)?;
    Ok(0)
}

fn run_figures(
    input: InputArgs,
    out: PathBuf,
    basis: BasisArg,
    bins: usize,
    format: FormatArg,
) -> Result<u8> {
    let (dataset, report, warnings) = input.load()?;
    print_load_notes(&report, &warnings);
    let tables = analysis::figure_tables(&dataset, basis.into(), bins)?;
    write_tables(&out, &tables, format)?;
    Ok(0)
}

fn run_synth(spec: CohortSpec, out: PathBuf) -> Result<u8> {
    let dataset = synth::generate(&spec)?;
    std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let annotations = out.join("annotations.csv");
    let reference = out.join("reference.csv");
    ingest::write_annotations(&dataset, &annotations)?;
    ingest::write_reference(dataset.reference(), &reference)?;
    println!("wrote {}", annotations.display());
    println!("wrote {}", reference.display());
    println!(
        "{} annotators, {} questions, {} decisions, seed {}",
        dataset.annotator_count(),
        dataset.question_count(),
        dataset.record_count(),
        spec.seed
    );
    Ok(0)
}

fn print_load_notes(report: &IngestReport, warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    if report.rows_rejected() > 0 {
        eprintln!(
            "warning: {} of {} rows rejected; run `louc validate` for details",
            report.rows_rejected(),
            report.rows_read
        );
    }
}

fn write_tables(out: &Path, tables: &[FigureTable], format: FormatArg) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    for table in tables {
        let path = out.join(format!("{}.{}", table.name(), format.extension()));
        std::fs::write(&path, format.render(table)).map_err(|e| Error::io(&path, e))?;
        crate::vlog(format_args!(
            "{}: {} rows",
            path.display(),
            table.row_count()
        ));
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_structure_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers_enforce_ranges() {
        assert!(parse_nonnegative("0.05").is_ok());
        assert!(parse_nonnegative("-0.1").is_err());
        assert!(parse_unit("0.5").is_ok());
        assert!(parse_unit("1.5").is_err());
        assert!(parse_bias("-0.2").is_ok());
        assert!(parse_bias("-1.5").is_err());
    }
}
