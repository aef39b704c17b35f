//! Deterministic synthetic-cohort generator for property tests, acceptance
//! experiments and demos.
//!
//! Cohorts are drawn with a SplitMix64 generator seeded from the `CohortSpec`, so the
//! same spec yields a bit-identical [`Dataset`] on every run and platform.
//! Each annotator gets a skill level; decisions are drawn correct with that
//! probability, and normalized confidences target `skill + confidence_bias`,
//! so the expected accuracy-based calibration of the cohort tracks the bias.

use crate::dataset::{AnnotationRecord, AttributePair, Dataset, Question, ReferenceMatch};
use crate::error::{Error, Result};

/// Half-width of the uniform perturbation around the target normalized
/// confidence.
const CONFIDENCE_NOISE: f64 = 0.1;

/// Response times never drop below this, keeping them strictly positive.
const MIN_RESPONSE_SECONDS: f64 = 0.05;

/// SplitMix64 (Steele, Lea & Flood 2014): a portable 64-bit generator with a
/// fixed, documented algorithm. Used instead of an external RNG so that
/// golden outputs stay stable across dependency upgrades.
#[derive(Debug, Clone)]
struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-1, 1).
    fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Fisher-Yates shuffle. The modulo bias of `next_u64 % n` is negligible
    /// for the cohort sizes in play.
    fn shuffle<T>(&mut self, values: &mut [T]) {
        for i in (1..values.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            values.swap(i, j);
        }
    }
}

/// Shape of the response-time distribution: question difficulty scale,
/// annotator speed spread and per-decision noise, all in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeModel {
    /// Scale of per-question base times; each question draws its base
    /// uniformly from [0.5, 1.5] times this value.
    pub question_base_seconds: f64,
    /// Half-width of the uniform per-annotator speed offset.
    pub annotator_offset_seconds: f64,
    /// Half-width of the uniform per-decision noise.
    pub noise_seconds: f64,
}

impl Default for TimeModel {
    fn default() -> Self {
        Self {
            question_base_seconds: 15.0,
            annotator_offset_seconds: 5.0,
            noise_seconds: 4.0,
        }
    }
}

/// Parameters of a synthetic cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortSpec {
    pub annotator_count: usize,
    pub question_count: usize,
    /// Fraction of questions whose pair belongs to the reference match.
    pub true_match_fraction: f64,
    /// Center of the per-annotator skill distribution.
    pub accuracy_mean: f64,
    /// Half-width of the uniform skill distribution, clamped into [0, 1].
    pub accuracy_spread: f64,
    /// Target mean normalized confidence minus accuracy; positive biases
    /// produce over-confident cohorts.
    pub confidence_bias: f64,
    pub time_model: TimeModel,
    pub seed: u64,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            annotator_count: 147,
            question_count: 30,
            true_match_fraction: 0.5,
            accuracy_mean: 0.7,
            accuracy_spread: 0.15,
            confidence_bias: 0.0,
            time_model: TimeModel::default(),
            seed: 0,
        }
    }
}

impl CohortSpec {
    pub fn validate(&self) -> Result<()> {
        if self.annotator_count == 0 {
            return Err(Error::InvalidArgument(
                "annotator_count must be at least 1".to_string(),
            ));
        }
        if self.question_count == 0 {
            return Err(Error::InvalidArgument(
                "question_count must be at least 1".to_string(),
            ));
        }
        let unit_fields: [(&'static str, f64); 3] = [
            ("true_match_fraction", self.true_match_fraction),
            ("accuracy_mean", self.accuracy_mean),
            ("accuracy_spread", self.accuracy_spread),
        ];
        for (name, value) in unit_fields {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    expected: "[0, 1]",
                });
            }
        }
        if !(-1.0..=1.0).contains(&self.confidence_bias) {
            return Err(Error::OutOfRange {
                name: "confidence_bias",
                value: self.confidence_bias,
                expected: "[-1, 1]",
            });
        }
        if self.time_model.question_base_seconds <= 0.0
            || !self.time_model.question_base_seconds.is_finite()
        {
            return Err(Error::OutOfRange {
                name: "question_base_seconds",
                value: self.time_model.question_base_seconds,
                expected: "> 0",
            });
        }
        let spread_fields: [(&'static str, f64); 2] = [
            (
                "annotator_offset_seconds",
                self.time_model.annotator_offset_seconds,
            ),
            ("noise_seconds", self.time_model.noise_seconds),
        ];
        for (name, value) in spread_fields {
            if value < 0.0 || !value.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    expected: ">= 0",
                });
            }
        }
        Ok(())
    }
}

fn clamp_unit(value: f64) -> f64 {
    value.clamp(0.0, 1.0)
}

/// Generates a cohort. Same spec, same bytes: the draw order is fixed
/// (questions first, then annotators in id order, questions in series order).
pub fn generate(spec: &CohortSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);

    // Question labels: the exact match count, spread by a seeded shuffle.
    let match_count = ((spec.question_count as f64 * spec.true_match_fraction).round() as usize)
        .min(spec.question_count);
    let mut labels = vec![false; spec.question_count];
    for label in labels.iter_mut().take(match_count) {
        *label = true;
    }
    rng.shuffle(&mut labels);

    let questions: Vec<Question> = labels
        .iter()
        .enumerate()
        .map(|(i, &true_label)| Question {
            id: format!("q{i:04}"),
            order_index: i,
            pair: AttributePair::new(format!("a{i:04}"), format!("b{i:04}")),
            true_label,
        })
        .collect();
    let reference = ReferenceMatch::new(
        questions
            .iter()
            .filter(|q| q.true_label)
            .map(|q| q.pair.clone()),
    );

    // Per-question base times, shared by all annotators.
    let base_times: Vec<f64> = (0..spec.question_count)
        .map(|_| spec.time_model.question_base_seconds * (0.5 + rng.next_f64()))
        .collect();

    let mut records = Vec::with_capacity(spec.annotator_count * spec.question_count);
    for a in 0..spec.annotator_count {
        let annotator_id = format!("h{a:04}");
        let skill = clamp_unit(spec.accuracy_mean + spec.accuracy_spread * rng.next_signed());
        let target_confidence = clamp_unit(skill + spec.confidence_bias);
        let speed_offset = spec.time_model.annotator_offset_seconds * rng.next_signed();

        for (i, question) in questions.iter().enumerate() {
            let correct = rng.bernoulli(skill);
            let predicted_match = if correct {
                question.true_label
            } else {
                !question.true_label
            };
            let mut normalized = clamp_unit(target_confidence + CONFIDENCE_NOISE * rng.next_signed());
            if predicted_match && normalized == 0.0 {
                // A zero-conviction match would encode to exactly 0.5 and flip
                // to a predicted non-match under the strict threshold.
                normalized = 1e-9;
            }
            let confidence = if predicted_match {
                0.5 + normalized / 2.0
            } else {
                0.5 - normalized / 2.0
            };
            let response_time = (base_times[i]
                + speed_offset
                + spec.time_model.noise_seconds * rng.next_signed())
            .max(MIN_RESPONSE_SECONDS);
            records.push(AnnotationRecord {
                annotator_id: annotator_id.clone(),
                question_id: question.id.clone(),
                confidence,
                response_time_seconds: response_time,
            });
        }
    }

    Dataset::new(questions, records, reference)
}
