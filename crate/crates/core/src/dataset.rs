//! Review ingestion and distant-supervision labeling from star ratings.
//!
//! Stars act as label proxies: 5 stars is positive polarity, 1 star negative;
//! 1 or 5 stars is high intensity, 3 stars low. Ratings of 2 and 4 belong to
//! neither task.

use std::io::BufRead;

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::svm::Label;

/// One raw review: text plus its 1-5 star rating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewRecord {
    pub text: String,
    pub stars: u8,
}

/// The two binary tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Polarity,
    Intensity,
}

impl Task {
    /// (negative-class name, positive-class name).
    pub fn label_names(self) -> (&'static str, &'static str) {
        match self {
            Task::Polarity => ("negative", "positive"),
            Task::Intensity => ("low", "high"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Polarity => "polarity",
            Task::Intensity => "intensity",
        }
    }

    pub fn parse(s: &str) -> Option<Task> {
        match s {
            "polarity" => Some(Task::Polarity),
            "intensity" => Some(Task::Intensity),
            _ => None,
        }
    }

    /// Proxy label for a star rating under this task, if the rating is
    /// eligible.
    pub fn label_for(self, stars: u8) -> Option<Label> {
        match self {
            Task::Polarity => polarity_label(stars),
            Task::Intensity => intensity_label(stars),
        }
    }
}

/// 5 stars -> positive, 1 star -> negative; 2-4 are excluded.
pub fn polarity_label(stars: u8) -> Option<Label> {
    match stars {
        5 => Some(Label::Positive),
        1 => Some(Label::Negative),
        _ => None,
    }
}

/// 1 or 5 stars -> high (+1), 3 stars -> low (-1); 2 and 4 are excluded.
pub fn intensity_label(stars: u8) -> Option<Label> {
    match stars {
        1 | 5 => Some(Label::Positive),
        3 => Some(Label::Negative),
        _ => None,
    }
}

/// One labeled training example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledText {
    pub text: String,
    pub task: Task,
    pub label: Label,
}

/// A review line that failed validation, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedLine {
    pub line: usize,
    pub reason: String,
}

/// Parsed reviews plus the rejects report.
#[derive(Debug, Clone, Default)]
pub struct ParsedReviews {
    pub records: Vec<ReviewRecord>,
    pub rejects: Vec<RejectedLine>,
}

/// Parse a line-delimited JSON stream of records with `text` and `stars`
/// fields (extra fields are ignored). Invalid lines land in the rejects
/// report; more than 50% rejected lines is a format-mismatch error.
pub fn parse_reviews<R: BufRead>(input: R) -> Result<ParsedReviews> {
    let mut parsed = ParsedReviews::default();
    let mut total = 0usize;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        total += 1;
        match parse_review_line(&line) {
            Ok(record) => parsed.records.push(record),
            Err(reason) => parsed.rejects.push(RejectedLine {
                line: line_no,
                reason,
            }),
        }
    }

    if total > 0 && parsed.rejects.len() * 2 > total {
        return Err(CoreError::FormatMismatch {
            rejected: parsed.rejects.len(),
            total,
        });
    }
    Ok(parsed)
}

fn parse_review_line(line: &str) -> std::result::Result<ReviewRecord, String> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let text = value
        .get("text")
        .and_then(|t| t.as_str())
        .ok_or("missing or non-string \"text\" field")?;
    if text.trim().is_empty() {
        return Err("blank \"text\" field".into());
    }
    let stars_value = value.get("stars").ok_or("missing \"stars\" field")?;
    let stars = stars_value
        .as_u64()
        .or_else(|| {
            // Tolerate integral floats such as 5.0.
            stars_value
                .as_f64()
                .filter(|f| f.fract() == 0.0 && *f >= 0.0)
                .map(|f| f as u64)
        })
        .ok_or("non-integer \"stars\" field")?;
    if !(1..=5).contains(&stars) {
        return Err(format!("stars {stars} out of [1,5]"));
    }
    Ok(ReviewRecord {
        text: text.to_string(),
        stars: stars as u8,
    })
}

/// Build a balanced labeled dataset: exactly `n_per_class` records per class,
/// sampled uniformly without replacement and shuffled, all driven by `seed`.
pub fn build_balanced(
    records: &[ReviewRecord],
    task: Task,
    n_per_class: usize,
    seed: u64,
) -> Result<Vec<LabeledText>> {
    if n_per_class < 1 {
        return Err(CoreError::InvalidConfig("n_per_class must be >= 1".into()));
    }

    let mut negatives = Vec::new();
    let mut positives = Vec::new();
    for record in records {
        match task.label_for(record.stars) {
            Some(Label::Negative) => negatives.push(record),
            Some(Label::Positive) => positives.push(record),
            None => {}
        }
    }

    let (neg_name, pos_name) = task.label_names();
    if negatives.len() < n_per_class {
        return Err(CoreError::ClassShortfall {
            class: neg_name.to_string(),
            need: n_per_class,
            have: negatives.len(),
        });
    }
    if positives.len() < n_per_class {
        return Err(CoreError::ClassShortfall {
            class: pos_name.to_string(),
            need: n_per_class,
            have: positives.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut output = Vec::with_capacity(2 * n_per_class);
    for (pool, label) in [(negatives, Label::Negative), (positives, Label::Positive)] {
        let chosen = rand::seq::index::sample(&mut rng, pool.len(), n_per_class);
        for idx in chosen.iter() {
            output.push(LabeledText {
                text: pool[idx].text.clone(),
                task,
                label,
            });
        }
    }
    output.shuffle(&mut rng);
    Ok(output)
}
