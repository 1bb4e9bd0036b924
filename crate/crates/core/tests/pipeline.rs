//! End-to-end library flow over the shipped fixture files: parse both
//! lexicons, build balanced datasets from the sample reviews, train both
//! models, and classify planted texts.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use affect_core::dataset::{Task, build_balanced, parse_reviews};
use affect_core::emotion::{EmotionQuadrant, LexiconPipeline, classify_text};
use affect_core::eval::cross_validate;
use affect_core::lexicon::{
    CategoryLexicon, PosTag, SentimentLexicon, parse_general_inquirer, parse_sentiwordnet,
    word_polarity_score,
};
use affect_core::svm::{Hyperparams, Label, TrainedModel, train};
use affect_core::textproc::segment;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn open(name: &str) -> BufReader<File> {
    BufReader::new(File::open(fixture(name)).expect("fixture file exists"))
}

fn lexicons() -> (SentimentLexicon, CategoryLexicon) {
    let sentlex = parse_sentiwordnet(open("sentiwordnet_sample.txt")).unwrap();
    let catlex = parse_general_inquirer(open("inquirer_sample.csv")).unwrap();
    (sentlex, catlex)
}

#[test]
fn fixture_lexicons_parse_as_expected() {
    let (sentlex, catlex) = lexicons();

    // "good" carries two adjective synsets; rank-1 dominates the weighting:
    // (0.75 + 0.375/2) / (1 + 1/2) = 0.625.
    assert_eq!(sentlex.scores("good", PosTag::Adjective).len(), 2);
    assert!((word_polarity_score(&sentlex, "good") - 0.625).abs() < 1e-12);
    assert!(word_polarity_score(&sentlex, "terrible") < 0.0);
    // "pleasant" enters via a satellite-adjective line.
    assert!(sentlex.has_pos_entry("pleasant", PosTag::Adjective));

    assert_eq!(catlex.category_count(), 6);
    let excellent: Vec<usize> = catlex
        .memberships("excellent")
        .unwrap()
        .iter()
        .copied()
        .collect();
    assert_eq!(excellent, vec![0, 2, 4]); // Positiv, Strong, Active merged across senses
}

fn train_task(
    task: Task,
    sentlex: &SentimentLexicon,
    catlex: &CategoryLexicon,
    seed: u64,
) -> TrainedModel {
    let reviews = parse_reviews(open("reviews_sample.jsonl")).unwrap();
    assert!(reviews.rejects.is_empty());
    let examples = build_balanced(&reviews.records, task, 10, seed).unwrap();
    let pipeline = LexiconPipeline {
        task,
        sentlex,
        catlex,
    };
    let training: Vec<_> = examples
        .iter()
        .map(|e| (pipeline.extract(&segment(&e.text).unwrap()), e.label))
        .collect();
    let names = task.label_names();
    train(
        &pipeline.descriptor(),
        &training,
        &Hyperparams::new(seed),
        (names.0.to_string(), names.1.to_string()),
    )
    .unwrap()
}

#[test]
fn fixture_corpus_trains_and_classifies() {
    let (sentlex, catlex) = lexicons();
    let polarity_model = train_task(Task::Polarity, &sentlex, &catlex, 7);
    let intensity_model = train_task(Task::Intensity, &sentlex, &catlex, 7);

    let result = classify_text(
        "AMAZING!!! the pizza was soooo good, we loved it",
        &polarity_model,
        &intensity_model,
        &sentlex,
        &catlex,
    )
    .unwrap();
    assert_eq!(result.quadrant, EmotionQuadrant::Exuberant);
    assert_eq!(result.polarity_label, Label::Positive);

    let result = classify_text(
        "it was fine. a calm, quiet, pleasant room.",
        &polarity_model,
        &intensity_model,
        &sentlex,
        &catlex,
    )
    .unwrap();
    assert_eq!(result.quadrant, EmotionQuadrant::Satisfied);

    let result = classify_text(
        "TERRIBLE!!! awful awful service, we hated it",
        &polarity_model,
        &intensity_model,
        &sentlex,
        &catlex,
    )
    .unwrap();
    assert_eq!(result.quadrant, EmotionQuadrant::Angry);
}

#[test]
fn fixture_corpus_cross_validates() {
    let (sentlex, catlex) = lexicons();
    let reviews = parse_reviews(open("reviews_sample.jsonl")).unwrap();
    let examples = build_balanced(&reviews.records, Task::Polarity, 10, 3).unwrap();
    let pipeline = LexiconPipeline {
        task: Task::Polarity,
        sentlex: &sentlex,
        catlex: &catlex,
    };
    let report = cross_validate(&examples, &pipeline, &Hyperparams::new(3), 5, 3).unwrap();
    assert_eq!(report.pooled_confusion.total(), 20);
    assert!(report.mean_accuracy > 0.8, "mean {}", report.mean_accuracy);
    // Same seed, same report.
    let again = cross_validate(&examples, &pipeline, &Hyperparams::new(3), 5, 3).unwrap();
    assert_eq!(report, again);
}
