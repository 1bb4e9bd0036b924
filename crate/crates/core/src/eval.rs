//! Stratified k-fold cross-validation and classification metrics.

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::LabeledText;
use crate::error::{CoreError, Result};
use crate::features::{FeatureDescriptor, FeatureVector};
use crate::svm::{Hyperparams, Label, predict, train};
use crate::textproc::{Document, segment};

/// Binary confusion counts. The positive class is +1 (positive polarity /
/// high intensity).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionMatrix {
    pub fn new(true_pos: usize, false_pos: usize, false_neg: usize, true_neg: usize) -> Self {
        Self {
            true_pos,
            false_pos,
            false_neg,
            true_neg,
        }
    }

    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }

    pub fn record(&mut self, actual: Label, predicted: Label) {
        match (actual, predicted) {
            (Label::Positive, Label::Positive) => self.true_pos += 1,
            (Label::Negative, Label::Positive) => self.false_pos += 1,
            (Label::Positive, Label::Negative) => self.false_neg += 1,
            (Label::Negative, Label::Negative) => self.true_neg += 1,
        }
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.true_pos += other.true_pos;
        self.false_pos += other.false_pos;
        self.false_neg += other.false_neg;
        self.true_neg += other.true_neg;
    }
}

/// Accuracy plus per-class precision and recall. Ratios with a zero
/// denominator are undefined (`None`), never reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub precision_pos: Option<f64>,
    pub precision_neg: Option<f64>,
    pub recall_pos: Option<f64>,
    pub recall_neg: Option<f64>,
}

fn ratio(numerator: usize, denominator: usize) -> Option<f64> {
    (denominator > 0).then(|| numerator as f64 / denominator as f64)
}

/// Metric arithmetic over one confusion matrix.
pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    Metrics {
        accuracy: ratio(cm.true_pos + cm.true_neg, cm.total()),
        precision_pos: ratio(cm.true_pos, cm.true_pos + cm.false_pos),
        precision_neg: ratio(cm.true_neg, cm.true_neg + cm.false_neg),
        recall_pos: ratio(cm.true_pos, cm.true_pos + cm.false_neg),
        recall_neg: ratio(cm.true_neg, cm.true_neg + cm.false_pos),
    }
}

/// Split indices into k disjoint stratified folds: per-class seeded shuffle
/// followed by round-robin assignment, so per-class fold sizes differ by at
/// most one. Returned folds are sorted index lists.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(CoreError::InvalidConfig("fold count must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    for class in [Label::Negative, Label::Positive] {
        let mut indices: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        if indices.len() < k {
            return Err(CoreError::ClassSmallerThanFolds {
                class: format!("{class:?}"),
                have: indices.len(),
                folds: k,
            });
        }
        indices.shuffle(&mut rng);
        for (j, idx) in indices.into_iter().enumerate() {
            folds[j % k].push(idx);
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Fits corpus-level feature state on training documents only, then produces
/// vectors for both splits. This is the leakage boundary: nothing from the
/// held-out documents may influence the descriptor.
pub trait FeaturePipeline {
    fn extract_fold(
        &self,
        train: &[&Document],
        test: &[&Document],
    ) -> Result<(FeatureDescriptor, Vec<FeatureVector>, Vec<FeatureVector>)>;
}

/// Cross-validation outcome: per-fold accuracies, their mean and sample
/// standard deviation, and the pooled confusion matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVReport {
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub pooled_confusion: ConfusionMatrix,
}

impl CVReport {
    pub fn from_folds(fold_accuracies: Vec<f64>, pooled_confusion: ConfusionMatrix) -> Self {
        let (mean, std) = mean_and_sample_std(&fold_accuracies);
        Self {
            fold_accuracies,
            mean_accuracy: mean,
            std_accuracy: std,
            pooled_confusion,
        }
    }

    /// `"81.60% +/- 1.92%"`.
    pub fn mean_std_line(&self) -> String {
        format!(
            "{:.2}% +/- {:.2}%",
            self.mean_accuracy * 100.0,
            self.std_accuracy * 100.0
        )
    }

    /// Human-readable confusion table with per-class precision and recall,
    /// positive class first.
    pub fn render_table(&self, label_names: (&str, &str)) -> String {
        let (neg, pos) = label_names;
        let cm = &self.pooled_confusion;
        let m = metrics(cm);
        let fmt = |v: Option<f64>| match v {
            Some(x) => format!("{:.2}%", x * 100.0),
            None => "n/a".to_string(),
        };
        let mut out = String::new();
        out.push_str(&format!("mean accuracy: {}\n\n", self.mean_std_line()));
        let rows = [
            [
                String::new(),
                format!("true \"{pos}\""),
                format!("true \"{neg}\""),
                "class precision".to_string(),
            ],
            [
                format!("pred \"{pos}\""),
                cm.true_pos.to_string(),
                cm.false_pos.to_string(),
                fmt(m.precision_pos),
            ],
            [
                format!("pred \"{neg}\""),
                cm.false_neg.to_string(),
                cm.true_neg.to_string(),
                fmt(m.precision_neg),
            ],
            [
                "class recall".to_string(),
                fmt(m.recall_pos),
                fmt(m.recall_neg),
                String::new(),
            ],
        ];
        let widths: Vec<usize> = (0..4)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        for row in &rows {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

// Per-fold training seeds derived from the run seed by splitmix64, so one
// seed governs every fold without reusing a stream.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stratified k-fold cross-validation of one task's examples.
///
/// For each fold the pipeline refits its corpus-level state on the k-1
/// training folds, a model is trained on them, and the held-out fold is
/// evaluated. Fold accuracies are reported in fold order, so the result does
/// not depend on evaluation scheduling.
pub fn cross_validate<P: FeaturePipeline>(
    examples: &[LabeledText],
    pipeline: &P,
    hp: &Hyperparams,
    k: usize,
    seed: u64,
) -> Result<CVReport> {
    let task = examples
        .first()
        .ok_or_else(|| CoreError::InvalidConfig("no examples".into()))?
        .task;
    let label_names = task.label_names();

    let documents: Vec<Document> = examples
        .iter()
        .map(|e| segment(&e.text))
        .collect::<Result<_>>()?;
    let labels: Vec<Label> = examples.iter().map(|e| e.label).collect();

    let folds = stratified_folds(&labels, k, seed)?;
    let mut fold_accuracies = Vec::with_capacity(k);
    let mut pooled = ConfusionMatrix::default();

    for (fold_idx, test_indices) in folds.iter().enumerate() {
        let in_test: Vec<bool> = {
            let mut mask = vec![false; examples.len()];
            for &i in test_indices {
                mask[i] = true;
            }
            mask
        };
        let train_indices: Vec<usize> = (0..examples.len()).filter(|i| !in_test[*i]).collect();

        let train_docs: Vec<&Document> = train_indices.iter().map(|&i| &documents[i]).collect();
        let test_docs: Vec<&Document> = test_indices.iter().map(|&i| &documents[i]).collect();
        let (descriptor, train_vecs, test_vecs) = pipeline.extract_fold(&train_docs, &test_docs)?;

        let train_examples: Vec<(FeatureVector, Label)> = train_vecs
            .into_iter()
            .zip(train_indices.iter().map(|&i| labels[i]))
            .collect();
        let fold_hp = Hyperparams {
            seed: derive_seed(hp.seed, fold_idx as u64),
            ..hp.clone()
        };
        let model = train(
            &descriptor,
            &train_examples,
            &fold_hp,
            (label_names.0.to_string(), label_names.1.to_string()),
        )?;

        let mut correct = 0usize;
        for (vector, &i) in test_vecs.iter().zip(test_indices) {
            let (predicted, _) = predict(&model, vector)?;
            pooled.record(labels[i], predicted);
            if predicted == labels[i] {
                correct += 1;
            }
        }
        fold_accuracies.push(correct as f64 / test_indices.len() as f64);
    }

    Ok(CVReport::from_folds(fold_accuracies, pooled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Task;
    use proptest::prelude::*;

    #[test]
    fn table_arithmetic_polarity_counts() {
        let m = metrics(&ConfusionMatrix::new(2143, 563, 357, 1937));
        assert!((m.precision_pos.unwrap() * 100.0 - 79.19).abs() < 0.005);
        assert!((m.precision_neg.unwrap() * 100.0 - 84.44).abs() < 0.005);
        assert!((m.recall_pos.unwrap() * 100.0 - 85.72).abs() < 0.005);
        assert!((m.recall_neg.unwrap() * 100.0 - 77.48).abs() < 0.005);
        assert!((m.accuracy.unwrap() - 0.816).abs() < 1e-12);
    }

    #[test]
    fn table_arithmetic_intensity_counts() {
        let m = metrics(&ConfusionMatrix::new(1556, 699, 944, 1801));
        assert!((m.precision_pos.unwrap() * 100.0 - 69.00).abs() < 0.005);
        assert!((m.precision_neg.unwrap() * 100.0 - 65.61).abs() < 0.005);
        assert!((m.recall_pos.unwrap() * 100.0 - 62.24).abs() < 0.005);
        assert!((m.recall_neg.unwrap() * 100.0 - 72.04).abs() < 0.005);
    }

    #[test]
    fn perfect_predictions_give_unit_metrics() {
        let m = metrics(&ConfusionMatrix::new(10, 0, 0, 10));
        assert_eq!(m.accuracy, Some(1.0));
        assert_eq!(m.precision_pos, Some(1.0));
        assert_eq!(m.precision_neg, Some(1.0));
        assert_eq!(m.recall_pos, Some(1.0));
        assert_eq!(m.recall_neg, Some(1.0));
    }

    #[test]
    fn zero_denominators_are_undefined_not_zero() {
        // No positive predictions at all.
        let m = metrics(&ConfusionMatrix::new(0, 0, 5, 5));
        assert_eq!(m.precision_pos, None);
        assert!(m.precision_neg.is_some());
        let empty = metrics(&ConfusionMatrix::default());
        assert_eq!(empty.accuracy, None);
    }

    fn balanced_labels(per_class: usize) -> Vec<Label> {
        let mut labels = Vec::new();
        for i in 0..per_class * 2 {
            labels.push(if i % 2 == 0 {
                Label::Positive
            } else {
                Label::Negative
            });
        }
        labels
    }

    #[test]
    fn balanced_five_thousand_examples_split_evenly() {
        let labels = balanced_labels(2500);
        let folds = stratified_folds(&labels, 10, 7).unwrap();
        assert_eq!(folds.len(), 10);
        for fold in &folds {
            assert_eq!(fold.len(), 500);
            let pos = fold
                .iter()
                .filter(|&&i| labels[i] == Label::Positive)
                .count();
            assert_eq!(pos, 250);
        }
    }

    #[test]
    fn remainders_spread_by_at_most_one() {
        let labels = balanced_labels(3);
        let folds = stratified_folds(&labels, 2, 1).unwrap();
        for fold in &folds {
            let pos = fold
                .iter()
                .filter(|&&i| labels[i] == Label::Positive)
                .count();
            let neg = fold.len() - pos;
            assert!((1..=2).contains(&pos));
            assert!((1..=2).contains(&neg));
        }
    }

    #[test]
    fn folds_are_deterministic_per_seed() {
        let labels = balanced_labels(50);
        assert_eq!(
            stratified_folds(&labels, 5, 9).unwrap(),
            stratified_folds(&labels, 5, 9).unwrap()
        );
        assert_ne!(
            stratified_folds(&labels, 5, 9).unwrap(),
            stratified_folds(&labels, 5, 10).unwrap()
        );
    }

    #[test]
    fn undersized_class_is_an_error() {
        let labels = vec![Label::Positive, Label::Positive, Label::Negative];
        let err = stratified_folds(&labels, 2, 0).unwrap_err();
        assert!(matches!(err, CoreError::ClassSmallerThanFolds { .. }));
    }

    #[test]
    fn report_arithmetic_matches_hand_values() {
        let report = CVReport::from_folds(vec![0.8, 0.9], ConfusionMatrix::new(1, 0, 0, 1));
        assert!((report.mean_accuracy - 0.85).abs() < 1e-15);
        assert!((report.std_accuracy - 0.07071067811865478).abs() < 1e-12);
    }

    #[test]
    fn report_line_style() {
        let report = CVReport::from_folds(vec![0.8352, 0.7968], ConfusionMatrix::new(1, 1, 1, 1));
        assert_eq!(report.mean_std_line(), "81.60% +/- 2.72%");

        let literal = CVReport {
            fold_accuracies: vec![],
            mean_accuracy: 0.8160,
            std_accuracy: 0.0192,
            pooled_confusion: ConfusionMatrix::default(),
        };
        assert_eq!(literal.mean_std_line(), "81.60% +/- 1.92%");
    }

    #[test]
    fn rendered_table_mirrors_the_layout() {
        let report = CVReport::from_folds(vec![0.816], ConfusionMatrix::new(2143, 563, 357, 1937));
        let table = report.render_table(Task::Polarity.label_names());
        assert!(table.contains("pred \"positive\""));
        assert!(table.contains("2143"));
        assert!(table.contains("79.19%"));
        assert!(table.contains("class recall"));
        assert!(table.contains("85.72%"));
    }

    // A pipeline whose single feature is the planted class signal, so CV
    // accuracy must be perfect.
    struct PlantedPipeline;

    impl FeaturePipeline for PlantedPipeline {
        fn extract_fold(
            &self,
            train: &[&Document],
            test: &[&Document],
        ) -> Result<(FeatureDescriptor, Vec<FeatureVector>, Vec<FeatureVector>)> {
            let descriptor = FeatureDescriptor::new("planted/v1", vec!["signal".into()])?;
            let enc = |docs: &[&Document]| {
                docs.iter()
                    .map(|d| {
                        let signal = if d.raw.contains("aaa") { 1.0 } else { -1.0 };
                        FeatureVector::new(&descriptor, vec![signal])
                    })
                    .collect::<Result<Vec<_>>>()
            };
            Ok((descriptor.clone(), enc(train)?, enc(test)?))
        }
    }

    fn planted_examples(per_class: usize) -> Vec<LabeledText> {
        let mut examples = Vec::new();
        for i in 0..per_class {
            examples.push(LabeledText {
                text: format!("aaa sample {i}"),
                task: Task::Polarity,
                label: Label::Positive,
            });
            examples.push(LabeledText {
                text: format!("bbb sample {i}"),
                task: Task::Polarity,
                label: Label::Negative,
            });
        }
        examples
    }

    #[test]
    fn separable_synthetic_data_cross_validates_perfectly() {
        let examples = planted_examples(30);
        let report =
            cross_validate(&examples, &PlantedPipeline, &Hyperparams::new(5), 5, 11).unwrap();
        assert_eq!(report.mean_accuracy, 1.0);
        assert_eq!(report.std_accuracy, 0.0);
        assert_eq!(report.pooled_confusion.total(), 60);
        assert_eq!(report.pooled_confusion.true_pos, 30);
        assert_eq!(report.pooled_confusion.true_neg, 30);
    }

    proptest! {
        #[test]
        fn folds_partition_the_index_range(
            per_class in 2usize..40,
            k in 2usize..6,
            seed in 0u64..50,
        ) {
            prop_assume!(per_class >= k);
            let labels = balanced_labels(per_class);
            let folds = stratified_folds(&labels, k, seed).unwrap();
            let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
        }

        #[test]
        fn relabeling_swaps_class_metrics(
            tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50, tn in 0usize..50,
        ) {
            let original = ConfusionMatrix::new(tp, fp, fn_, tn);
            // Swapping every label and prediction turns tp<->tn and fp<->fn.
            let swapped = ConfusionMatrix::new(tn, fn_, fp, tp);
            let a = metrics(&original);
            let b = metrics(&swapped);
            prop_assert_eq!(a.precision_pos, b.precision_neg);
            prop_assert_eq!(a.precision_neg, b.precision_pos);
            prop_assert_eq!(a.recall_pos, b.recall_neg);
            prop_assert_eq!(a.recall_neg, b.recall_pos);
            prop_assert_eq!(a.accuracy, b.accuracy);
        }
    }
}
