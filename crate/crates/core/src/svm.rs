//! Soft-margin linear SVM: feature standardization, seeded stochastic
//! subgradient training, prediction, and the versioned model file.
//!
//! Training minimizes `0.5*||w||^2 + c * sum_i max(0, 1 - y_i*(w.x_i + b))`
//! over standardized inputs. The weight step follows the 1/(lambda*t)
//! schedule with `lambda = 1/(c*N)`; the unregularized bias steps as 1/t.
//! The returned model is the t-weighted average of the iterates, whose
//! epoch-end loss decays far more smoothly than the last iterate's.
//! Everything is driven by a single seed, so identical inputs and seed give
//! a bit-identical model.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::features::{FeatureDescriptor, FeatureVector};
use crate::provenance::RunHeader;

/// Binary class label. The positive class is +1 by convention: positive
/// polarity, or high intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn signum(self) -> f64 {
        match self {
            Label::Negative => -1.0,
            Label::Positive => 1.0,
        }
    }

    /// Render as the signed form used in dataset files.
    pub fn as_signed_str(self) -> &'static str {
        match self {
            Label::Negative => "-1",
            Label::Positive => "+1",
        }
    }

    pub fn from_signed_str(s: &str) -> Option<Label> {
        match s {
            "-1" => Some(Label::Negative),
            "+1" | "1" => Some(Label::Positive),
            _ => None,
        }
    }
}

/// Per-feature mean and population standard deviation, fit on training data.
/// Zero-variance features store a standard deviation of 1 and so transform
/// to a constant 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
}

impl Standardizer {
    pub fn transform(&self, values: &[f64]) -> Vec<f64> {
        values
            .iter()
            .zip(self.means.iter().zip(&self.stddevs))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}

/// Fit a standardizer over training vectors (two or more, one descriptor).
pub fn fit_standardizer(vectors: &[FeatureVector]) -> Result<Standardizer> {
    let first = vectors.first().ok_or_else(|| {
        CoreError::InvalidConfig("standardizer needs at least two vectors".into())
    })?;
    if vectors.len() < 2 {
        return Err(CoreError::InvalidConfig(
            "standardizer needs at least two vectors".into(),
        ));
    }
    let dim = first.values.len();
    for v in vectors {
        if v.descriptor_id != first.descriptor_id {
            return Err(CoreError::DescriptorMismatch {
                context: "fit_standardizer".into(),
                expected: first.descriptor_id.clone(),
                found: v.descriptor_id.clone(),
            });
        }
        if v.values.len() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                found: v.values.len(),
            });
        }
    }

    let n = vectors.len() as f64;
    let mut means = vec![0.0; dim];
    for v in vectors {
        for (m, x) in means.iter_mut().zip(&v.values) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= n;
    }

    let mut variances = vec![0.0; dim];
    for v in vectors {
        for ((var, x), m) in variances.iter_mut().zip(&v.values).zip(&means) {
            let d = x - m;
            *var += d * d;
        }
    }
    let stddevs = variances
        .into_iter()
        .map(|var| {
            let s = (var / n).sqrt();
            if s > 0.0 { s } else { 1.0 }
        })
        .collect();

    Ok(Standardizer { means, stddevs })
}

/// Step-size schedule for the weight updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearningSchedule {
    /// eta_t = 1 / (lambda * t) with lambda = 1 / (c * N).
    InverseT,
}

/// Training hyperparameters. One seed drives shuffling, so training is
/// reproducible bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub c: f64,
    pub epochs: usize,
    pub schedule: LearningSchedule,
    pub seed: u64,
}

impl Hyperparams {
    pub fn new(seed: u64) -> Self {
        Self {
            c: 1.0,
            epochs: 50,
            schedule: LearningSchedule::InverseT,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.c.is_finite() || self.c <= 0.0 {
            return Err(CoreError::InvalidConfig(format!(
                "soft-margin weight c must be > 0, got {}",
                self.c
            )));
        }
        if self.epochs < 1 {
            return Err(CoreError::InvalidConfig("epochs must be >= 1".into()));
        }
        Ok(())
    }
}

/// A trained linear model plus everything needed to reproduce and apply it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub descriptor: FeatureDescriptor,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
    pub hyperparams: Hyperparams,
    /// (negative class, positive class), e.g. ("negative", "positive").
    pub label_names: (String, String),
}

impl TrainedModel {
    pub fn label_name(&self, label: Label) -> &str {
        match label {
            Label::Negative => &self.label_names.0,
            Label::Positive => &self.label_names.1,
        }
    }
}

/// Full objective: `0.5*||w||^2 + c * sum_i hinge_i` over already-standardized
/// rows.
pub fn objective(weights: &[f64], bias: f64, rows: &[Vec<f64>], labels: &[f64], c: f64) -> f64 {
    let reg: f64 = 0.5 * weights.iter().map(|w| w * w).sum::<f64>();
    let hinge: f64 = rows
        .iter()
        .zip(labels)
        .map(|(x, y)| (1.0 - y * (dot(weights, x) + bias)).max(0.0))
        .sum();
    reg + c * hinge
}

/// Subgradient of [`objective`] at (weights, bias), using the convention
/// that the hinge term is active only where the margin is strictly violated.
pub fn objective_subgradient(
    weights: &[f64],
    bias: f64,
    rows: &[Vec<f64>],
    labels: &[f64],
    c: f64,
) -> (Vec<f64>, f64) {
    let mut grad_w = weights.to_vec();
    let mut grad_b = 0.0;
    for (x, y) in rows.iter().zip(labels) {
        if y * (dot(weights, x) + bias) < 1.0 {
            for (g, xi) in grad_w.iter_mut().zip(x) {
                *g -= c * y * xi;
            }
            grad_b -= c * y;
        }
    }
    (grad_w, grad_b)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Train a soft-margin linear SVM.
///
/// All vectors must match `descriptor` and both classes must be present.
/// Returns the model; `train_traced` also reports the objective after each
/// epoch for convergence checks.
pub fn train(
    descriptor: &FeatureDescriptor,
    examples: &[(FeatureVector, Label)],
    hp: &Hyperparams,
    label_names: (String, String),
) -> Result<TrainedModel> {
    train_traced(descriptor, examples, hp, label_names).map(|(model, _)| model)
}

/// [`train`], additionally returning the value of the objective evaluated at
/// the end of every epoch.
pub fn train_traced(
    descriptor: &FeatureDescriptor,
    examples: &[(FeatureVector, Label)],
    hp: &Hyperparams,
    label_names: (String, String),
) -> Result<(TrainedModel, Vec<f64>)> {
    hp.validate()?;
    if examples.is_empty() {
        return Err(CoreError::DegenerateLabels);
    }
    let has_pos = examples.iter().any(|(_, l)| *l == Label::Positive);
    let has_neg = examples.iter().any(|(_, l)| *l == Label::Negative);
    if !has_pos || !has_neg {
        return Err(CoreError::DegenerateLabels);
    }
    for (v, _) in examples {
        if v.descriptor_id != descriptor.id {
            return Err(CoreError::DescriptorMismatch {
                context: "train".into(),
                expected: descriptor.id.clone(),
                found: v.descriptor_id.clone(),
            });
        }
        if v.values.len() != descriptor.dimension() {
            return Err(CoreError::DimensionMismatch {
                expected: descriptor.dimension(),
                found: v.values.len(),
            });
        }
        if let Some(index) = v.values.iter().position(|x| !x.is_finite()) {
            return Err(CoreError::NonFiniteFeature { index });
        }
    }

    let vectors: Vec<FeatureVector> = examples.iter().map(|(v, _)| v.clone()).collect();
    let standardizer = fit_standardizer(&vectors)?;
    let rows: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| standardizer.transform(&v.values))
        .collect();
    let labels: Vec<f64> = examples.iter().map(|(_, l)| l.signum()).collect();

    let n = rows.len();
    let dim = descriptor.dimension();
    let lambda = 1.0 / (hp.c * n as f64);

    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut weights = vec![0.0; dim];
    let mut bias = 0.0;
    // t-weighted running averages: avg_t = (1 - 2/(t+1)) avg_{t-1} + 2/(t+1) w_t.
    let mut avg_weights = vec![0.0; dim];
    let mut avg_bias = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut step: u64 = 0;
    let mut epoch_losses = Vec::with_capacity(hp.epochs);

    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            step += 1;
            let t = step as f64;
            let eta = 1.0 / (lambda * t);
            let x = &rows[i];
            let y = labels[i];
            let violated = y * (dot(&weights, x) + bias) < 1.0;

            // w <- (1 - eta*lambda) w [+ eta*y*x on a margin violation].
            let shrink = 1.0 - eta * lambda;
            if violated {
                for (w, xi) in weights.iter_mut().zip(x) {
                    *w = *w * shrink + eta * y * xi;
                }
                bias += y / t;
            } else {
                for w in weights.iter_mut() {
                    *w *= shrink;
                }
            }

            let rho = 2.0 / (t + 1.0);
            for (a, w) in avg_weights.iter_mut().zip(&weights) {
                *a += rho * (w - *a);
            }
            avg_bias += rho * (bias - avg_bias);
        }
        epoch_losses.push(objective(&avg_weights, avg_bias, &rows, &labels, hp.c));
    }

    let model = TrainedModel {
        descriptor: descriptor.clone(),
        weights: avg_weights,
        bias: avg_bias,
        standardizer,
        hyperparams: hp.clone(),
        label_names,
    };
    Ok((model, epoch_losses))
}

/// Predict the label and decision value for one vector. A decision value of
/// exactly zero maps to the positive class.
pub fn predict(model: &TrainedModel, vector: &FeatureVector) -> Result<(Label, f64)> {
    if vector.descriptor_id != model.descriptor.id {
        return Err(CoreError::DescriptorMismatch {
            context: "predict".into(),
            expected: model.descriptor.id.clone(),
            found: vector.descriptor_id.clone(),
        });
    }
    let standardized = model.standardizer.transform(&vector.values);
    let decision = dot(&model.weights, &standardized) + model.bias;
    let label = if decision >= 0.0 {
        Label::Positive
    } else {
        Label::Negative
    };
    Ok((label, decision))
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    header: RunHeader,
    model: TrainedModel,
}

/// Write a model as a versioned JSON document, header first.
pub fn write_model<W: Write>(writer: W, model: &TrainedModel, header: &RunHeader) -> Result<()> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        header: header.clone(),
        model: model.clone(),
    };
    serde_json::to_writer_pretty(writer, &file)?;
    Ok(())
}

/// Read a model written by [`write_model`]; a mismatched format version is
/// an error.
pub fn read_model<R: Read>(reader: R) -> Result<(TrainedModel, RunHeader)> {
    let file: ModelFile = serde_json::from_reader(reader)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(CoreError::FormatVersion {
            found: file.format_version,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    Ok((file.model, file.header))
}
