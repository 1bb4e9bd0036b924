//! Emotion-quadrant mapping and the end-to-end classification pipeline.
//!
//! The polarity and intensity labels place a text in one of four quadrants
//! of the valence/arousal plane: Satisfied (positive, low), Exuberant
//! (positive, high), Sad (negative, low), Angry (negative, high).

use serde::{Deserialize, Serialize};

use crate::dataset::Task;
use crate::error::{CoreError, Result};
use crate::eval::FeaturePipeline;
use crate::features::{
    BaselineMode, FeatureDescriptor, FeatureVector, baseline_vector, fit_baseline_vocabulary,
    intensity_descriptor, intensity_features, polarity_descriptor, polarity_features,
};
use crate::lexicon::{CategoryLexicon, SentimentLexicon};
use crate::svm::{Label, TrainedModel, predict};
use crate::textproc::{Document, segment};

/// One of the four emotion quadrants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmotionQuadrant {
    Satisfied,
    Exuberant,
    Sad,
    Angry,
}

impl EmotionQuadrant {
    pub const ALL: [EmotionQuadrant; 4] = [
        EmotionQuadrant::Satisfied,
        EmotionQuadrant::Exuberant,
        EmotionQuadrant::Sad,
        EmotionQuadrant::Angry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmotionQuadrant::Satisfied => "Satisfied",
            EmotionQuadrant::Exuberant => "Exuberant",
            EmotionQuadrant::Sad => "Sad",
            EmotionQuadrant::Angry => "Angry",
        }
    }

    /// Long form with the synonymous mood word, e.g. "Satisfied/Calm".
    pub fn descriptive(self) -> &'static str {
        match self {
            EmotionQuadrant::Satisfied => "Satisfied/Calm",
            EmotionQuadrant::Exuberant => "Exuberant/Excited",
            EmotionQuadrant::Sad => "Sad/Down",
            EmotionQuadrant::Angry => "Angry/Agitated",
        }
    }
}

impl std::fmt::Display for EmotionQuadrant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Map the (polarity, intensity) label pair onto its quadrant. Total and
/// bijective over the four pairs.
pub fn map_quadrant(polarity: Label, intensity: Label) -> EmotionQuadrant {
    match (polarity, intensity) {
        (Label::Positive, Label::Negative) => EmotionQuadrant::Satisfied,
        (Label::Positive, Label::Positive) => EmotionQuadrant::Exuberant,
        (Label::Negative, Label::Negative) => EmotionQuadrant::Sad,
        (Label::Negative, Label::Positive) => EmotionQuadrant::Angry,
    }
}

/// Full classification outcome for one text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionResult {
    pub quadrant: EmotionQuadrant,
    pub polarity_label: Label,
    pub polarity_decision_value: f64,
    pub intensity_label: Label,
    pub intensity_decision_value: f64,
}

/// Classify one text with both models: segment once, extract both feature
/// vectors, predict, and map the quadrant. Decision values are passed
/// through raw for caller-side confidence display.
pub fn classify_text(
    text: &str,
    polarity_model: &TrainedModel,
    intensity_model: &TrainedModel,
    sentlex: &SentimentLexicon,
    catlex: &CategoryLexicon,
) -> Result<EmotionResult> {
    let expected_polarity = polarity_descriptor(catlex);
    if polarity_model.descriptor.id != expected_polarity.id {
        return Err(CoreError::DescriptorMismatch {
            context: "polarity model".into(),
            expected: expected_polarity.id,
            found: polarity_model.descriptor.id.clone(),
        });
    }
    let expected_intensity = intensity_descriptor(catlex);
    if intensity_model.descriptor.id != expected_intensity.id {
        return Err(CoreError::DescriptorMismatch {
            context: "intensity model".into(),
            expected: expected_intensity.id,
            found: intensity_model.descriptor.id.clone(),
        });
    }

    let doc = segment(text)?;
    let (polarity_label, polarity_decision_value) =
        predict(polarity_model, &polarity_features(&doc, sentlex, catlex))?;
    let (intensity_label, intensity_decision_value) =
        predict(intensity_model, &intensity_features(&doc, sentlex, catlex))?;

    Ok(EmotionResult {
        quadrant: map_quadrant(polarity_label, intensity_label),
        polarity_label,
        polarity_decision_value,
        intensity_label,
        intensity_decision_value,
    })
}

/// Stateless per-document extraction of the lexicon features for one task.
pub struct LexiconPipeline<'a> {
    pub task: Task,
    pub sentlex: &'a SentimentLexicon,
    pub catlex: &'a CategoryLexicon,
}

impl LexiconPipeline<'_> {
    pub fn descriptor(&self) -> FeatureDescriptor {
        match self.task {
            Task::Polarity => polarity_descriptor(self.catlex),
            Task::Intensity => intensity_descriptor(self.catlex),
        }
    }

    pub fn extract(&self, doc: &Document) -> FeatureVector {
        match self.task {
            Task::Polarity => polarity_features(doc, self.sentlex, self.catlex),
            Task::Intensity => intensity_features(doc, self.sentlex, self.catlex),
        }
    }
}

impl FeaturePipeline for LexiconPipeline<'_> {
    fn extract_fold(
        &self,
        train: &[&Document],
        test: &[&Document],
    ) -> Result<(FeatureDescriptor, Vec<FeatureVector>, Vec<FeatureVector>)> {
        let descriptor = self.descriptor();
        let train_vecs = train.iter().map(|d| self.extract(d)).collect();
        let test_vecs = test.iter().map(|d| self.extract(d)).collect();
        Ok((descriptor, train_vecs, test_vecs))
    }
}

/// Unigram-presence baseline extraction; the vocabulary refits on the
/// training documents of every fold.
pub struct BaselinePipeline<'a> {
    pub mode: BaselineMode,
    pub sentlex: Option<&'a SentimentLexicon>,
}

impl FeaturePipeline for BaselinePipeline<'_> {
    fn extract_fold(
        &self,
        train: &[&Document],
        test: &[&Document],
    ) -> Result<(FeatureDescriptor, Vec<FeatureVector>, Vec<FeatureVector>)> {
        let descriptor = fit_baseline_vocabulary(train.iter().copied(), self.mode, self.sentlex)?;
        let train_vecs = train
            .iter()
            .map(|d| baseline_vector(&descriptor, d))
            .collect::<Result<_>>()?;
        let test_vecs = test
            .iter()
            .map(|d| baseline_vector(&descriptor, d))
            .collect::<Result<_>>()?;
        Ok((descriptor, train_vecs, test_vecs))
    }
}
