//! Two-axis affect classification for English text.
//!
//! Text is scored along polarity (positive/negative) and intensity
//! (low/high) by two independent linear SVMs over lexicon-derived features,
//! and the label pair is mapped onto one of four emotion quadrants. The
//! crate also ships the supporting machinery: SentiWordNet and General
//! Inquirer parsers, a deterministic tokenizer, distant-supervision dataset
//! construction from star ratings, and a stratified cross-validation
//! harness.

#![forbid(unsafe_code)]

pub mod dataset;
pub mod emotion;
pub mod error;
pub mod eval;
pub mod features;
pub mod lexicon;
pub mod provenance;
pub mod svm;
pub mod textproc;

pub use dataset::{LabeledText, ReviewRecord, Task};
pub use emotion::{EmotionQuadrant, EmotionResult};
pub use error::{CoreError, Result};
pub use eval::{CVReport, ConfusionMatrix, Metrics};
pub use features::{BaselineMode, FeatureDescriptor, FeatureVector};
pub use lexicon::{CategoryLexicon, PosTag, SentimentLexicon};
pub use svm::{Hyperparams, Label, Standardizer, TrainedModel};
pub use textproc::{Document, Token, TokenKind};
