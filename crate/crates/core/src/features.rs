//! Feature extraction: the lexicon-driven polarity and intensity vectors,
//! plus the unigram-presence baselines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::lexicon::{CategoryLexicon, PosTag, SentimentLexicon, word_polarity_score};
use crate::provenance::fnv1a64;
use crate::textproc::{
    Document, contains_negation, count_all_caps, count_elongated, count_exclamations,
    detect_emoticons, quoted_token_count,
};

/// Names and dimension of one feature layout. The id embeds everything that
/// could make two layouts differ (including the GI category count), so a
/// model trained on one layout can never silently consume another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub id: String,
    pub feature_names: Vec<String>,
}

impl FeatureDescriptor {
    pub fn new(id: impl Into<String>, feature_names: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for name in &feature_names {
            if !seen.insert(name) {
                return Err(CoreError::InvalidConfig(format!(
                    "duplicate feature name \"{name}\""
                )));
            }
        }
        if feature_names.is_empty() {
            return Err(CoreError::InvalidConfig("empty feature layout".into()));
        }
        Ok(Self {
            id: id.into(),
            feature_names,
        })
    }

    pub fn dimension(&self) -> usize {
        self.feature_names.len()
    }
}

/// Dense feature values tied to a descriptor id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub descriptor_id: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(descriptor: &FeatureDescriptor, values: Vec<f64>) -> Result<Self> {
        if values.len() != descriptor.dimension() {
            return Err(CoreError::DimensionMismatch {
                expected: descriptor.dimension(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(CoreError::NonFiniteFeature { index });
        }
        Ok(Self {
            descriptor_id: descriptor.id.clone(),
            values,
        })
    }
}

/// Mean per-sentence lexicon score of a document, in [-1, 1].
///
/// Each sentence's word scores are summed, clamped to [-1, 1], and the sign
/// is flipped when the sentence contains a negation word; the document score
/// is the mean over sentences.
pub fn review_sentiword_score(doc: &Document, lexicon: &SentimentLexicon) -> f64 {
    let mut total = 0.0;
    for sentence in &doc.sentences {
        let sum: f64 = sentence
            .tokens
            .iter()
            .filter(|t| t.is_word())
            .map(|t| word_polarity_score(lexicon, &t.lower))
            .sum();
        let mut score = sum.clamp(-1.0, 1.0);
        if contains_negation(&sentence.tokens) {
            score = -score;
        }
        total += score;
    }
    total / doc.sentence_count() as f64
}

/// Relative frequency of each General Inquirer category over the document's
/// word tokens. All-zero when the document has no word tokens.
pub fn gi_frequencies(doc: &Document, catlex: &CategoryLexicon) -> Vec<f64> {
    let mut counts = vec![0usize; catlex.category_count()];
    let mut word_count = 0usize;
    for token in doc.word_tokens() {
        word_count += 1;
        if let Some(set) = catlex.memberships(&token.lower) {
            for &idx in set {
                counts[idx] += 1;
            }
        }
    }
    if word_count == 0 {
        return vec![0.0; catlex.category_count()];
    }
    counts
        .into_iter()
        .map(|c| c as f64 / word_count as f64)
        .collect()
}

/// Word tokens with at least one adverb entry in the sentiment lexicon,
/// counted by occurrence.
pub fn count_adverbs(doc: &Document, lexicon: &SentimentLexicon) -> usize {
    doc.word_tokens()
        .filter(|t| lexicon.has_pos_entry(&t.lower, PosTag::Adverb))
        .count()
}

fn gi_feature_names(catlex: &CategoryLexicon) -> impl Iterator<Item = String> {
    catlex.categories().iter().map(|c| format!("gi:{}", c.name))
}

/// Descriptor for the polarity layout: lexicon score, GI frequencies,
/// emoticon counts, quoted-word count. Dimension C + 4.
pub fn polarity_descriptor(catlex: &CategoryLexicon) -> FeatureDescriptor {
    let mut names = vec!["sentiword_score".to_string()];
    names.extend(gi_feature_names(catlex));
    names.push("emoticon_positive".to_string());
    names.push("emoticon_negative".to_string());
    names.push("quoted_words".to_string());
    FeatureDescriptor::new(format!("polarity/v1/C={}", catlex.category_count()), names)
        .expect("polarity layout is well-formed")
}

/// Descriptor for the intensity layout: surface-cue counts then GI
/// frequencies. Dimension C + 4.
pub fn intensity_descriptor(catlex: &CategoryLexicon) -> FeatureDescriptor {
    let mut names = vec![
        "all_caps".to_string(),
        "elongated".to_string(),
        "exclamations".to_string(),
        "adverbs".to_string(),
    ];
    names.extend(gi_feature_names(catlex));
    FeatureDescriptor::new(format!("intensity/v1/C={}", catlex.category_count()), names)
        .expect("intensity layout is well-formed")
}

/// Extract the polarity feature vector.
pub fn polarity_features(
    doc: &Document,
    sentlex: &SentimentLexicon,
    catlex: &CategoryLexicon,
) -> FeatureVector {
    let descriptor = polarity_descriptor(catlex);
    let (pos_emoticons, neg_emoticons) = detect_emoticons(doc);
    let mut values = Vec::with_capacity(descriptor.dimension());
    values.push(review_sentiword_score(doc, sentlex));
    values.extend(gi_frequencies(doc, catlex));
    values.push(pos_emoticons as f64);
    values.push(neg_emoticons as f64);
    values.push(quoted_token_count(&doc.raw) as f64);
    FeatureVector::new(&descriptor, values).expect("polarity values are finite by construction")
}

/// Extract the intensity feature vector. Count features are raw counts;
/// standardization at training time absorbs scale.
pub fn intensity_features(
    doc: &Document,
    sentlex: &SentimentLexicon,
    catlex: &CategoryLexicon,
) -> FeatureVector {
    let descriptor = intensity_descriptor(catlex);
    let mut values = Vec::with_capacity(descriptor.dimension());
    values.push(count_all_caps(doc) as f64);
    values.push(count_elongated(doc) as f64);
    values.push(count_exclamations(&doc.raw) as f64);
    values.push(count_adverbs(doc, sentlex) as f64);
    values.extend(gi_frequencies(doc, catlex));
    FeatureVector::new(&descriptor, values).expect("intensity values are finite by construction")
}

/// Vocabulary filter for the unigram baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMode {
    /// Every unigram surviving stopword removal.
    All,
    /// Tokens with an adjective or adverb entry in the sentiment lexicon.
    AdjAdv,
    /// Tokens with an adjective entry only.
    Adj,
    /// The k most frequent remaining unigrams, ties broken lexicographically.
    TopK(usize),
}

impl BaselineMode {
    fn tag(&self) -> String {
        match self {
            BaselineMode::All => "all".into(),
            BaselineMode::AdjAdv => "adjadv".into(),
            BaselineMode::Adj => "adj".into(),
            BaselineMode::TopK(k) => format!("topk{k}"),
        }
    }
}

/// Stopwords removed before building baseline vocabularies.
pub const STOPWORDS: &[&str] = &[
    "a",
    "about",
    "above",
    "after",
    "again",
    "against",
    "all",
    "am",
    "an",
    "and",
    "any",
    "are",
    "as",
    "at",
    "be",
    "because",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "could",
    "did",
    "do",
    "does",
    "doing",
    "down",
    "during",
    "each",
    "few",
    "for",
    "from",
    "further",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "here",
    "hers",
    "herself",
    "him",
    "himself",
    "his",
    "how",
    "i",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "itself",
    "just",
    "me",
    "more",
    "most",
    "my",
    "myself",
    "no",
    "nor",
    "not",
    "now",
    "of",
    "off",
    "on",
    "once",
    "only",
    "or",
    "other",
    "our",
    "ours",
    "ourselves",
    "out",
    "over",
    "own",
    "same",
    "she",
    "should",
    "so",
    "some",
    "such",
    "than",
    "that",
    "the",
    "their",
    "theirs",
    "them",
    "themselves",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "through",
    "to",
    "too",
    "under",
    "until",
    "up",
    "very",
    "was",
    "we",
    "were",
    "what",
    "when",
    "where",
    "which",
    "while",
    "who",
    "whom",
    "why",
    "will",
    "with",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
];

/// Build a unigram vocabulary from a corpus and emit binary presence vectors.
///
/// The vocabulary is fit on `corpus` only, so callers running cross-validation
/// must pass training documents here and vectorize held-out documents with
/// [`baseline_vector`]. Modes `AdjAdv`/`Adj` need the sentiment lexicon for
/// their POS filter.
pub fn baseline_unigram_features(
    corpus: &[Document],
    mode: BaselineMode,
    sentlex: Option<&SentimentLexicon>,
) -> Result<(FeatureDescriptor, Vec<FeatureVector>)> {
    let descriptor = fit_baseline_vocabulary(corpus.iter(), mode, sentlex)?;
    let vectors = corpus
        .iter()
        .map(|doc| baseline_vector(&descriptor, doc))
        .collect::<Result<Vec<_>>>()?;
    Ok((descriptor, vectors))
}

/// Fit the baseline vocabulary only; see [`baseline_unigram_features`].
pub fn fit_baseline_vocabulary<'a>(
    corpus: impl Iterator<Item = &'a Document>,
    mode: BaselineMode,
    sentlex: Option<&SentimentLexicon>,
) -> Result<FeatureDescriptor> {
    if let BaselineMode::TopK(k) = mode {
        if k < 1 {
            return Err(CoreError::InvalidConfig("top-k requires k >= 1".into()));
        }
    }

    // BTreeMap keeps counting deterministic.
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut saw_document = false;
    for doc in corpus {
        saw_document = true;
        for token in doc.word_tokens() {
            if STOPWORDS.contains(&token.lower.as_str()) {
                continue;
            }
            *counts.entry(token.lower.clone()).or_insert(0) += 1;
        }
    }
    if !saw_document {
        return Err(CoreError::InvalidConfig("empty corpus".into()));
    }

    let pos_filter = |token: &str| -> Result<bool> {
        let lexicon = sentlex.ok_or_else(|| {
            CoreError::InvalidConfig("baseline mode requires a sentiment lexicon".into())
        })?;
        Ok(match mode {
            BaselineMode::AdjAdv => {
                lexicon.has_pos_entry(token, PosTag::Adjective)
                    || lexicon.has_pos_entry(token, PosTag::Adverb)
            }
            BaselineMode::Adj => lexicon.has_pos_entry(token, PosTag::Adjective),
            _ => true,
        })
    };

    let vocabulary: Vec<String> = match mode {
        BaselineMode::All => counts.keys().cloned().collect(),
        BaselineMode::AdjAdv | BaselineMode::Adj => {
            let mut kept = Vec::new();
            for token in counts.keys() {
                if pos_filter(token)? {
                    kept.push(token.clone());
                }
            }
            kept
        }
        BaselineMode::TopK(k) => {
            let mut ranked: Vec<(&String, usize)> = counts.iter().map(|(t, &c)| (t, c)).collect();
            // Most frequent first; ties resolve to the lexicographically
            // smaller token.
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            let mut kept: Vec<String> =
                ranked.into_iter().take(k).map(|(t, _)| t.clone()).collect();
            kept.sort();
            kept
        }
    };

    if vocabulary.is_empty() {
        return Err(CoreError::EmptyVocabulary);
    }

    let vocab_hash = fnv1a64(vocabulary.join("\n").as_bytes());
    FeatureDescriptor::new(
        format!(
            "baseline/v1/mode={}/V={}/h={vocab_hash:016x}",
            mode.tag(),
            vocabulary.len()
        ),
        vocabulary,
    )
}

/// Binary presence vector of one document over an existing baseline
/// vocabulary. Tokens outside the vocabulary are ignored.
pub fn baseline_vector(descriptor: &FeatureDescriptor, doc: &Document) -> Result<FeatureVector> {
    let mut values = vec![0.0; descriptor.dimension()];
    for token in doc.word_tokens() {
        if let Ok(idx) = descriptor
            .feature_names
            .binary_search_by(|name| name.as_str().cmp(token.lower.as_str()))
        {
            values[idx] = 1.0;
        }
    }
    FeatureVector::new(descriptor, values)
}
