//! Deterministic text segmentation and surface-cue detection.
//!
//! `segment` splits raw text into sentences (on runs of `.`/`!`/`?` and on
//! newlines) and tokens (words, emoticons, punctuation, numbers), keeping
//! byte spans back into the original text. The remaining functions count the
//! surface cues the feature extractors consume: emoticons, negation words,
//! exclamation marks, all-caps words, elongated words, and quoted words.

use std::sync::LazyLock;

use crate::error::{CoreError, Result};

/// Table of emoticons recognized as single tokens, split by polarity.
/// Loaded once from the embedded inventory file.
pub struct EmoticonTable {
    positive: Vec<&'static str>,
    negative: Vec<&'static str>,
    by_length: Vec<&'static str>,
}

static EMOTICONS: LazyLock<EmoticonTable> = LazyLock::new(|| {
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for line in include_str!("emoticons.txt").lines() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (polarity, emoticon) = line
            .split_once('\t')
            .expect("emoticon inventory lines are tab-separated");
        match polarity {
            "pos" => positive.push(emoticon),
            "neg" => negative.push(emoticon),
            other => panic!("unknown emoticon polarity {other:?}"),
        }
    }
    let mut by_length: Vec<&'static str> = positive.iter().chain(&negative).copied().collect();
    by_length.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    EmoticonTable {
        positive,
        negative,
        by_length,
    }
});

impl EmoticonTable {
    pub fn get() -> &'static EmoticonTable {
        &EMOTICONS
    }

    pub fn positive(&self) -> &[&'static str] {
        &self.positive
    }

    pub fn negative(&self) -> &[&'static str] {
        &self.negative
    }

    fn match_at(&self, text: &str) -> Option<&'static str> {
        self.by_length.iter().copied().find(|e| text.starts_with(e))
    }
}

/// Negation words checked after apostrophe stripping, so "don't", "dont" and
/// "don’t" all hit.
pub const NEGATION_WORDS: &[&str] = &[
    "not", "no", "never", "none", "cannot", "cant", "wont", "dont", "didnt", "doesnt", "isnt",
    "wasnt", "werent", "arent", "aint", "hardly", "barely", "scarcely", "neither", "nor",
    "without",
];

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Emoticon,
    Punctuation,
    Number,
}

/// One token: original surface, lowercase form, byte span into the raw text.
#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    pub lower: String,
    pub span: (usize, usize),
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// One sentence: its byte span and its tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub span: (usize, usize),
    pub tokens: Vec<Token>,
}

/// A segmented document: raw text, sentence spans, tokens per sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub raw: String,
    pub sentences: Vec<Sentence>,
}

impl Document {
    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    /// All tokens across sentences, in order.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences.iter().flat_map(|s| s.tokens.iter())
    }

    /// Word tokens only (kind `Word`; numbers and punctuation excluded).
    pub fn word_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens().filter(|t| t.is_word())
    }
}

/// Segment text into sentences and tokens.
///
/// Sentences end at maximal runs of `.`, `!`, `?` (the run stays with the
/// sentence) and at newlines. Emoticons are matched greedily as single
/// tokens before any other rule; intra-word apostrophes stay inside their
/// word ("don't" is one token). Blank input is an error.
pub fn segment(text: &str) -> Result<Document> {
    if text.trim().is_empty() {
        return Err(CoreError::EmptyDocument);
    }

    let mut sentences = Vec::new();
    for (chunk_start, chunk) in sentence_chunks(text) {
        let tokens = tokenize(chunk, chunk_start);
        if tokens.is_empty() {
            continue;
        }
        // Trim the span to the chunk's non-whitespace extent.
        let leading = chunk.len() - chunk.trim_start().len();
        let trailing = chunk.len() - chunk.trim_end().len();
        sentences.push(Sentence {
            span: (chunk_start + leading, chunk_start + chunk.len() - trailing),
            tokens,
        });
    }

    debug_assert!(!sentences.is_empty(), "non-blank input yields a sentence");
    Ok(Document {
        raw: text.to_string(),
        sentences,
    })
}

const TERMINATORS: [char; 3] = ['.', '!', '?'];

fn sentence_chunks(text: &str) -> Vec<(usize, &str)> {
    let mut chunks = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if c == '\n' {
            chunks.push((start, &text[start..i]));
            start = i + 1;
        } else if TERMINATORS.contains(&c) {
            // Extend over the whole terminator run, then cut.
            let mut end = i + c.len_utf8();
            while let Some(&(j, next)) = iter.peek() {
                if TERMINATORS.contains(&next) {
                    end = j + next.len_utf8();
                    iter.next();
                } else {
                    break;
                }
            }
            chunks.push((start, &text[start..end]));
            start = end;
        }
    }
    if start < text.len() {
        chunks.push((start, &text[start..]));
    }
    chunks
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn tokenize(chunk: &str, base: usize) -> Vec<Token> {
    let table = EmoticonTable::get();
    let mut tokens = Vec::new();
    let mut pos = 0;

    while pos < chunk.len() {
        let rest = &chunk[pos..];
        let c = rest.chars().next().unwrap();

        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }

        // Emoticons win over every other rule.
        if let Some(emoticon) = table.match_at(rest) {
            tokens.push(make_token(
                chunk,
                base,
                pos,
                emoticon.len(),
                TokenKind::Emoticon,
            ));
            pos += emoticon.len();
            continue;
        }

        if is_word_char(c) {
            let len = word_len(rest);
            let surface = &rest[..len];
            let kind = if surface.chars().all(|c| c.is_ascii_digit()) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            tokens.push(make_token(chunk, base, pos, len, kind));
            pos += len;
            continue;
        }

        // Punctuation: a maximal run of the same character.
        let mut len = c.len_utf8();
        for next in rest[len..].chars() {
            if next == c {
                len += next.len_utf8();
            } else {
                break;
            }
        }
        tokens.push(make_token(chunk, base, pos, len, TokenKind::Punctuation));
        pos += len;
    }

    tokens
}

// Length of a word token starting at the beginning of `rest`: alphanumeric
// runs, with apostrophes kept when flanked by word characters on both sides.
fn word_len(rest: &str) -> usize {
    let mut len = 0;
    let mut chars = rest.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if is_word_char(c) {
            len = i + c.len_utf8();
        } else if APOSTROPHES.contains(&c) && i == len && len > 0 {
            match chars.peek() {
                Some(&(_, next)) if is_word_char(next) => continue,
                _ => break,
            }
        } else {
            break;
        }
    }
    len
}

fn make_token(chunk: &str, base: usize, pos: usize, len: usize, kind: TokenKind) -> Token {
    let surface = chunk[pos..pos + len].to_string();
    Token {
        lower: surface.to_lowercase(),
        span: (base + pos, base + pos + len),
        surface,
        kind,
    }
}

/// Count positive and negative emoticon tokens.
pub fn detect_emoticons(doc: &Document) -> (usize, usize) {
    let table = EmoticonTable::get();
    let mut positive = 0;
    let mut negative = 0;
    for token in doc.tokens() {
        if token.kind != TokenKind::Emoticon {
            continue;
        }
        if table.positive.iter().any(|e| *e == token.surface) {
            positive += 1;
        } else if table.negative.iter().any(|e| *e == token.surface) {
            negative += 1;
        }
    }
    (positive, negative)
}

/// True if any token, lowercased and with apostrophes stripped, is a
/// negation word.
pub fn contains_negation(sentence_tokens: &[Token]) -> bool {
    sentence_tokens.iter().any(|token| {
        let stripped: String = token
            .lower
            .chars()
            .filter(|c| !APOSTROPHES.contains(c))
            .collect();
        NEGATION_WORDS.contains(&stripped.as_str())
    })
}

/// Number of `!` characters in the raw text.
pub fn count_exclamations(text: &str) -> usize {
    text.chars().filter(|&c| c == '!').count()
}

/// Word tokens of length >= 2 written entirely in uppercase letters.
/// "I" and "A" never count.
pub fn count_all_caps(doc: &Document) -> usize {
    doc.word_tokens()
        .filter(|t| {
            t.surface.chars().count() >= 2
                && t.surface
                    .chars()
                    .all(|c| c.is_alphabetic() && c.is_uppercase())
        })
        .count()
}

/// Word tokens containing any character repeated at least three times in a row.
pub fn count_elongated(doc: &Document) -> usize {
    doc.word_tokens()
        .filter(|t| has_long_run(&t.surface))
        .count()
}

fn has_long_run(s: &str) -> bool {
    let mut run = 0;
    let mut prev = None;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
            if run >= 3 {
                return true;
            }
        } else {
            prev = Some(c);
            run = 1;
        }
    }
    false
}

/// Number of word tokens between successive pairs of double quotes, pairing
/// quotes left to right. An unpaired trailing quote contributes nothing.
pub fn quoted_token_count(text: &str) -> usize {
    let quote_positions: Vec<usize> = text
        .char_indices()
        .filter(|&(_, c)| c == '"')
        .map(|(i, _)| i)
        .collect();

    let mut count = 0;
    for pair in quote_positions.chunks_exact(2) {
        let inside = &text[pair[0] + 1..pair[1]];
        count += tokenize(inside, 0).iter().filter(|t| t.is_word()).count();
    }
    count
}
