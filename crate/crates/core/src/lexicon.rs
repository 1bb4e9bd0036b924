//! Lexical resources: the SentiWordNet 3.0 sentiment lexicon, the General
//! Inquirer category lexicon, and the rank-weighted per-word polarity score.
//!
//! A word's polarity score is a weighted mean over all of its synsets. Each
//! synset contributes its base score (positivity minus negativity) with
//! weight 1/k, where k is the synset's position in the rank-ordered list, and
//! the total is normalized by the truncated harmonic sum. Scores therefore
//! always land in [-1, 1].

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Part-of-speech tag carried by a SentiWordNet synset.
///
/// The order of the variants is the tie-break order when synsets of equal
/// sense rank are merged across tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PosTag {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PosTag {
    pub const ALL: [PosTag; 4] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adjective,
        PosTag::Adverb,
    ];

    /// Decode the single-letter tag used by the SentiWordNet file format.
    /// `s` (adjective satellite) folds into `Adjective`.
    fn from_swn(tag: &str) -> Option<PosTag> {
        match tag {
            "n" => Some(PosTag::Noun),
            "v" => Some(PosTag::Verb),
            "a" | "s" => Some(PosTag::Adjective),
            "r" => Some(PosTag::Adverb),
            _ => None,
        }
    }
}

/// One synset's scores for a given surface term: sense rank plus the
/// positivity/negativity pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynsetScore {
    pub rank: u32,
    pub pos_score: f64,
    pub neg_score: f64,
}

impl SynsetScore {
    /// Positivity minus negativity, in [-1, 1].
    pub fn base_score(&self) -> f64 {
        self.pos_score - self.neg_score
    }
}

/// Token -> per-POS synset score lists, rank-ordered. Keys are lowercase;
/// lookups are case-insensitive. Immutable after parsing.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon {
    entries: HashMap<String, [Vec<SynsetScore>; 4]>,
}

impl SentimentLexicon {
    /// Number of distinct tokens.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rank-ordered synset scores for `token` under one POS tag.
    pub fn scores(&self, token: &str, pos: PosTag) -> &[SynsetScore] {
        let key = token.to_lowercase();
        self.entries
            .get(&key)
            .map(|per_pos| per_pos[pos as usize].as_slice())
            .unwrap_or(&[])
    }

    /// True if `token` has at least one synset under `pos`.
    pub fn has_pos_entry(&self, token: &str, pos: PosTag) -> bool {
        !self.scores(token, pos).is_empty()
    }

    /// All of a token's synsets merged across POS tags, ordered by sense rank
    /// ascending with ties broken noun < verb < adjective < adverb.
    pub fn merged_synsets(&self, token: &str) -> Vec<SynsetScore> {
        let key = token.to_lowercase();
        let Some(per_pos) = self.entries.get(&key) else {
            return Vec::new();
        };
        let mut merged: Vec<(u32, usize, SynsetScore)> = Vec::new();
        for pos in PosTag::ALL {
            for score in &per_pos[pos as usize] {
                merged.push((score.rank, pos as usize, *score));
            }
        }
        merged.sort_by_key(|(rank, pos_idx, _)| (*rank, *pos_idx));
        merged.into_iter().map(|(_, _, s)| s).collect()
    }

    fn insert(&mut self, term: String, pos: PosTag, score: SynsetScore) {
        let per_pos = self.entries.entry(term).or_default();
        let list = &mut per_pos[pos as usize];
        // Keep the first occurrence of a rank so ordering stays strict.
        if list.iter().any(|s| s.rank == score.rank) {
            return;
        }
        list.push(score);
    }

    fn sort_ranks(&mut self) {
        for per_pos in self.entries.values_mut() {
            for list in per_pos.iter_mut() {
                list.sort_by_key(|s| s.rank);
            }
        }
    }
}

/// Parse a SentiWordNet 3.0 tab-separated stream.
///
/// Data lines carry six fields: POS, ID, PosScore, NegScore, SynsetTerms,
/// Gloss. `SynsetTerms` is a space-separated list of `term#rank` items.
/// Lines starting with `#` are comments; multiword terms (containing `_`)
/// are skipped.
pub fn parse_sentiwordnet<R: BufRead>(input: R) -> Result<SentimentLexicon> {
    let mut lexicon = SentimentLexicon::default();
    let mut saw_entry = false;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(CoreError::Parse {
                line: line_no,
                message: format!("expected 6 tab-separated fields, found {}", fields.len()),
            });
        }

        let pos = PosTag::from_swn(fields[0].trim()).ok_or_else(|| CoreError::Parse {
            line: line_no,
            message: format!("unknown POS tag \"{}\"", fields[0].trim()),
        })?;
        let pos_score = parse_score(fields[2], "PosScore", line_no)?;
        let neg_score = parse_score(fields[3], "NegScore", line_no)?;
        if pos_score + neg_score > 1.0 + 1e-12 {
            return Err(CoreError::Parse {
                line: line_no,
                message: format!("PosScore + NegScore = {} exceeds 1", pos_score + neg_score),
            });
        }

        for item in fields[4].split_whitespace() {
            let (term, rank_str) = item.rsplit_once('#').ok_or_else(|| CoreError::Parse {
                line: line_no,
                message: format!("synset term \"{item}\" lacks a #rank suffix"),
            })?;
            let rank: u32 = rank_str.parse().map_err(|_| CoreError::Parse {
                line: line_no,
                message: format!("unparsable sense rank in \"{item}\""),
            })?;
            if rank < 1 {
                return Err(CoreError::Parse {
                    line: line_no,
                    message: format!("sense rank must be >= 1 in \"{item}\""),
                });
            }
            if term.contains('_') {
                continue; // multiword expression; the tokenizer never emits these
            }
            lexicon.insert(
                term.to_lowercase(),
                pos,
                SynsetScore {
                    rank,
                    pos_score,
                    neg_score,
                },
            );
            saw_entry = true;
        }
    }

    if !saw_entry {
        return Err(CoreError::NoEntries);
    }
    lexicon.sort_ranks();
    Ok(lexicon)
}

fn parse_score(field: &str, name: &str, line_no: usize) -> Result<f64> {
    let value: f64 = field.trim().parse().map_err(|_| CoreError::Parse {
        line: line_no,
        message: format!("unparsable {name} \"{}\"", field.trim()),
    })?;
    if !(0.0..=1.0).contains(&value) {
        return Err(CoreError::Parse {
            line: line_no,
            message: format!("{name} {value} out of [0,1]"),
        });
    }
    Ok(value)
}

/// Rank-weighted polarity score of one token, in [-1, 1].
///
/// The token's synsets are gathered across all POS tags and ordered by sense
/// rank (ties broken by POS order). The k-th synset contributes its base
/// score with weight 1/k; the sum is normalized by 1 + 1/2 + ... + 1/m.
/// Unknown tokens score 0.
pub fn word_polarity_score(lexicon: &SentimentLexicon, token: &str) -> f64 {
    let synsets = lexicon.merged_synsets(token);
    if synsets.is_empty() {
        return 0.0;
    }
    let mut weighted = 0.0;
    let mut total = 0.0;
    for (i, synset) in synsets.iter().enumerate() {
        let weight = 1.0 / (i as f64 + 1.0);
        weighted += synset.base_score() * weight;
        total += weight;
    }
    weighted / total
}

/// One General Inquirer category: its name and its position in the header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GICategory {
    pub name: String,
    pub index: usize,
}

/// Token -> set of category indices, plus the ordered category registry.
/// Multi-sense entries (`ABOUT#1`, `ABOUT#2`) merge by set union.
#[derive(Debug, Clone, Default)]
pub struct CategoryLexicon {
    categories: Vec<GICategory>,
    memberships: HashMap<String, BTreeSet<usize>>,
}

impl CategoryLexicon {
    /// Number of categories, i.e. the GI feature dimension.
    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &[GICategory] {
        &self.categories
    }

    /// Category indices `token` belongs to (empty set when unknown).
    pub fn memberships(&self, token: &str) -> Option<&BTreeSet<usize>> {
        self.memberships.get(&token.to_lowercase())
    }

    pub fn entry_count(&self) -> usize {
        self.memberships.len()
    }
}

/// Parse a General Inquirer delimited table.
///
/// The first row is a header: entry-word column followed by one column per
/// category. A non-empty cell marks membership. Entry words may carry `#n`
/// sense suffixes, which are stripped before merging. The delimiter is
/// sniffed from the header: tab if present, comma (with double-quote
/// escaping) otherwise.
pub fn parse_general_inquirer<R: BufRead>(input: R) -> Result<CategoryLexicon> {
    let mut lines = input.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(CoreError::NoEntries)?;
    let header_line = header_line?;
    let delimiter = if header_line.contains('\t') {
        Delimiter::Tab
    } else {
        Delimiter::Comma
    };

    let header = split_row(&header_line, delimiter);
    if header.len() < 2 {
        return Err(CoreError::Parse {
            line: 1,
            message: "header must name an entry column and at least one category".into(),
        });
    }

    let mut categories = Vec::new();
    let mut seen = BTreeSet::new();
    for (index, name) in header[1..].iter().enumerate() {
        let name = name.trim().to_string();
        if !seen.insert(name.clone()) {
            return Err(CoreError::Parse {
                line: 1,
                message: format!("duplicate category name \"{name}\" in header"),
            });
        }
        categories.push(GICategory { name, index });
    }
    let column_count = header.len();

    let mut memberships: HashMap<String, BTreeSet<usize>> = HashMap::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells = split_row(&line, delimiter);
        if cells.len() > column_count {
            return Err(CoreError::Parse {
                line: line_no,
                message: format!(
                    "row has {} cells but the header has {column_count}",
                    cells.len()
                ),
            });
        }
        let entry = cells[0].trim();
        if entry.is_empty() {
            continue;
        }
        // "ABOUT#1" and "ABOUT#2" share the key "about".
        let key = match entry.split_once('#') {
            Some((word, _)) => word.to_lowercase(),
            None => entry.to_lowercase(),
        };
        let set = memberships.entry(key).or_default();
        for (cat_idx, cell) in cells.iter().skip(1).enumerate() {
            if !cell.trim().is_empty() {
                set.insert(cat_idx);
            }
        }
    }

    if memberships.is_empty() {
        return Err(CoreError::NoEntries);
    }
    Ok(CategoryLexicon {
        categories,
        memberships,
    })
}

#[derive(Clone, Copy)]
enum Delimiter {
    Tab,
    Comma,
}

fn split_row(line: &str, delimiter: Delimiter) -> Vec<String> {
    match delimiter {
        Delimiter::Tab => line.split('\t').map(str::to_string).collect(),
        Delimiter::Comma => split_csv(line),
    }
}

// Minimal CSV splitting: commas separate cells, double quotes group a cell,
// doubled quotes inside a quoted cell escape a literal quote.
fn split_csv(line: &str) -> Vec<String> {
    let mut cells = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    current.push('"');
                } else {
                    in_quotes = false;
                }
            }
            '"' => in_quotes = true,
            ',' if !in_quotes => {
                cells.push(std::mem::take(&mut current));
            }
            _ => current.push(c),
        }
    }
    cells.push(current);
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn lex(text: &str) -> SentimentLexicon {
        parse_sentiwordnet(Cursor::new(text)).expect("fixture parses")
    }

    #[test]
    fn single_line_transcription() {
        let lexicon = lex("a\t00001740\t0.125\t0\table#1\tgloss");
        let scores = lexicon.scores("able", PosTag::Adjective);
        assert_eq!(scores.len(), 1);
        assert_eq!(scores[0].rank, 1);
        assert_eq!(scores[0].pos_score, 0.125);
        assert_eq!(scores[0].neg_score, 0.0);
    }

    #[test]
    fn comment_only_stream_is_no_entries() {
        let err = parse_sentiwordnet(Cursor::new("# header\n# more\n")).unwrap_err();
        assert!(matches!(err, CoreError::NoEntries));
        let err = parse_sentiwordnet(Cursor::new("")).unwrap_err();
        assert!(matches!(err, CoreError::NoEntries));
    }

    #[test]
    fn out_of_file_order_ranks_are_sorted() {
        let lexicon = lex("a\t2\t0.25\t0\tgood#2\tg\na\t1\t0.5\t0\tgood#1\tg\n");
        let scores = lexicon.scores("good", PosTag::Adjective);
        assert_eq!(scores[0].rank, 1);
        assert_eq!(scores[0].pos_score, 0.5);
        assert_eq!(scores[1].rank, 2);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let lexicon = lex("a\t1\t0.5\t0\tGood#1\tg");
        assert!(lexicon.has_pos_entry("GOOD", PosTag::Adjective));
        assert_eq!(word_polarity_score(&lexicon, "GoOd"), 0.5);
    }

    #[test]
    fn satellite_adjectives_fold_into_adjective() {
        let lexicon = lex("s\t1\t0.75\t0\tgreat#1\tg");
        assert!(lexicon.has_pos_entry("great", PosTag::Adjective));
    }

    #[test]
    fn multiword_terms_are_skipped() {
        let lexicon = lex("a\t1\t0.5\t0\tgood#1 in_good_order#1\tg");
        assert_eq!(lexicon.len(), 1);
        assert!(lexicon.merged_synsets("in_good_order").is_empty());
    }

    #[test]
    fn malformed_lines_error_with_line_number() {
        let err = parse_sentiwordnet(Cursor::new("a\t1\t0.5\tgood#1\tg")).unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 1, .. }));

        let err = parse_sentiwordnet(Cursor::new("# ok\na\t1\tbad\t0\tgood#1\tg")).unwrap_err();
        match err {
            CoreError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("PosScore"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let err = parse_sentiwordnet(Cursor::new("a\t1\t1.5\t0\tgood#1\tg")).unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 1, .. }));

        let err = parse_sentiwordnet(Cursor::new("a\t1\t0.5\t0\tgood#0\tg")).unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 1, .. }));
    }

    #[test]
    fn unknown_token_scores_zero() {
        let lexicon = lex("a\t1\t0.5\t0\tgood#1\tg");
        assert_eq!(word_polarity_score(&lexicon, "pizza"), 0.0);
    }

    #[test]
    fn single_synset_score_is_its_base_score() {
        let lexicon = lex("a\t1\t0.75\t0.125\tgood#1\tg");
        assert!((word_polarity_score(&lexicon, "good") - 0.625).abs() < 1e-15);
    }

    #[test]
    fn two_synset_harmonic_weighting() {
        let lexicon = lex("a\t1\t0.5\t0\tgood#1\tg\na\t2\t0\t0.25\tgood#2\tg");
        // (0.5/1 + (-0.25)/2) / (1 + 1/2) = 0.375 / 1.5 = 0.25
        assert!((word_polarity_score(&lexicon, "good") - 0.25).abs() < 1e-15);
    }

    #[test]
    fn merged_order_is_rank_then_pos() {
        let lexicon = lex(concat!(
            "r\t1\t0.125\t0\tfast#2\tg\n",
            "n\t2\t0.25\t0\tfast#2\tg\n",
            "a\t3\t0.5\t0\tfast#1\tg\n",
        ));
        let merged = lexicon.merged_synsets("fast");
        // Rank 1 adjective first, then rank-2 tie broken noun before adverb.
        assert_eq!(merged[0].pos_score, 0.5);
        assert_eq!(merged[1].pos_score, 0.25);
        assert_eq!(merged[2].pos_score, 0.125);
    }

    #[test]
    fn balanced_synsets_score_zero() {
        let lexicon = lex("a\t1\t0.25\t0.25\tmeh#1\tg\nv\t2\t0.5\t0.5\tmeh#1\tg");
        assert_eq!(word_polarity_score(&lexicon, "meh"), 0.0);
    }

    fn gi(text: &str) -> CategoryLexicon {
        parse_general_inquirer(Cursor::new(text)).expect("fixture parses")
    }

    #[test]
    fn single_row_membership() {
        let lexicon = gi("Entry,Positiv,Negativ\nGOOD,Positiv,\n");
        let set = lexicon.memberships("good").unwrap();
        assert_eq!(set.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(lexicon.category_count(), 2);
        assert_eq!(lexicon.categories()[1].name, "Negativ");
    }

    #[test]
    fn sense_suffixes_merge_by_union() {
        let lexicon = gi("Entry,CatA,CatB\nHIT#1,,CatB\nHIT#2,CatA,\n");
        let set = lexicon.memberships("hit").unwrap();
        assert_eq!(set.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn header_order_defines_indices() {
        let mut header = String::from("Entry");
        for i in 0..178 {
            header.push_str(&format!(",Cat{i}"));
        }
        let lexicon = gi(&format!("{header}\nWORD,Cat0{}\n", ",".repeat(177)));
        assert_eq!(lexicon.category_count(), 178);
    }

    #[test]
    fn duplicate_category_is_an_error() {
        let err = parse_general_inquirer(Cursor::new("Entry,Positiv,Positiv\nA,x,\n")).unwrap_err();
        assert!(matches!(err, CoreError::Parse { line: 1, .. }));
    }

    #[test]
    fn overlong_row_errors_with_row_number() {
        let err =
            parse_general_inquirer(Cursor::new("Entry,Positiv\nGOOD,Positiv,extra\n")).unwrap_err();
        match err {
            CoreError::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("cells"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn tab_delimited_tables_parse_too() {
        let lexicon = gi("Entry\tPositiv\tNegativ\nGOOD\tPositiv\t\nBAD\t\tNegativ\n");
        assert_eq!(
            lexicon
                .memberships("bad")
                .unwrap()
                .iter()
                .copied()
                .collect::<Vec<_>>(),
            vec![1]
        );
    }

    #[test]
    fn quoted_csv_cells_are_handled() {
        let lexicon = gi("Entry,Positiv,Defined\nGOOD,Positiv,\"has, commas\"\n");
        let set = lexicon.memberships("good").unwrap();
        assert_eq!(set.iter().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        // Strategy: up to 6 synsets with distinct (pos, rank) pairs and
        // eighth-grid scores summing to at most 1.
        fn synset_lines() -> impl Strategy<Value = Vec<String>> {
            proptest::collection::vec(
                (0usize..4, 1u32..=6, 0u32..=8).prop_flat_map(|(pos, rank, p)| {
                    (Just(pos), Just(rank), Just(p), 0u32..=(8 - p))
                }),
                1..=6,
            )
            .prop_map(|entries| {
                let mut seen = std::collections::BTreeSet::new();
                entries
                    .into_iter()
                    .filter(|(pos, rank, _, _)| seen.insert((*pos, *rank)))
                    .enumerate()
                    .map(|(i, (pos, rank, p, n))| {
                        format!(
                            "{}\t{i:04}\t{}\t{}\tword#{rank}\tgloss",
                            ["n", "v", "a", "r"][pos],
                            p as f64 / 8.0,
                            n as f64 / 8.0,
                        )
                    })
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn score_is_a_convex_combination_of_base_scores(lines in synset_lines()) {
                let lexicon = lex(&lines.join("\n"));
                let score = word_polarity_score(&lexicon, "word");
                let max_base = lexicon
                    .merged_synsets("word")
                    .iter()
                    .map(|s| s.base_score().abs())
                    .fold(0.0f64, f64::max);
                prop_assert!(score.abs() <= max_base + 1e-12);
                prop_assert!(max_base <= 1.0);
            }

            #[test]
            fn file_line_order_never_changes_scores(
                lines in synset_lines(),
                swap in any::<proptest::sample::Index>(),
            ) {
                let original = lex(&lines.join("\n"));
                let mut permuted = lines.clone();
                let i = swap.index(permuted.len());
                permuted.swap(0, i);
                let shuffled = lex(&permuted.join("\n"));
                prop_assert_eq!(
                    word_polarity_score(&original, "word"),
                    word_polarity_score(&shuffled, "word")
                );
            }

            #[test]
            fn balanced_synsets_always_score_zero(ranks in proptest::collection::btree_set(1u32..=6, 1..=4)) {
                let lines: Vec<String> = ranks
                    .iter()
                    .map(|r| format!("a\t{r}\t0.25\t0.25\tword#{r}\tg"))
                    .collect();
                let lexicon = lex(&lines.join("\n"));
                prop_assert_eq!(word_polarity_score(&lexicon, "word"), 0.0);
            }
        }
    }
}
