//! Shared helpers for the CLI integration and acceptance suites.
// Each test target uses a different subset of these helpers.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Output;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Run the `affect` binary with the given arguments.
pub fn affect(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_affect"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

pub fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        stdout_of(output),
        stderr_of(output)
    );
}

pub const POSITIVE_WORDS: &[&str] = &["good", "excellent", "amazing", "tasty", "delicious", "love"];
pub const NEGATIVE_WORDS: &[&str] = &["bad", "terrible", "awful", "horrible", "bland", "hate"];
pub const NEUTRAL_WORDS: &[&str] = &[
    "pizza",
    "service",
    "restaurant",
    "table",
    "menu",
    "lunch",
    "order",
    "plate",
    "window",
    "street",
];
// Polarity-neutral by construction: none of these appear in the fixture
// lexicons, so they carry intensity signal only.
pub const CAPS_WORDS: &[&str] = &["WOW", "TOTALLY", "SUPER", "SUCH", "ABSOLUTELY"];
pub const ELONGATED_WORDS: &[&str] = &["sooo", "reallyyyy", "goooood", "yesss", "hmmmm"];

fn sample_words(rng: &mut ChaCha8Rng, pool: &[&str], count: usize) -> Vec<String> {
    (0..count)
        .map(|_| pool.choose(rng).unwrap().to_string())
        .collect()
}

/// One synthetic review with planted polarity and intensity cues.
pub fn planted_review(rng: &mut ChaCha8Rng, positive: bool, intense: bool) -> String {
    let opinion_pool = if positive {
        POSITIVE_WORDS
    } else {
        NEGATIVE_WORDS
    };
    let n_opinion = rng.random_range(2..5);
    let n_neutral = rng.random_range(2..6);
    let mut words = sample_words(rng, opinion_pool, n_opinion);
    words.extend(sample_words(rng, NEUTRAL_WORDS, n_neutral));
    if intense {
        let n_caps = rng.random_range(1..3);
        let n_long = rng.random_range(1..3);
        words.extend(sample_words(rng, CAPS_WORDS, n_caps));
        words.extend(sample_words(rng, ELONGATED_WORDS, n_long));
    }
    // Deterministic shuffle via index sampling.
    let order = rand::seq::index::sample(rng, words.len(), words.len());
    let body: Vec<&str> = order.iter().map(|i| words[i].as_str()).collect();
    let terminator = if intense { "!!!" } else { "." };
    format!("{}{}", body.join(" "), terminator)
}

/// Synthetic star-rated review corpus in the JSONL input format:
/// `n_per_star` reviews for each star in `stars`.
pub fn synthetic_reviews_jsonl(seed: u64, n_per_star: usize, stars: &[u8]) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    for &star in stars {
        for _ in 0..n_per_star {
            let (positive, intense) = match star {
                5 => (true, true),
                4 => (true, false),
                3 => (rng.random_bool(0.5), false),
                2 => (false, false),
                _ => (false, true),
            };
            let text = planted_review(&mut rng, positive, intense);
            lines.push(serde_json::json!({ "stars": star, "text": text }).to_string());
        }
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[allow(dead_code)]
pub fn write_file(path: &Path, contents: &str) {
    std::fs::write(path, contents).expect("write test file");
}
