//! Sentence cleaning and word-level tokenization.
//!
//! Cleaning keeps Devanagari text (U+0900..=U+097F), ASCII digits, and
//! single spaces; everything else — URLs, hashtag marks, punctuation,
//! Latin script — is stripped. All masking operations work on the
//! whitespace tokenization defined here.

use crate::error::{Error, Result};

/// A sentence split into whitespace-free words plus its single-spaced join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedSentence {
    pub words: Vec<String>,
    /// Always equal to `words` joined by single spaces.
    pub joined: String,
}

/// Options for [`clean_text_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CleanOptions {
    /// Delete the whole hashtag word instead of just the `#` mark.
    /// Off by default: tag words often carry sentiment, so `#word` keeps
    /// whatever part of `word` survives the script filter.
    pub drop_hashtag_words: bool,
}

fn keep_char(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c) || c.is_ascii_digit()
}

/// URL tokens are deleted whole, before character filtering, so their
/// digits do not leak into the output.
fn is_url_token(token: &str) -> bool {
    let lower = token.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Cleans a sentence with default options. See [`clean_text_with`].
pub fn clean_text(text: &str) -> String {
    clean_text_with(text, CleanOptions::default())
}

/// Cleans a sentence: drops URL tokens, strips `#`, keeps only Devanagari
/// characters and ASCII digits inside each token, drops tokens that end up
/// empty, and joins the survivors with single spaces. Idempotent; may
/// return an empty string.
pub fn clean_text_with(text: &str, opts: CleanOptions) -> String {
    let kept: Vec<String> = text
        .split_whitespace()
        .filter(|token| !is_url_token(token))
        .filter(|token| !(opts.drop_hashtag_words && token.starts_with('#')))
        .map(|token| token.chars().filter(|&c| keep_char(c)).collect::<String>())
        .filter(|token| !token.is_empty())
        .collect();
    kept.join(" ")
}

/// Splits on whitespace runs. Empty input yields zero words.
pub fn tokenize(text: &str) -> TokenizedSentence {
    let words: Vec<String> = text.split_whitespace().map(str::to_string).collect();
    let joined = words.join(" ");
    TokenizedSentence { words, joined }
}

/// Single-space join; the inverse of [`tokenize`] on already single-spaced
/// strings. A word containing whitespace is a contract violation.
pub fn detokenize(words: &[String]) -> Result<String> {
    for word in words {
        if word.chars().any(char::is_whitespace) {
            return Err(Error::Precondition(format!(
                "detokenize: word {word:?} contains whitespace"
            )));
        }
    }
    Ok(words.join(" "))
}
