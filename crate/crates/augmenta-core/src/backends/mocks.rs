//! Deterministic mock backends.
//!
//! Each mock is referentially transparent — identical inputs yield
//! identical outputs across calls and processes — which makes them usable
//! as exact test oracles for the augmentation algorithms.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::corpus::SentimentLabel;
use crate::error::{Error, Result};

use super::{
    AnyBackend, ClassifierBackend, CompleterBackend, EntitySpan, FillMaskBackend, NerBackend,
    ParaphraserBackend, TranslatorBackend, DEFAULT_PIVOT_LANG, DEFAULT_SOURCE_LANG,
};

/// What `neighbor-fillmask` predicts for a mask at index 0, where no left
/// neighbor exists.
pub const BOUNDARY_TOKEN: &str = "∅-token";

/// Mock kinds accepted by [`make_mock_backend`].
pub const MOCK_KINDS: [&str; 11] = [
    "echo-fillmask",
    "constant-fillmask",
    "neighbor-fillmask",
    "dictionary-translator",
    "lossy-translator",
    "lexicon-ner",
    "constant-classifier",
    "suffix-completer",
    "identity-completer",
    "identity-paraphraser",
    "suffix-paraphraser",
];

/// Instantiates a deterministic mock backend.
///
/// `params` carries kind-specific configuration: `constant-fillmask` needs
/// `word`; `dictionary-translator` needs `table` (an invertible word map);
/// `lossy-translator` needs `forward` and `backward` maps; `lexicon-ner`
/// needs `table` (word → category); `constant-classifier` needs `label`;
/// `suffix-completer` needs `suffixes` (label code → suffix);
/// `suffix-paraphraser` needs `word`.
pub fn make_mock_backend(kind: &str, params: &Map<String, Value>) -> Result<AnyBackend> {
    build_mock(kind, params, true)
}

/// As [`make_mock_backend`], with the `concurrency_safe` flag the backend
/// will report. Mocks are actually safe either way; the flag exists so the
/// serialization path of callers can be exercised.
pub(crate) fn build_mock(
    kind: &str,
    params: &Map<String, Value>,
    concurrency_safe: bool,
) -> Result<AnyBackend> {
    let backend = match kind {
        "echo-fillmask" => AnyBackend::FillMask(std::sync::Arc::new(EchoFillMask {
            concurrency_safe,
        })),
        "constant-fillmask" => {
            let word = require_str(kind, params, "word")?;
            AnyBackend::FillMask(std::sync::Arc::new(ConstantFillMask::new(
                word,
                concurrency_safe,
            )?))
        }
        "neighbor-fillmask" => AnyBackend::FillMask(std::sync::Arc::new(NeighborFillMask {
            concurrency_safe,
        })),
        "dictionary-translator" => {
            let table = require_string_table(kind, params, "table")?;
            let (source, pivot) = lang_params(params);
            AnyBackend::Translator(std::sync::Arc::new(DictionaryTranslator::new(
                table,
                source,
                pivot,
                concurrency_safe,
            )?))
        }
        "lossy-translator" => {
            let forward = require_string_table(kind, params, "forward")?;
            let backward = require_string_table(kind, params, "backward")?;
            let (source, pivot) = lang_params(params);
            AnyBackend::Translator(std::sync::Arc::new(LossyTranslator {
                forward,
                backward,
                source_lang: source,
                pivot_lang: pivot,
                concurrency_safe,
            }))
        }
        "lexicon-ner" => {
            let table = require_string_table(kind, params, "table")?;
            AnyBackend::Ner(std::sync::Arc::new(LexiconNer {
                table,
                concurrency_safe,
            }))
        }
        "constant-classifier" => {
            let label = require_label(kind, params, "label")?;
            AnyBackend::Classifier(std::sync::Arc::new(ConstantClassifier {
                label,
                concurrency_safe,
            }))
        }
        "suffix-completer" => {
            let suffixes = require_suffixes(kind, params)?;
            AnyBackend::Completer(std::sync::Arc::new(SuffixCompleter {
                suffixes,
                concurrency_safe,
            }))
        }
        "identity-completer" => AnyBackend::Completer(std::sync::Arc::new(IdentityCompleter {
            concurrency_safe,
        })),
        "identity-paraphraser" => {
            AnyBackend::Paraphraser(std::sync::Arc::new(IdentityParaphraser {
                concurrency_safe,
            }))
        }
        "suffix-paraphraser" => {
            let word = require_str(kind, params, "word")?;
            AnyBackend::Paraphraser(std::sync::Arc::new(SuffixParaphraser {
                word,
                concurrency_safe,
            }))
        }
        other => {
            return Err(Error::Config(format!(
                "unknown mock backend kind {other:?} (known: {})",
                MOCK_KINDS.join(", ")
            )))
        }
    };
    Ok(backend)
}

fn require_str(kind: &str, params: &Map<String, Value>, key: &str) -> Result<String> {
    match params.get(key) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(other) => Err(Error::Config(format!(
            "backend kind {kind:?}: param {key:?} must be a string, got {other}"
        ))),
        None => Err(Error::Config(format!(
            "backend kind {kind:?} requires param {key:?}"
        ))),
    }
}

fn require_string_table(
    kind: &str,
    params: &Map<String, Value>,
    key: &str,
) -> Result<BTreeMap<String, String>> {
    let value = params.get(key).ok_or_else(|| {
        Error::Config(format!("backend kind {kind:?} requires param {key:?}"))
    })?;
    let object = value.as_object().ok_or_else(|| {
        Error::Config(format!(
            "backend kind {kind:?}: param {key:?} must be an object of strings"
        ))
    })?;
    let mut table = BTreeMap::new();
    for (k, v) in object {
        let s = v.as_str().ok_or_else(|| {
            Error::Config(format!(
                "backend kind {kind:?}: param {key:?} entry {k:?} must map to a string"
            ))
        })?;
        table.insert(k.clone(), s.to_string());
    }
    Ok(table)
}

fn require_label(kind: &str, params: &Map<String, Value>, key: &str) -> Result<SentimentLabel> {
    let value = params.get(key).ok_or_else(|| {
        Error::Config(format!("backend kind {kind:?} requires param {key:?}"))
    })?;
    let code = match value {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| {
        Error::Config(format!(
            "backend kind {kind:?}: param {key:?} must be an integer label code"
        ))
    })?;
    SentimentLabel::new(code)
        .map_err(|_| Error::Config(format!("backend kind {kind:?}: label {code} outside {{0, 1, 2}}")))
}

fn require_suffixes(kind: &str, params: &Map<String, Value>) -> Result<BTreeMap<u8, String>> {
    let table = require_string_table(kind, params, "suffixes")?;
    let mut suffixes = BTreeMap::new();
    for (code, suffix) in table {
        let label: i64 = code.trim().parse().map_err(|_| {
            Error::Config(format!(
                "backend kind {kind:?}: suffix key {code:?} is not a label code"
            ))
        })?;
        let label = SentimentLabel::new(label).map_err(|_| {
            Error::Config(format!("backend kind {kind:?}: label {label} outside {{0, 1, 2}}"))
        })?;
        suffixes.insert(label.value(), suffix);
    }
    Ok(suffixes)
}

fn lang_params(params: &Map<String, Value>) -> (String, String) {
    let get = |key: &str, default: &str| {
        params
            .get(key)
            .and_then(Value::as_str)
            .unwrap_or(default)
            .to_string()
    };
    (
        get("source_lang", DEFAULT_SOURCE_LANG),
        get("pivot_lang", DEFAULT_PIVOT_LANG),
    )
}

fn check_index(words: &[String], masked_index: usize) -> Result<()> {
    if masked_index < words.len() {
        Ok(())
    } else {
        Err(Error::Backend(format!(
            "masked index {masked_index} out of bounds for {} words",
            words.len()
        )))
    }
}

/// Returns the original word at the masked index; composing it with any
/// masking algorithm is the identity function.
#[derive(Debug, Clone)]
pub struct EchoFillMask {
    concurrency_safe: bool,
}

impl EchoFillMask {
    pub fn new() -> Self {
        EchoFillMask {
            concurrency_safe: true,
        }
    }
}

impl Default for EchoFillMask {
    fn default() -> Self {
        Self::new()
    }
}

impl FillMaskBackend for EchoFillMask {
    fn predict(&self, words: &[String], masked_index: usize) -> Result<String> {
        check_index(words, masked_index)?;
        Ok(words[masked_index].clone())
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Always predicts the same word.
#[derive(Debug, Clone)]
pub struct ConstantFillMask {
    word: String,
    concurrency_safe: bool,
}

impl ConstantFillMask {
    pub fn new(word: impl Into<String>, concurrency_safe: bool) -> Result<Self> {
        let word = word.into();
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::Config(format!(
                "constant-fillmask word {word:?} must be one non-empty whitespace-free word"
            )));
        }
        Ok(ConstantFillMask {
            word,
            concurrency_safe,
        })
    }
}

impl FillMaskBackend for ConstantFillMask {
    fn predict(&self, words: &[String], masked_index: usize) -> Result<String> {
        check_index(words, masked_index)?;
        Ok(self.word.clone())
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Predicts the word left of the mask, or [`BOUNDARY_TOKEN`] at index 0.
/// Context-sensitive by construction, so it distinguishes sequential from
/// parallel replacement semantics.
#[derive(Debug, Clone)]
pub struct NeighborFillMask {
    concurrency_safe: bool,
}

impl NeighborFillMask {
    pub fn new() -> Self {
        NeighborFillMask {
            concurrency_safe: true,
        }
    }
}

impl Default for NeighborFillMask {
    fn default() -> Self {
        Self::new()
    }
}

impl FillMaskBackend for NeighborFillMask {
    fn predict(&self, words: &[String], masked_index: usize) -> Result<String> {
        check_index(words, masked_index)?;
        if masked_index == 0 {
            Ok(BOUNDARY_TOKEN.to_string())
        } else {
            Ok(words[masked_index - 1].clone())
        }
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Word-by-word translation through an invertible table; unknown words
/// pass through unchanged, so the pivot round-trip is always the identity.
#[derive(Debug, Clone)]
pub struct DictionaryTranslator {
    forward: BTreeMap<String, String>,
    backward: BTreeMap<String, String>,
    source_lang: String,
    pivot_lang: String,
    concurrency_safe: bool,
}

impl DictionaryTranslator {
    pub fn new(
        table: BTreeMap<String, String>,
        source_lang: impl Into<String>,
        pivot_lang: impl Into<String>,
        concurrency_safe: bool,
    ) -> Result<Self> {
        let mut backward = BTreeMap::new();
        for (word, translation) in &table {
            if backward
                .insert(translation.clone(), word.clone())
                .is_some()
            {
                return Err(Error::Config(format!(
                    "dictionary-translator table is not invertible: translation {translation:?} repeats"
                )));
            }
        }
        Ok(DictionaryTranslator {
            forward: table,
            backward,
            source_lang: source_lang.into(),
            pivot_lang: pivot_lang.into(),
            concurrency_safe,
        })
    }
}

fn map_words(table: &BTreeMap<String, String>, text: &str) -> String {
    text.split_whitespace()
        .map(|w| table.get(w).map_or(w, String::as_str))
        .collect::<Vec<_>>()
        .join(" ")
}

fn pick_direction<'a, T>(
    source_lang: &str,
    pivot_lang: &str,
    from: &str,
    to: &str,
    forward: &'a T,
    backward: &'a T,
) -> Result<&'a T> {
    if from == source_lang && to == pivot_lang {
        Ok(forward)
    } else if from == pivot_lang && to == source_lang {
        Ok(backward)
    } else {
        Err(Error::Backend(format!(
            "translator handles {source_lang}↔{pivot_lang}, asked for {from}→{to}"
        )))
    }
}

impl TranslatorBackend for DictionaryTranslator {
    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String> {
        let table = pick_direction(
            &self.source_lang,
            &self.pivot_lang,
            source_lang,
            target_lang,
            &self.forward,
            &self.backward,
        )?;
        Ok(map_words(table, text))
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Word-by-word translation through two independent (possibly
/// non-invertible) tables, one per direction. Models information loss in
/// real pivot translation.
#[derive(Debug, Clone)]
pub struct LossyTranslator {
    pub forward: BTreeMap<String, String>,
    pub backward: BTreeMap<String, String>,
    pub source_lang: String,
    pub pivot_lang: String,
    pub concurrency_safe: bool,
}

impl TranslatorBackend for LossyTranslator {
    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String> {
        let table = pick_direction(
            &self.source_lang,
            &self.pivot_lang,
            source_lang,
            target_lang,
            &self.forward,
            &self.backward,
        )?;
        Ok(map_words(table, text))
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Tags single-word entities by exact lookup in a word → category table.
/// Scanning left to right yields spans already sorted and disjoint.
#[derive(Debug, Clone)]
pub struct LexiconNer {
    table: BTreeMap<String, String>,
    concurrency_safe: bool,
}

impl LexiconNer {
    pub fn new(table: BTreeMap<String, String>) -> Self {
        LexiconNer {
            table,
            concurrency_safe: true,
        }
    }
}

impl NerBackend for LexiconNer {
    fn tag(&self, words: &[String]) -> Result<Vec<EntitySpan>> {
        Ok(words
            .iter()
            .enumerate()
            .filter_map(|(i, word)| {
                self.table
                    .get(word)
                    .map(|category| EntitySpan::new(i, i + 1, category.clone()))
            })
            .collect())
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Predicts the same label for every text.
#[derive(Debug, Clone)]
pub struct ConstantClassifier {
    label: SentimentLabel,
    concurrency_safe: bool,
}

impl ConstantClassifier {
    pub fn new(label: SentimentLabel) -> Self {
        ConstantClassifier {
            label,
            concurrency_safe: true,
        }
    }
}

impl ClassifierBackend for ConstantClassifier {
    fn predict(&self, _text: &str) -> Result<SentimentLabel> {
        Ok(self.label)
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Appends a fixed per-label suffix to the prompt.
#[derive(Debug, Clone)]
pub struct SuffixCompleter {
    suffixes: BTreeMap<u8, String>,
    concurrency_safe: bool,
}

impl SuffixCompleter {
    pub fn new(suffixes: BTreeMap<u8, String>) -> Self {
        SuffixCompleter {
            suffixes,
            concurrency_safe: true,
        }
    }
}

impl CompleterBackend for SuffixCompleter {
    fn complete(&self, prompt_text: &str, label: SentimentLabel) -> Result<String> {
        let suffix = self.suffixes.get(&label.value()).ok_or_else(|| {
            Error::Backend(format!(
                "suffix-completer has no suffix configured for label {label}"
            ))
        })?;
        Ok(format!("{prompt_text}{suffix}"))
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Returns the prompt unchanged regardless of label.
#[derive(Debug, Clone)]
pub struct IdentityCompleter {
    concurrency_safe: bool,
}

impl IdentityCompleter {
    pub fn new() -> Self {
        IdentityCompleter {
            concurrency_safe: true,
        }
    }
}

impl Default for IdentityCompleter {
    fn default() -> Self {
        Self::new()
    }
}

impl CompleterBackend for IdentityCompleter {
    fn complete(&self, prompt_text: &str, _label: SentimentLabel) -> Result<String> {
        Ok(prompt_text.to_string())
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Returns the text unchanged.
#[derive(Debug, Clone)]
pub struct IdentityParaphraser {
    concurrency_safe: bool,
}

impl IdentityParaphraser {
    pub fn new() -> Self {
        IdentityParaphraser {
            concurrency_safe: true,
        }
    }
}

impl Default for IdentityParaphraser {
    fn default() -> Self {
        Self::new()
    }
}

impl ParaphraserBackend for IdentityParaphraser {
    fn paraphrase(&self, text: &str) -> Result<String> {
        Ok(text.to_string())
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}

/// Appends one fixed word to the text.
#[derive(Debug, Clone)]
pub struct SuffixParaphraser {
    word: String,
    concurrency_safe: bool,
}

impl SuffixParaphraser {
    pub fn new(word: impl Into<String>) -> Self {
        SuffixParaphraser {
            word: word.into(),
            concurrency_safe: true,
        }
    }
}

impl ParaphraserBackend for SuffixParaphraser {
    fn paraphrase(&self, text: &str) -> Result<String> {
        Ok(format!("{text} {}", self.word))
    }

    fn concurrency_safe(&self) -> bool {
        self.concurrency_safe
    }
}
