//! Contracts for the model roles the augmentation algorithms consume, plus
//! deterministic mock implementations used as test oracles.
//!
//! Every algorithm talks to models through these narrow traits, so the
//! pipeline runs identically against mocks (in tests) and real model
//! adapters (out of tree). Backends report `concurrency_safe`; callers must
//! serialize calls to backends that report false.

pub mod config;
pub mod mocks;

use std::sync::Arc;

use crate::corpus::SentimentLabel;
use crate::error::{Error, Result};

pub use config::{load_backend_config, load_backend_set, BackendConfig, BackendSet};
pub use mocks::{make_mock_backend, BOUNDARY_TOKEN};

/// Language the corpora are written in; back-translation returns to it.
pub const DEFAULT_SOURCE_LANG: &str = "mr";
/// Intermediate language for back-translation.
pub const DEFAULT_PIVOT_LANG: &str = "en";

/// Entity category that masking must leave untouched.
pub const OTHER_CATEGORY: &str = "Other";

/// Replacement-word prediction for one masked position.
///
/// The contract takes the full word list plus the masked index rather than
/// a pre-masked string, so sequential and parallel replacement policies
/// stay on the caller's side; backends differ only in how they predict.
pub trait FillMaskBackend: Send + Sync {
    /// Predicts a replacement for `words[masked_index]`. Must return
    /// exactly one non-empty, whitespace-free word.
    fn predict(&self, words: &[String], masked_index: usize) -> Result<String>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// A tagged named-entity span over a word list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpan {
    /// First word index of the span (inclusive).
    pub start: usize,
    /// One past the last word index (exclusive).
    pub end: usize,
    /// "Person", "Location", ..., or "Other".
    pub category: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, category: impl Into<String>) -> Self {
        EntitySpan {
            start,
            end,
            category: category.into(),
        }
    }
}

/// Checks the span contract: in bounds, non-empty, sorted by start,
/// non-overlapping. Violations are backend bugs, not input errors.
pub fn validate_spans(spans: &[EntitySpan], word_count: usize) -> Result<()> {
    let mut prev_end = 0usize;
    for (i, span) in spans.iter().enumerate() {
        if span.start >= span.end || span.end > word_count {
            return Err(Error::BackendContract(format!(
                "entity span {}..{} invalid for {} words",
                span.start, span.end, word_count
            )));
        }
        if i > 0 && span.start < prev_end {
            return Err(Error::BackendContract(format!(
                "entity spans unsorted or overlapping at span {}..{}",
                span.start, span.end
            )));
        }
        prev_end = span.end;
    }
    Ok(())
}

/// Named-entity tagging over a word list.
pub trait NerBackend: Send + Sync {
    /// Returns spans that satisfy [`validate_spans`].
    fn tag(&self, words: &[String]) -> Result<Vec<EntitySpan>>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// Sentence-level translation between two languages.
pub trait TranslatorBackend: Send + Sync {
    /// Output may be empty only for empty input.
    fn translate(&self, text: &str, source_lang: &str, target_lang: &str) -> Result<String>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// Sentence-level paraphrasing.
pub trait ParaphraserBackend: Send + Sync {
    /// Output must be non-empty for non-empty input.
    fn paraphrase(&self, text: &str) -> Result<String>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// Three-way sentiment classification.
pub trait ClassifierBackend: Send + Sync {
    fn predict(&self, text: &str) -> Result<SentimentLabel>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// Label-conditioned sentence completion.
pub trait CompleterBackend: Send + Sync {
    /// Completes `prompt_text` consistently with `label`; non-empty output.
    fn complete(&self, prompt_text: &str, label: SentimentLabel) -> Result<String>;

    fn concurrency_safe(&self) -> bool {
        true
    }
}

/// The model role a backend fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    FillMask,
    Ner,
    Translator,
    Paraphraser,
    Classifier,
    Completer,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::FillMask => "fill_mask",
            Role::Ner => "ner",
            Role::Translator => "translator",
            Role::Paraphraser => "paraphraser",
            Role::Classifier => "classifier",
            Role::Completer => "completer",
        }
    }
}

/// A backend instance of any role, as produced by config loading.
#[derive(Clone)]
pub enum AnyBackend {
    FillMask(Arc<dyn FillMaskBackend>),
    Ner(Arc<dyn NerBackend>),
    Translator(Arc<dyn TranslatorBackend>),
    Paraphraser(Arc<dyn ParaphraserBackend>),
    Classifier(Arc<dyn ClassifierBackend>),
    Completer(Arc<dyn CompleterBackend>),
}

impl std::fmt::Debug for AnyBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AnyBackend({})", self.role().as_str())
    }
}

impl AnyBackend {
    pub fn role(&self) -> Role {
        match self {
            AnyBackend::FillMask(_) => Role::FillMask,
            AnyBackend::Ner(_) => Role::Ner,
            AnyBackend::Translator(_) => Role::Translator,
            AnyBackend::Paraphraser(_) => Role::Paraphraser,
            AnyBackend::Classifier(_) => Role::Classifier,
            AnyBackend::Completer(_) => Role::Completer,
        }
    }

    fn role_mismatch(&self, wanted: Role) -> Error {
        Error::Config(format!(
            "backend fills role {:?}, but a {:?} backend is required",
            self.role().as_str(),
            wanted.as_str()
        ))
    }

    pub fn into_fill_mask(self) -> Result<Arc<dyn FillMaskBackend>> {
        match self {
            AnyBackend::FillMask(b) => Ok(b),
            other => Err(other.role_mismatch(Role::FillMask)),
        }
    }

    pub fn into_ner(self) -> Result<Arc<dyn NerBackend>> {
        match self {
            AnyBackend::Ner(b) => Ok(b),
            other => Err(other.role_mismatch(Role::Ner)),
        }
    }

    pub fn into_translator(self) -> Result<Arc<dyn TranslatorBackend>> {
        match self {
            AnyBackend::Translator(b) => Ok(b),
            other => Err(other.role_mismatch(Role::Translator)),
        }
    }

    pub fn into_paraphraser(self) -> Result<Arc<dyn ParaphraserBackend>> {
        match self {
            AnyBackend::Paraphraser(b) => Ok(b),
            other => Err(other.role_mismatch(Role::Paraphraser)),
        }
    }

    pub fn into_classifier(self) -> Result<Arc<dyn ClassifierBackend>> {
        match self {
            AnyBackend::Classifier(b) => Ok(b),
            other => Err(other.role_mismatch(Role::Classifier)),
        }
    }

    pub fn into_completer(self) -> Result<Arc<dyn CompleterBackend>> {
        match self {
            AnyBackend::Completer(b) => Ok(b),
            other => Err(other.role_mismatch(Role::Completer)),
        }
    }
}
