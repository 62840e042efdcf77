//! Backend instantiation from JSON config files.
//!
//! A config file holds either a single backend object
//! `{"kind": ..., "params": {...}, "model_id": ..., "device": ...,
//! "concurrency_safe": ...}` or a role-keyed map of such objects
//! (`{"fill_mask": {...}, "ner": {...}}`) for methods that need several
//! models at once.
//!
//! External-model kinds (`external-fillmask`, `external-classifier`,
//! `external-ner`, `external-completer`, `external-paraphraser`,
//! `external-translator`) are recognized and resolve their documented
//! default model identifiers, but no model adapter is compiled into this
//! build, so instantiating one reports the backend as unavailable — an
//! error deliberately distinguishable from input or config mistakes.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

use super::mocks::{build_mock, MOCK_KINDS};
use super::{
    AnyBackend, ClassifierBackend, CompleterBackend, FillMaskBackend, NerBackend,
    ParaphraserBackend, Role, TranslatorBackend,
};

/// One backend declaration as written in a config file.
#[derive(Debug, Clone, Deserialize)]
pub struct BackendConfig {
    pub kind: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub model_id: Option<String>,
    #[serde(default)]
    pub device: Option<String>,
    #[serde(default)]
    pub concurrency_safe: Option<bool>,
}

/// (kind, role, default model identifier) for the external-model kinds.
const EXTERNAL_KINDS: [(&str, Role, Option<&str>); 6] = [
    ("external-fillmask", Role::FillMask, Some("l3cube-pune/marathi-bert-v2")),
    ("external-classifier", Role::Classifier, Some("l3cube-pune/marathi-bert-v2")),
    ("external-ner", Role::Ner, Some("l3cube-pune/marathi-ner")),
    ("external-completer", Role::Completer, Some("l3cube-pune/marathi-gpt")),
    (
        "external-paraphraser",
        Role::Paraphraser,
        Some("ai4bharat/MultiIndicParaphraseGeneration"),
    ),
    ("external-translator", Role::Translator, None),
];

impl BackendConfig {
    /// Builds the backend this config describes.
    pub fn instantiate(&self) -> Result<AnyBackend> {
        if MOCK_KINDS.contains(&self.kind.as_str()) {
            return build_mock(&self.kind, &self.params, self.concurrency_safe.unwrap_or(true));
        }
        if let Some((kind, _, default_id)) =
            EXTERNAL_KINDS.iter().find(|(k, _, _)| *k == self.kind)
        {
            let model_id = self
                .model_id
                .as_deref()
                .or(*default_id)
                .unwrap_or("unspecified");
            return Err(Error::BackendUnavailable(format!(
                "{kind} (model {model_id:?}) needs an external model adapter, and none is \
                 compiled into this build"
            )));
        }
        Err(Error::Config(format!(
            "unknown backend kind {:?} (mock kinds: {}; external kinds: {})",
            self.kind,
            MOCK_KINDS.join(", "),
            EXTERNAL_KINDS.map(|(k, _, _)| k).join(", ")
        )))
    }
}

fn parse_config_value(path: &Path, value: Value) -> Result<BackendConfig> {
    serde_json::from_value(value)
        .map_err(|e| Error::Config(format!("{}: invalid backend config: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&content)
        .map_err(|e| Error::Config(format!("{}: not valid JSON: {e}", path.display())))
}

/// Loads a config file declaring exactly one backend.
pub fn load_backend_config(path: &Path) -> Result<AnyBackend> {
    let value = read_json(path)?;
    let object = value.as_object().ok_or_else(|| {
        Error::Config(format!("{}: backend config must be a JSON object", path.display()))
    })?;
    if !object.contains_key("kind") {
        return Err(Error::Config(format!(
            "{}: backend config is missing the \"kind\" field",
            path.display()
        )));
    }
    parse_config_value(path, value)?.instantiate()
}

/// Backends grouped by role, as consumed by the dataset-level pipelines.
#[derive(Clone, Default)]
pub struct BackendSet {
    pub fill_mask: Option<Arc<dyn FillMaskBackend>>,
    pub ner: Option<Arc<dyn NerBackend>>,
    pub translator: Option<Arc<dyn TranslatorBackend>>,
    pub paraphraser: Option<Arc<dyn ParaphraserBackend>>,
    pub classifier: Option<Arc<dyn ClassifierBackend>>,
    pub completer: Option<Arc<dyn CompleterBackend>>,
}

impl BackendSet {
    pub fn insert(&mut self, backend: AnyBackend) {
        match backend {
            AnyBackend::FillMask(b) => self.fill_mask = Some(b),
            AnyBackend::Ner(b) => self.ner = Some(b),
            AnyBackend::Translator(b) => self.translator = Some(b),
            AnyBackend::Paraphraser(b) => self.paraphraser = Some(b),
            AnyBackend::Classifier(b) => self.classifier = Some(b),
            AnyBackend::Completer(b) => self.completer = Some(b),
        }
    }

    fn missing(role: Role) -> Error {
        Error::Config(format!(
            "no {} backend configured; declare one under the {:?} key of the backend \
             config file",
            role.as_str().replace('_', "-"),
            role.as_str()
        ))
    }

    pub fn require_fill_mask(&self) -> Result<Arc<dyn FillMaskBackend>> {
        self.fill_mask.clone().ok_or_else(|| Self::missing(Role::FillMask))
    }

    pub fn require_ner(&self) -> Result<Arc<dyn NerBackend>> {
        self.ner.clone().ok_or_else(|| Self::missing(Role::Ner))
    }

    pub fn require_translator(&self) -> Result<Arc<dyn TranslatorBackend>> {
        self.translator.clone().ok_or_else(|| Self::missing(Role::Translator))
    }

    pub fn require_paraphraser(&self) -> Result<Arc<dyn ParaphraserBackend>> {
        self.paraphraser.clone().ok_or_else(|| Self::missing(Role::Paraphraser))
    }

    pub fn require_classifier(&self) -> Result<Arc<dyn ClassifierBackend>> {
        self.classifier.clone().ok_or_else(|| Self::missing(Role::Classifier))
    }

    pub fn require_completer(&self) -> Result<Arc<dyn CompleterBackend>> {
        self.completer.clone().ok_or_else(|| Self::missing(Role::Completer))
    }
}

/// Loads either config shape into a [`BackendSet`]: a single backend object
/// fills the one role its kind implies; a role-keyed map fills each named
/// role.
pub fn load_backend_set(path: &Path) -> Result<BackendSet> {
    let value = read_json(path)?;
    let object = value.as_object().ok_or_else(|| {
        Error::Config(format!("{}: backend config must be a JSON object", path.display()))
    })?;
    let mut set = BackendSet::default();
    if object.contains_key("kind") {
        set.insert(parse_config_value(path, value)?.instantiate()?);
        return Ok(set);
    }
    if object.is_empty() {
        return Err(Error::Config(format!(
            "{}: backend config declares no backends",
            path.display()
        )));
    }
    let roles = [
        Role::FillMask,
        Role::Ner,
        Role::Translator,
        Role::Paraphraser,
        Role::Classifier,
        Role::Completer,
    ];
    for (key, entry) in object {
        let role = roles
            .iter()
            .find(|r| r.as_str() == key)
            .ok_or_else(|| {
                Error::Config(format!(
                    "{}: unknown backend role {key:?} (expected one of {})",
                    path.display(),
                    roles.map(Role::as_str).join(", ")
                ))
            })?;
        let backend = parse_config_value(path, entry.clone())?.instantiate()?;
        if backend.role() != *role {
            return Err(Error::Config(format!(
                "{}: backend under {key:?} has kind of role {:?}",
                path.display(),
                backend.role().as_str()
            )));
        }
        set.insert(backend);
    }
    Ok(set)
}
