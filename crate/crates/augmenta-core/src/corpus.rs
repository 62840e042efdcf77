//! Data model, dataset file I/O, and fine-grained → 3-point label mapping.
//!
//! File formats:
//! - TSV: UTF-8, header `text\tlabel` (augmented files add `\tsource`), one
//!   example per line. Texts containing tabs or newlines are rejected at
//!   write time; use JSONL for those.
//! - JSONL: one object per line with keys `text`, `label`, optional
//!   `source` and `params`.
//! - Mapping file: two-column TSV `fine_label\tsentiment_code`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three-point sentiment code: 0 = negative, 1 = positive, 2 = neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct SentimentLabel(u8);

impl SentimentLabel {
    pub const NEGATIVE: SentimentLabel = SentimentLabel(0);
    pub const POSITIVE: SentimentLabel = SentimentLabel(1);
    pub const NEUTRAL: SentimentLabel = SentimentLabel(2);

    pub const ALL: [SentimentLabel; 3] = [Self::NEGATIVE, Self::POSITIVE, Self::NEUTRAL];

    pub fn new(value: i64) -> Result<Self> {
        match value {
            0..=2 => Ok(SentimentLabel(value as u8)),
            _ => Err(Error::LabelRange { value }),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            0 => "negative",
            1 => "positive",
            _ => "neutral",
        }
    }
}

impl TryFrom<i64> for SentimentLabel {
    type Error = Error;
    fn try_from(value: i64) -> Result<Self> {
        SentimentLabel::new(value)
    }
}

impl From<SentimentLabel> for u8 {
    fn from(label: SentimentLabel) -> u8 {
        label.0
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Provenance tags a `LabeledExample.source` may carry. `original` marks
/// unmodified input; every generator stamps its own tag.
pub const SOURCE_TAGS: [&str; 10] = [
    "original",
    "back-translation",
    "paraphrase",
    "random-mask-seq",
    "random-mask-par",
    "ner-mask-seq",
    "ner-mask-par",
    "bert-pseudo",
    "gpt-label",
    "gpt-completion",
];

pub fn is_registered_source(source: &str) -> bool {
    SOURCE_TAGS.contains(&source)
}

/// One text with its sentiment label and provenance metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub id: String,
    pub text: String,
    pub label: SentimentLabel,
    /// One of [`SOURCE_TAGS`].
    pub source: String,
    /// Method parameters (seed, ratio, backend id) recorded for audit.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl LabeledExample {
    pub fn new(id: impl Into<String>, text: impl Into<String>, label: SentimentLabel) -> Self {
        LabeledExample {
            id: id.into(),
            text: text.into(),
            label,
            source: "original".to_string(),
            params: BTreeMap::new(),
        }
    }
}

/// Ordered collection of examples with a domain tag and split name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub examples: Vec<LabeledExample>,
    /// "mahasent" | "goemotions" | user-defined.
    pub domain: String,
    /// "train" | "validation" | "test".
    pub split: String,
}

impl Dataset {
    pub fn new(domain: impl Into<String>, split: impl Into<String>) -> Self {
        Dataset {
            examples: Vec::new(),
            domain: domain.into(),
            split: split.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Checks the dataset invariants: unique ids, non-blank texts,
    /// registered source tags.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for ex in &self.examples {
            if !seen.insert(ex.id.as_str()) {
                return Err(Error::Precondition(format!(
                    "duplicate example id {:?}",
                    ex.id
                )));
            }
            if ex.text.trim().is_empty() {
                return Err(Error::Precondition(format!(
                    "example {:?} has empty text",
                    ex.id
                )));
            }
            if !is_registered_source(&ex.source) {
                return Err(Error::Precondition(format!(
                    "example {:?} has unregistered source tag {:?}",
                    ex.id, ex.source
                )));
            }
        }
        Ok(())
    }
}

/// On-disk dataset representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Tsv,
    Jsonl,
}

impl FileFormat {
    /// Picks the format from a file extension; anything but `.jsonl` /
    /// `.json` reads as TSV.
    pub fn from_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => FileFormat::Jsonl,
            _ => FileFormat::Tsv,
        }
    }
}

impl FromStr for FileFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(FileFormat::Tsv),
            "jsonl" => Ok(FileFormat::Jsonl),
            other => Err(Error::Config(format!(
                "unknown dataset format {other:?} (expected tsv or jsonl)"
            ))),
        }
    }
}

/// JSONL line shape shared by the reader and writer.
#[derive(Serialize, Deserialize)]
struct JsonRecord {
    text: String,
    label: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, String>>,
}

/// Loads a dataset; examples keep file order and get sequential ids
/// ("0", "1", ...). Domain and split default to "unspecified"; callers
/// that know better overwrite the fields.
pub fn load_dataset(path: &Path, format: FileFormat) -> Result<Dataset> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut dataset = Dataset::new("unspecified", "unspecified");
    match format {
        FileFormat::Tsv => load_tsv(path, &content, &mut dataset)?,
        FileFormat::Jsonl => load_jsonl(path, &content, &mut dataset)?,
    }
    dataset.validate()?;
    Ok(dataset)
}

fn parse_label(path: &Path, line_no: usize, raw: &str) -> Result<SentimentLabel> {
    let value: i64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::parse(path, line_no, format!("label {raw:?} is not an integer")))?;
    SentimentLabel::new(value)
        .map_err(|_| Error::parse(path, line_no, format!("label {value} outside {{0, 1, 2}}")))
}

fn check_source(path: &Path, line_no: usize, source: &str) -> Result<()> {
    if is_registered_source(source) {
        Ok(())
    } else {
        Err(Error::parse(
            path,
            line_no,
            format!("unregistered source tag {source:?}"),
        ))
    }
}

fn load_tsv(path: &Path, content: &str, dataset: &mut Dataset) -> Result<()> {
    let mut lines = content.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header line"))?;
    let has_source = match header.trim_end_matches('\r') {
        "text\tlabel" => false,
        "text\tlabel\tsource" => true,
        other => {
            return Err(Error::parse(
                path,
                1,
                format!("unexpected header {other:?} (expected text\\tlabel[\\tsource])"),
            ))
        }
    };
    for (idx, raw_line) in lines {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let expected = if has_source { 3 } else { 2 };
        if fields.len() != expected {
            return Err(Error::parse(
                path,
                line_no,
                format!("expected {expected} tab-separated fields, found {}", fields.len()),
            ));
        }
        let text = fields[0];
        if text.trim().is_empty() {
            return Err(Error::parse(path, line_no, "empty text field"));
        }
        let label = parse_label(path, line_no, fields[1])?;
        let mut example = LabeledExample::new(dataset.examples.len().to_string(), text, label);
        if has_source {
            check_source(path, line_no, fields[2])?;
            example.source = fields[2].to_string();
        }
        dataset.examples.push(example);
    }
    Ok(())
}

fn load_jsonl(path: &Path, content: &str, dataset: &mut Dataset) -> Result<()> {
    for (idx, raw_line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        let record: JsonRecord = serde_json::from_str(line)
            .map_err(|e| Error::parse(path, line_no, format!("invalid JSON object: {e}")))?;
        if record.text.trim().is_empty() {
            return Err(Error::parse(path, line_no, "empty text field"));
        }
        let label = SentimentLabel::new(record.label).map_err(|_| {
            Error::parse(
                path,
                line_no,
                format!("label {} outside {{0, 1, 2}}", record.label),
            )
        })?;
        let mut example = LabeledExample::new(dataset.examples.len().to_string(), record.text, label);
        if let Some(source) = record.source {
            check_source(path, line_no, &source)?;
            example.source = source;
        }
        if let Some(params) = record.params {
            example.params = params;
        }
        dataset.examples.push(example);
    }
    Ok(())
}

/// Writes a dataset so that `load_dataset` reproduces its
/// (text, label, source) sequence exactly.
///
/// TSV adds the `source` column only when some example is non-original.
/// Texts containing tabs or newlines are rejected for TSV.
pub fn write_dataset(dataset: &Dataset, path: &Path, format: FileFormat) -> Result<()> {
    let mut out = String::new();
    match format {
        FileFormat::Tsv => {
            let with_source = dataset.examples.iter().any(|e| e.source != "original");
            out.push_str(if with_source {
                "text\tlabel\tsource\n"
            } else {
                "text\tlabel\n"
            });
            for ex in &dataset.examples {
                if ex.text.contains(['\t', '\n', '\r']) {
                    return Err(Error::TsvUnrepresentable { id: ex.id.clone() });
                }
                out.push_str(&ex.text);
                out.push('\t');
                out.push_str(&ex.label.to_string());
                if with_source {
                    out.push('\t');
                    out.push_str(&ex.source);
                }
                out.push('\n');
            }
        }
        FileFormat::Jsonl => {
            for ex in &dataset.examples {
                let record = JsonRecord {
                    text: ex.text.clone(),
                    label: i64::from(ex.label.value()),
                    source: Some(ex.source.clone()),
                    params: if ex.params.is_empty() {
                        None
                    } else {
                        Some(ex.params.clone())
                    },
                };
                // BTreeMap params keep key order stable, so serialization
                // is byte-deterministic.
                out.push_str(&serde_json::to_string(&record).expect("record serializes"));
                out.push('\n');
            }
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Total map from fine-grained emotion labels to the 3-point scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMapping {
    table: BTreeMap<String, SentimentLabel>,
}

impl LabelMapping {
    pub fn new(table: BTreeMap<String, SentimentLabel>) -> Self {
        LabelMapping { table }
    }

    pub fn get(&self, fine_label: &str) -> Option<SentimentLabel> {
        self.table.get(fine_label).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Loads a two-column TSV `fine_label\tsentiment_code` (no header).
    pub fn load(path: &Path) -> Result<Self> {
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut table = BTreeMap::new();
        for (idx, raw_line) in content.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let (name, code) = line.split_once('\t').ok_or_else(|| {
                Error::parse(path, line_no, "expected fine_label\\tsentiment_code")
            })?;
            let label = parse_label(path, line_no, code)?;
            table.insert(name.to_string(), label);
        }
        Ok(LabelMapping::new(table))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for (name, label) in &self.table {
            out.push_str(name);
            out.push('\t');
            out.push_str(&label.to_string());
            out.push('\n');
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }

    /// Default 28 → 3 grouping for the GoEmotions label set.
    ///
    /// The grouping follows the emotion families of the original label
    /// taxonomy, with the four ambiguous emotions (confusion, curiosity,
    /// realization, surprise) assigned to neutral. This default is a
    /// documented stand-in, not ground truth; override it with a mapping
    /// file when the real table is known.
    pub fn goemotions_default() -> Self {
        let positive = [
            "admiration",
            "amusement",
            "approval",
            "caring",
            "desire",
            "excitement",
            "gratitude",
            "joy",
            "love",
            "optimism",
            "pride",
            "relief",
        ];
        let negative = [
            "anger",
            "annoyance",
            "disappointment",
            "disapproval",
            "disgust",
            "embarrassment",
            "fear",
            "grief",
            "nervousness",
            "remorse",
            "sadness",
        ];
        let neutral = ["confusion", "curiosity", "realization", "surprise", "neutral"];
        let mut table = BTreeMap::new();
        for name in positive {
            table.insert(name.to_string(), SentimentLabel::POSITIVE);
        }
        for name in negative {
            table.insert(name.to_string(), SentimentLabel::NEGATIVE);
        }
        for name in neutral {
            table.insert(name.to_string(), SentimentLabel::NEUTRAL);
        }
        LabelMapping::new(table)
    }
}

/// Maps fine-grained labels through `mapping`, preserving text and order.
/// Fails up front, naming every label the mapping lacks.
pub fn map_labels(raw: &[(String, String)], mapping: &LabelMapping) -> Result<Dataset> {
    let missing: Vec<String> = raw
        .iter()
        .map(|(_, fine)| fine)
        .filter(|fine| mapping.get(fine).is_none())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnmappedLabels { names: missing });
    }
    let mut dataset = Dataset::new("unspecified", "unspecified");
    for (idx, (text, fine)) in raw.iter().enumerate() {
        let label = mapping.get(fine).expect("checked above");
        dataset
            .examples
            .push(LabeledExample::new(idx.to_string(), text.clone(), label));
    }
    Ok(dataset)
}
