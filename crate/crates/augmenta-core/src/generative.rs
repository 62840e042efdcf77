//! Label generation and sentence-completion augmentation: classifier
//! pseudo-labeling of unlabeled text, single-text label generation, and
//! building a dataset of label-conditioned completions of halved
//! sentences.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::backends::{ClassifierBackend, CompleterBackend};
use crate::corpus::{Dataset, LabeledExample, SentimentLabel};
use crate::error::{Error, Result};
use crate::exec::ExecPolicy;
use crate::textprep;

/// One pseudo-labeled text.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoLabelRecord {
    pub text: String,
    pub label: SentimentLabel,
    /// Classifier confidence when the backend reports one.
    pub confidence: Option<f64>,
    /// "bert-pseudo" or "gpt-label".
    pub labeler: String,
}

/// One label-conditioned completion of a halved sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletionRecord {
    pub prompt: String,
    pub label: SentimentLabel,
    pub completion: String,
    pub generator: String,
}

/// Items dropped because a backend call failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenSummary {
    pub generated: usize,
    pub skipped: usize,
}

/// Labels each text with the classifier's prediction. Inputs are expected
/// to be preprocessed already; blank texts and classifier failures are
/// skipped with a warning and counted. Output order follows input order.
pub fn generate_pseudo_labels(
    texts: &[String],
    clf: &dyn ClassifierBackend,
    policy: &ExecPolicy,
) -> (Vec<PseudoLabelRecord>, GenSummary) {
    let results = policy.map_indexed(texts, clf.concurrency_safe(), |_, text| {
        if text.trim().is_empty() {
            return Err(Error::Precondition("blank text".into()));
        }
        clf.predict(text)
    });
    let mut records = Vec::new();
    let mut summary = GenSummary::default();
    for (i, (text, result)) in texts.iter().zip(results).enumerate() {
        match result {
            Ok(label) => {
                records.push(PseudoLabelRecord {
                    text: text.clone(),
                    label,
                    confidence: None,
                    labeler: "bert-pseudo".to_string(),
                });
                summary.generated += 1;
            }
            Err(err) => {
                log::warn!("skipping text {i}: {err}");
                summary.skipped += 1;
            }
        }
    }
    (records, summary)
}

/// Packs pseudo-label records into a dataset with source tag
/// "bert-pseudo" and sequential ids.
pub fn records_to_dataset(records: &[PseudoLabelRecord], domain: &str) -> Dataset {
    let mut dataset = Dataset::new(domain, "unspecified");
    for (i, record) in records.iter().enumerate() {
        let mut example = LabeledExample::new(i.to_string(), record.text.clone(), record.label);
        example.source = "bert-pseudo".to_string();
        dataset.examples.push(example);
    }
    dataset
}

/// Predicts a label for one text with a generative-model-backed
/// classifier. Same contract as pseudo-labeling; kept separate because the
/// two enter the pipeline at different points.
pub fn gpt_label(text: &str, clf: &dyn ClassifierBackend) -> Result<SentimentLabel> {
    if text.trim().is_empty() {
        return Err(Error::Precondition("cannot label empty text".into()));
    }
    clf.predict(text)
}

/// First ⌈W/2⌉ words of a W-word sentence, single-space joined.
pub fn halve_sentence(text: &str) -> Result<String> {
    let tokenized = textprep::tokenize(text);
    if tokenized.words.is_empty() {
        return Err(Error::Precondition("cannot halve empty text".into()));
    }
    let keep = tokenized.words.len().div_ceil(2);
    textprep::detokenize(&tokenized.words[..keep])
}

/// Completes a halved sentence consistently with its label.
pub fn complete_sentence(
    prompt: &str,
    label: SentimentLabel,
    gen: &dyn CompleterBackend,
) -> Result<String> {
    if prompt.trim().is_empty() {
        return Err(Error::Precondition("cannot complete empty prompt".into()));
    }
    let completion = gen.complete(prompt, label)?;
    if completion.trim().is_empty() {
        return Err(Error::BackendContract(
            "completer returned empty text".into(),
        ));
    }
    Ok(completion)
}

/// Builds a dataset holding every original example plus one completed
/// example per original: the prompt is the first half of the text, the
/// completion keeps the original's label, source tag "gpt-completion".
/// Size is 2N minus per-example generator failures, which are skipped and
/// counted.
pub fn build_completion_augmented_dataset(
    dataset: &Dataset,
    gen: &dyn CompleterBackend,
    policy: &ExecPolicy,
) -> Result<(Dataset, GenSummary)> {
    if dataset.is_empty() {
        return Err(Error::Precondition(
            "completion augmentation needs a non-empty dataset".into(),
        ));
    }
    let results = policy.map_indexed(&dataset.examples, gen.concurrency_safe(), |_, example| {
        let prompt = halve_sentence(&example.text)?;
        let completion = complete_sentence(&prompt, example.label, gen)?;
        Ok::<CompletionRecord, Error>(CompletionRecord {
            prompt,
            label: example.label,
            completion,
            generator: "gpt-completion".to_string(),
        })
    });

    let mut output = Dataset::new(dataset.domain.clone(), dataset.split.clone());
    output.examples.extend(dataset.examples.iter().cloned());
    let mut summary = GenSummary::default();
    for (example, result) in dataset.examples.iter().zip(results) {
        match result {
            Ok(record) => {
                let mut augmented = LabeledExample::new(
                    format!("{}-gpt-completion", example.id),
                    record.completion,
                    record.label,
                );
                augmented.source = record.generator;
                augmented
                    .params
                    .insert("prompt".to_string(), record.prompt);
                output.examples.push(augmented);
                summary.generated += 1;
            }
            Err(err) => {
                log::warn!("skipping example {}: {err}", example.id);
                summary.skipped += 1;
            }
        }
    }
    Ok((output, summary))
}

/// One stage of the out-of-process fine-tuning protocol. Training runs on
/// GPU infrastructure outside this toolkit; the manifest records which
/// dataset to train on and which checkpoint to start from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingStage {
    pub stage: String,
    pub dataset_path: String,
    pub base_checkpoint_tag: String,
}

/// Writes the training protocol as JSONL, one stage per line.
pub fn write_training_manifest(stages: &[TrainingStage], path: &Path) -> Result<()> {
    let mut out = String::new();
    for stage in stages {
        out.push_str(&serde_json::to_string(stage).expect("stage serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
