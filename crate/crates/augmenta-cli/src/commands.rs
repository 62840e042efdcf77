//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use augmenta_core::augmentors::{augment_dataset, AugmentMethod, AugmentationConfig};
use augmenta_core::backends::{load_backend_config, load_backend_set};
use augmenta_core::corpus::{load_dataset, write_dataset, Dataset, FileFormat};
use augmenta_core::error::{Error, Result};
use augmenta_core::evalharness::{
    self, render_report, EvaluationReport, ReportEntry, ReportFormat,
};
use augmenta_core::exec::ExecPolicy;
use augmenta_core::generative::{
    build_completion_augmented_dataset, generate_pseudo_labels, records_to_dataset,
    write_training_manifest, TrainingStage,
};
use augmenta_core::textprep::{clean_text_with, CleanOptions};

use crate::manifest::{write_manifests, RunManifest};
use crate::{AugmentArgs, CompleteArgs, EvaluateArgs, PreprocessArgs, PseudolabelArgs, ReportArgs};

fn path_str(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

fn base_config(jobs: Option<usize>) -> BTreeMap<String, String> {
    let mut config = BTreeMap::new();
    if let Some(jobs) = jobs {
        config.insert("jobs".to_string(), jobs.to_string());
    }
    config
}

pub(crate) fn preprocess(
    args: &PreprocessArgs,
    jobs: Option<usize>,
    policy: &ExecPolicy,
) -> Result<()> {
    let dataset = load_dataset(&args.input, FileFormat::from_path(&args.input))?;
    let options = CleanOptions {
        drop_hashtag_words: args.drop_hashtag_words,
    };
    let cleaned = policy.map_indexed(&dataset.examples, true, |_, example| {
        clean_text_with(&example.text, options)
    });
    let mut output = Dataset::new(dataset.domain.clone(), dataset.split.clone());
    let mut dropped = 0usize;
    for (example, text) in dataset.examples.iter().zip(cleaned) {
        if text.is_empty() {
            log::warn!("dropping example {}: text cleaned to nothing", example.id);
            dropped += 1;
            continue;
        }
        let mut kept = example.clone();
        kept.text = text;
        output.examples.push(kept);
    }
    write_dataset(&output, &args.out, FileFormat::from_path(&args.out))?;
    println!("kept={} dropped={}", output.len(), dropped);

    let mut config = base_config(jobs);
    config.insert("in".to_string(), path_str(&args.input));
    config.insert("out".to_string(), path_str(&args.out));
    config.insert(
        "drop-hashtag-words".to_string(),
        args.drop_hashtag_words.to_string(),
    );
    write_manifests(&RunManifest::new(
        "preprocess",
        config,
        None,
        vec![path_str(&args.input)],
        vec![path_str(&args.out)],
    ))
}

pub(crate) fn augment(args: &AugmentArgs, jobs: Option<usize>, policy: &ExecPolicy) -> Result<()> {
    let method: AugmentMethod = args.method.parse()?;
    let backends = load_backend_set(&args.backend_config)?;
    let dataset = load_dataset(&args.input, FileFormat::from_path(&args.input))?;
    let config = AugmentationConfig {
        method,
        ratio: args.ratio,
        seed: args.seed,
        pivot_lang: args.pivot.clone(),
        keep_original: args.keep_original(),
    };
    let (output, summary) = augment_dataset(&dataset, &config, &backends, policy)?;
    write_dataset(&output, &args.out, FileFormat::from_path(&args.out))?;
    println!("augmented={} skipped={}", summary.augmented, summary.skipped);

    let mut manifest_config = base_config(jobs);
    manifest_config.insert("in".to_string(), path_str(&args.input));
    manifest_config.insert("out".to_string(), path_str(&args.out));
    manifest_config.insert("method".to_string(), method.tag().to_string());
    manifest_config.insert("ratio".to_string(), args.ratio.to_string());
    manifest_config.insert("seed".to_string(), args.seed.to_string());
    manifest_config.insert("pivot".to_string(), args.pivot.clone());
    manifest_config.insert(
        "keep-original".to_string(),
        args.keep_original().to_string(),
    );
    manifest_config.insert(
        "backend-config".to_string(),
        path_str(&args.backend_config),
    );
    write_manifests(&RunManifest::new(
        "augment",
        manifest_config,
        Some(args.seed),
        vec![path_str(&args.input), path_str(&args.backend_config)],
        vec![path_str(&args.out)],
    ))
}

pub(crate) fn pseudolabel(
    args: &PseudolabelArgs,
    jobs: Option<usize>,
    policy: &ExecPolicy,
) -> Result<()> {
    let classifier = load_backend_config(&args.classifier_config)?.into_classifier()?;
    let raw = fs::read_to_string(&args.input).map_err(|e| Error::io(&args.input, e))?;
    let options = CleanOptions::default();
    let mut blank = 0usize;
    let texts: Vec<String> = raw
        .lines()
        .map(|line| clean_text_with(line, options))
        .filter(|text| {
            let keep = !text.is_empty();
            if !keep {
                blank += 1;
            }
            keep
        })
        .collect();
    let (records, summary) = generate_pseudo_labels(&texts, classifier.as_ref(), policy);
    let dataset = records_to_dataset(&records, "unspecified");
    write_dataset(&dataset, &args.out, FileFormat::from_path(&args.out))?;
    println!(
        "labeled={} skipped={}",
        summary.generated,
        summary.skipped + blank
    );

    let mut outputs = vec![path_str(&args.out)];
    if let Some(train_manifest) = &args.train_manifest {
        write_training_manifest(
            &[TrainingStage {
                stage: "finetune-on-pseudo-labels".to_string(),
                dataset_path: path_str(&args.out),
                base_checkpoint_tag: "in-domain-finetuned".to_string(),
            }],
            train_manifest,
        )?;
        outputs.push(path_str(train_manifest));
    }

    let mut config = base_config(jobs);
    config.insert("in".to_string(), path_str(&args.input));
    config.insert("out".to_string(), path_str(&args.out));
    config.insert(
        "classifier-config".to_string(),
        path_str(&args.classifier_config),
    );
    if let Some(train_manifest) = &args.train_manifest {
        config.insert("train-manifest".to_string(), path_str(train_manifest));
    }
    write_manifests(&RunManifest::new(
        "pseudolabel",
        config,
        None,
        vec![path_str(&args.input), path_str(&args.classifier_config)],
        outputs,
    ))
}

pub(crate) fn complete(
    args: &CompleteArgs,
    jobs: Option<usize>,
    policy: &ExecPolicy,
) -> Result<()> {
    let generator = load_backend_config(&args.generator_config)?.into_completer()?;
    let dataset = load_dataset(&args.input, FileFormat::from_path(&args.input))?;
    let (output, summary) =
        build_completion_augmented_dataset(&dataset, generator.as_ref(), policy)?;
    write_dataset(&output, &args.out, FileFormat::from_path(&args.out))?;
    println!("generated={} skipped={}", summary.generated, summary.skipped);

    let mut config = base_config(jobs);
    config.insert("in".to_string(), path_str(&args.input));
    config.insert("out".to_string(), path_str(&args.out));
    config.insert(
        "generator-config".to_string(),
        path_str(&args.generator_config),
    );
    write_manifests(&RunManifest::new(
        "complete",
        config,
        None,
        vec![path_str(&args.input), path_str(&args.generator_config)],
        vec![path_str(&args.out)],
    ))
}

pub(crate) fn evaluate(
    args: &EvaluateArgs,
    jobs: Option<usize>,
    policy: &ExecPolicy,
) -> Result<()> {
    let format: ReportFormat = args.format.parse()?;
    let mut gold = load_dataset(&args.gold, FileFormat::from_path(&args.gold))?;
    gold.domain = args.eval_domain.clone();
    gold.split = args.split.clone();

    let outcome = match (&args.classifier_config, &args.predictions) {
        (Some(config_path), None) => {
            let classifier = load_backend_config(config_path)?.into_classifier()?;
            evalharness::evaluate(classifier.as_ref(), &gold, policy)?
        }
        (None, Some(predictions_path)) => {
            let predictions = evalharness::load_predictions(predictions_path)?;
            evalharness::evaluate_predictions(&gold, &predictions)?
        }
        _ => {
            return Err(Error::Config(
                "exactly one of --classifier-config and --predictions is required".into(),
            ))
        }
    };
    let report = EvaluationReport {
        entries: vec![ReportEntry::from_outcome(
            args.model_tag.clone(),
            args.train_domain.clone(),
            args.eval_domain.clone(),
            args.split.clone(),
            &outcome,
        )],
    };
    let rendered = render_report(&report, format)?;
    fs::write(&args.report, rendered).map_err(|e| Error::io(&args.report, e))?;
    println!(
        "accuracy={:.4} evaluated={} skipped={}",
        outcome.accuracy, outcome.evaluated, outcome.skipped
    );

    let mut config = base_config(jobs);
    config.insert("gold".to_string(), path_str(&args.gold));
    config.insert("report".to_string(), path_str(&args.report));
    config.insert("format".to_string(), args.format.clone());
    config.insert("model-tag".to_string(), args.model_tag.clone());
    config.insert("train-domain".to_string(), args.train_domain.clone());
    config.insert("eval-domain".to_string(), args.eval_domain.clone());
    config.insert("split".to_string(), args.split.clone());
    let mut inputs = vec![path_str(&args.gold)];
    if let Some(path) = &args.classifier_config {
        config.insert("classifier-config".to_string(), path_str(path));
        inputs.push(path_str(path));
    }
    if let Some(path) = &args.predictions {
        config.insert("predictions".to_string(), path_str(path));
        inputs.push(path_str(path));
    }
    write_manifests(&RunManifest::new(
        "evaluate",
        config,
        None,
        inputs,
        vec![path_str(&args.report)],
    ))
}

pub(crate) fn report(args: &ReportArgs, jobs: Option<usize>) -> Result<()> {
    let mut reports = Vec::new();
    for path in &args.inputs {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        reports.push(evalharness::parse_report_csv(path, &text)?);
    }
    let merged = evalharness::merge_reports(reports)?;
    let rendered = render_report(&merged, ReportFormat::Markdown)?;
    fs::write(&args.out, rendered).map_err(|e| Error::io(&args.out, e))?;
    println!("cells={}", merged.entries.len());

    let mut config = base_config(jobs);
    config.insert("out".to_string(), path_str(&args.out));
    write_manifests(&RunManifest::new(
        "report",
        config,
        None,
        args.inputs.iter().map(|p| path_str(p)).collect(),
        vec![path_str(&args.out)],
    ))
}

/// Reconstructs the argv a manifest describes. Inputs come back from the
/// config map except for `report`, whose input list lives in
/// `manifest.inputs`.
pub(crate) fn manifest_argv(manifest: &RunManifest) -> Result<Vec<String>> {
    const SUBCOMMANDS: [&str; 6] = [
        "preprocess",
        "augment",
        "pseudolabel",
        "complete",
        "evaluate",
        "report",
    ];
    if !SUBCOMMANDS.contains(&manifest.subcommand.as_str()) {
        return Err(Error::Config(format!(
            "manifest names unknown subcommand {:?}",
            manifest.subcommand
        )));
    }
    let mut argv = vec!["augmenta".to_string(), manifest.subcommand.clone()];
    for (key, value) in &manifest.config {
        match key.as_str() {
            "keep-original" => argv.push(if value == "true" {
                "--keep-original".to_string()
            } else {
                "--no-keep-original".to_string()
            }),
            "drop-hashtag-words" => {
                if value == "true" {
                    argv.push("--drop-hashtag-words".to_string());
                }
            }
            _ => {
                argv.push(format!("--{key}"));
                argv.push(value.clone());
            }
        }
    }
    if manifest.subcommand == "report" {
        for input in &manifest.inputs {
            argv.push("--in".to_string());
            argv.push(input.clone());
        }
    }
    Ok(argv)
}
