//! Property tests for the library-wide invariants: idempotent cleaning,
//! mask-count arithmetic, order independence of parallel masking, label
//! preservation, translation round-trips, and evaluation accounting.

use std::collections::BTreeMap;

use augmenta_core::augmentors::{
    augment_dataset, back_translate, ner_mask_parallel, ner_mask_sequential,
    random_mask_parallel, random_mask_sequential, round_half_up, select_mask_indices,
    AugmentMethod, AugmentationConfig,
};
use augmenta_core::backends::mocks::{
    ConstantFillMask, DictionaryTranslator, EchoFillMask, IdentityCompleter, IdentityParaphraser,
    LexiconNer,
};
use augmenta_core::backends::{AnyBackend, BackendSet, ClassifierBackend};
use augmenta_core::corpus::{
    load_dataset, write_dataset, Dataset, FileFormat, LabeledExample, SentimentLabel,
};
use augmenta_core::error::Error;
use augmenta_core::evalharness::{
    evaluate, parse_report_csv, render_report, ConfusionMatrix, EvaluationReport, ReportEntry,
    ReportFormat,
};
use augmenta_core::exec::ExecPolicy;
use augmenta_core::generative::{build_completion_augmented_dataset, halve_sentence};
use augmenta_core::textprep::{clean_text, detokenize, tokenize};
use proptest::prelude::*;
use std::sync::Arc;

// ---------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------

/// A short word of Devanagari letters (from the consonant/vowel range).
fn devanagari_word() -> impl Strategy<Value = String> {
    proptest::collection::vec(0x0905u32..=0x0939, 1..6)
        .prop_map(|codes| codes.into_iter().filter_map(char::from_u32).collect())
}

fn devanagari_sentence(max_words: usize) -> impl Strategy<Value = Vec<String>> {
    proptest::collection::vec(devanagari_word(), 1..=max_words)
}

fn label_strategy() -> impl Strategy<Value = SentimentLabel> {
    (0i64..=2).prop_map(|v| SentimentLabel::new(v).unwrap())
}

fn small_dataset(max: usize) -> impl Strategy<Value = Dataset> {
    proptest::collection::vec((devanagari_sentence(8), label_strategy()), 1..=max).prop_map(
        |rows| {
            let mut dataset = Dataset::new("mahasent", "train");
            for (i, (words, label)) in rows.into_iter().enumerate() {
                dataset
                    .examples
                    .push(LabeledExample::new(i.to_string(), words.join(" "), label));
            }
            dataset
        },
    )
}

/// A backend set covering every role the six augmentation methods need.
fn full_mock_set() -> BackendSet {
    let mut set = BackendSet::default();
    set.insert(AnyBackend::FillMask(Arc::new(EchoFillMask::new())));
    set.insert(AnyBackend::Translator(Arc::new(
        DictionaryTranslator::new(BTreeMap::new(), "mr", "en", true).unwrap(),
    )));
    set.insert(AnyBackend::Paraphraser(Arc::new(
        IdentityParaphraser::new(),
    )));
    let mut lexicon = BTreeMap::new();
    lexicon.insert("कखगघङ".to_string(), "Person".to_string());
    set.insert(AnyBackend::Ner(Arc::new(LexiconNer::new(lexicon))));
    set
}

// ---------------------------------------------------------------------
// Text preprocessing
// ---------------------------------------------------------------------

proptest! {
    #[test]
    fn cleaning_is_idempotent_and_alphabet_closed(text in ".*") {
        let once = clean_text(&text);
        prop_assert_eq!(&clean_text(&once), &once);
        for c in once.chars() {
            prop_assert!(
                ('\u{0900}'..='\u{097F}').contains(&c) || c.is_ascii_digit() || c == ' ',
                "character {c:?} escaped the cleaning alphabet"
            );
        }
        // Single spaces only: no run of two, no leading/trailing.
        prop_assert!(!once.contains("  "));
        prop_assert_eq!(&once.trim(), &once.as_str());
    }

    #[test]
    fn detokenize_inverts_tokenize_on_clean_strings(words in devanagari_sentence(12)) {
        let sentence = words.join(" ");
        let tokenized = tokenize(&sentence);
        prop_assert_eq!(&tokenized.words, &words);
        prop_assert_eq!(detokenize(&tokenized.words).unwrap(), sentence);
    }
}

// ---------------------------------------------------------------------
// Corpus round-trips
// ---------------------------------------------------------------------

proptest! {
    #[test]
    fn tsv_round_trip_preserves_examples(dataset in small_dataset(12)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.tsv");
        write_dataset(&dataset, &path, FileFormat::Tsv).unwrap();
        let loaded = load_dataset(&path, FileFormat::Tsv).unwrap();
        prop_assert_eq!(loaded.len(), dataset.len());
        for (a, b) in dataset.examples.iter().zip(&loaded.examples) {
            prop_assert_eq!(&a.text, &b.text);
            prop_assert_eq!(a.label, b.label);
            prop_assert_eq!(&a.source, &b.source);
        }
    }

    #[test]
    fn jsonl_round_trip_preserves_examples_and_params(
        dataset in small_dataset(12),
        param in devanagari_word(),
    ) {
        let mut dataset = dataset;
        dataset.examples[0].source = "paraphrase".to_string();
        dataset.examples[0].params.insert("note".to_string(), param);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.jsonl");
        write_dataset(&dataset, &path, FileFormat::Jsonl).unwrap();
        let loaded = load_dataset(&path, FileFormat::Jsonl).unwrap();
        prop_assert_eq!(loaded.len(), dataset.len());
        for (a, b) in dataset.examples.iter().zip(&loaded.examples) {
            prop_assert_eq!(&a.text, &b.text);
            prop_assert_eq!(a.label, b.label);
            prop_assert_eq!(&a.source, &b.source);
            prop_assert_eq!(&a.params, &b.params);
        }
    }
}

// ---------------------------------------------------------------------
// Mask planning and replacement
// ---------------------------------------------------------------------

proptest! {
    #[test]
    fn mask_plans_obey_count_law_and_are_valid(
        word_count in 0usize..=300,
        ratio in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let plan = select_mask_indices(word_count, ratio, seed).unwrap();
        prop_assert_eq!(plan.indices.len(), round_half_up(ratio * word_count as f64));
        plan.validate_for(word_count).unwrap();
        let again = select_mask_indices(word_count, ratio, seed).unwrap();
        prop_assert_eq!(plan, again);
    }

    #[test]
    fn echo_masking_is_identity(words in devanagari_sentence(40), seed in any::<u64>()) {
        let plan = select_mask_indices(words.len(), 0.4, seed).unwrap();
        let echo = EchoFillMask::new();
        prop_assert_eq!(&random_mask_sequential(&words, &plan, &echo).unwrap(), &words);
        prop_assert_eq!(&random_mask_parallel(&words, &plan, &echo).unwrap(), &words);
    }

    #[test]
    fn parallel_masking_ignores_plan_order(
        words in devanagari_sentence(25),
        seed in any::<u64>(),
        rot in 0usize..25,
    ) {
        let plan = select_mask_indices(words.len(), 0.6, seed).unwrap();
        let mut rotated = plan.clone();
        if !rotated.indices.is_empty() {
            let k = rot % rotated.indices.len();
            rotated.indices.rotate_left(k);
            rotated.indices.reverse();
        }
        let fm = ConstantFillMask::new("बदल", true).unwrap();
        prop_assert_eq!(
            random_mask_parallel(&words, &plan, &fm).unwrap(),
            random_mask_parallel(&words, &rotated, &fm).unwrap()
        );
    }

    #[test]
    fn masking_touches_only_planned_indices(
        words in devanagari_sentence(25),
        seed in any::<u64>(),
    ) {
        let plan = select_mask_indices(words.len(), 0.4, seed).unwrap();
        let fm = ConstantFillMask::new("बदल", true).unwrap();
        let seq = random_mask_sequential(&words, &plan, &fm).unwrap();
        let par = random_mask_parallel(&words, &plan, &fm).unwrap();
        for i in 0..words.len() {
            if !plan.indices.contains(&i) {
                prop_assert_eq!(&seq[i], &words[i]);
                prop_assert_eq!(&par[i], &words[i]);
            }
        }
    }
}

// ---------------------------------------------------------------------
// Entity masking
// ---------------------------------------------------------------------

proptest! {
    /// Words tagged `Other` — and untagged words — are never replaced, in
    /// either entity-masking mode, for arbitrary lexicon taggings.
    #[test]
    fn other_category_words_are_never_modified(
        words in devanagari_sentence(20),
        categories in proptest::collection::vec(0u8..4, 20),
    ) {
        let mut table = BTreeMap::new();
        for (word, &cat) in words.iter().zip(&categories) {
            let category = match cat {
                0 => "Person",
                1 => "Location",
                2 => "Other",
                _ => continue, // untagged
            };
            table.insert(word.clone(), category.to_string());
        }
        let ner = LexiconNer::new(table.clone());
        let fm = ConstantFillMask::new("बदल", true).unwrap();
        for result in [
            ner_mask_sequential(&words, &ner, &fm).unwrap(),
            ner_mask_parallel(&words, &ner, &fm).unwrap(),
        ] {
            prop_assert_eq!(result.len(), words.len());
            for (i, word) in words.iter().enumerate() {
                match table.get(word).map(String::as_str) {
                    Some("Other") | None => prop_assert_eq!(&result[i], word),
                    Some(_) => prop_assert_eq!(&result[i], "बदल"),
                }
            }
        }
    }
}

// ---------------------------------------------------------------------
// Translation
// ---------------------------------------------------------------------

proptest! {
    /// An invertible word table composed with its own inverse is the
    /// identity, whether or not the sentence's words appear in the table.
    #[test]
    fn invertible_back_translation_is_identity(
        words in devanagari_sentence(15),
        table_size in 0usize..20,
    ) {
        let table: BTreeMap<String, String> = (0..table_size)
            .map(|i| (format!("मूळ{i}"), format!("pivot{i}")))
            .collect();
        let tr = DictionaryTranslator::new(table, "mr", "en", true).unwrap();
        let mixed: Vec<String> = words
            .iter()
            .enumerate()
            .map(|(i, w)| if i % 2 == 0 { format!("मूळ{}", i % 25) } else { w.clone() })
            .collect();
        let sentence = mixed.join(" ");
        prop_assert_eq!(back_translate(&sentence, &tr, "en").unwrap(), sentence);
    }
}

// ---------------------------------------------------------------------
// Sentence halving and completion
// ---------------------------------------------------------------------

proptest! {
    #[test]
    fn halving_keeps_the_first_half_rounded_up(words in devanagari_sentence(50)) {
        let half = halve_sentence(&words.join(" ")).unwrap();
        let kept = tokenize(&half).words;
        prop_assert_eq!(kept.len(), words.len().div_ceil(2));
        prop_assert_eq!(&kept[..], &words[..kept.len()]);
    }

    #[test]
    fn completion_dataset_doubles_and_preserves_labels(dataset in small_dataset(20)) {
        let n = dataset.len();
        let gen = IdentityCompleter::new();
        let (output, summary) =
            build_completion_augmented_dataset(&dataset, &gen, &ExecPolicy::serial()).unwrap();
        prop_assert_eq!(output.len(), 2 * n);
        prop_assert_eq!(summary.generated, n);
        prop_assert_eq!(summary.skipped, 0);
        for (original, completed) in dataset.examples.iter().zip(&output.examples[n..]) {
            prop_assert_eq!(completed.label, original.label);
            prop_assert_eq!(&completed.source, "gpt-completion");
        }
    }
}

// ---------------------------------------------------------------------
// Label preservation across every augmentation method
// ---------------------------------------------------------------------

proptest! {
    #[test]
    fn every_augmentor_preserves_labels(
        dataset in small_dataset(10),
        seed in any::<u64>(),
        method_index in 0usize..AugmentMethod::ALL.len(),
    ) {
        let method = AugmentMethod::ALL[method_index];
        let config = AugmentationConfig {
            method,
            ratio: 0.4,
            seed,
            pivot_lang: "en".to_string(),
            keep_original: true,
        };
        let backends = full_mock_set();
        let (output, summary) =
            augment_dataset(&dataset, &config, &backends, &ExecPolicy::serial()).unwrap();
        prop_assert_eq!(summary.skipped, 0);
        let by_id: BTreeMap<&str, SentimentLabel> = dataset
            .examples
            .iter()
            .map(|e| (e.id.as_str(), e.label))
            .collect();
        for example in &output.examples {
            if example.source == "original" {
                continue;
            }
            let original_id = example
                .id
                .strip_suffix(&format!("-{}", method.tag()))
                .expect("augmented id carries the method tag");
            prop_assert_eq!(example.label, by_id[original_id]);
        }
    }
}

// ---------------------------------------------------------------------
// Evaluation accounting
// ---------------------------------------------------------------------

/// Classifier that reads the intended prediction out of a per-text table
/// and fails on texts marked as poison.
struct TableClassifier {
    table: BTreeMap<String, SentimentLabel>,
}

impl ClassifierBackend for TableClassifier {
    fn predict(&self, text: &str) -> augmenta_core::Result<SentimentLabel> {
        self.table
            .get(text)
            .copied()
            .ok_or_else(|| Error::Backend(format!("no prediction for {text:?}")))
    }
}

proptest! {
    /// Shuffling the dataset never changes the confusion matrix, and
    /// evaluated + skipped always equals the dataset size.
    #[test]
    fn evaluation_is_order_free_and_conserves_counts(
        rows in proptest::collection::vec(
            (devanagari_sentence(5), label_strategy(), label_strategy(), any::<bool>()),
            1..25,
        ),
        rotation in 0usize..25,
    ) {
        let mut dataset = Dataset::new("mahasent", "test");
        let mut table = BTreeMap::new();
        let mut any_prediction = false;
        for (i, (words, gold, predicted, poison)) in rows.iter().enumerate() {
            let text = format!("{i} {}", words.join(" "));
            dataset.examples.push(LabeledExample::new(i.to_string(), text.clone(), *gold));
            if !poison {
                table.insert(text, *predicted);
                any_prediction = true;
            }
        }
        prop_assume!(any_prediction);
        let clf = TableClassifier { table };
        let policy = ExecPolicy::serial();
        let outcome = evaluate(&clf, &dataset, &policy).unwrap();

        prop_assert_eq!(outcome.evaluated + outcome.skipped, dataset.len() as u64);
        prop_assert_eq!(outcome.confusion.total(), outcome.evaluated);

        let mut shuffled = dataset.clone();
        let len = shuffled.len();
        shuffled.examples.rotate_left(rotation % len);
        let again = evaluate(&clf, &shuffled, &policy).unwrap();
        prop_assert_eq!(outcome.confusion, again.confusion);
        prop_assert_eq!(outcome.skipped, again.skipped);
    }

    /// Rendering a report to CSV and parsing it back reproduces the
    /// confusion counts exactly and the accuracy to the 4-decimal
    /// precision the format carries, for arbitrary matrices.
    #[test]
    fn csv_rendering_round_trips_accuracies(
        cells in proptest::collection::vec(0u64..2000, 9),
        skipped in 0u64..10,
    ) {
        let mut confusion = ConfusionMatrix::default();
        for gold in 0..3 {
            for predicted in 0..3 {
                confusion.counts[gold][predicted] = cells[gold * 3 + predicted];
            }
        }
        let entry = ReportEntry {
            model_tag: "model".to_string(),
            train_domain: "mahasent".to_string(),
            eval_domain: "goemotions".to_string(),
            split: "test".to_string(),
            accuracy: confusion.accuracy(),
            confusion,
            skipped,
        };
        let report = EvaluationReport { entries: vec![entry] };
        let rendered = render_report(&report, ReportFormat::Csv).unwrap();
        let parsed = parse_report_csv(std::path::Path::new("roundtrip.csv"), &rendered).unwrap();
        prop_assert_eq!(parsed.entries.len(), 1);
        prop_assert_eq!(parsed.entries[0].confusion, report.entries[0].confusion);
        prop_assert_eq!(parsed.entries[0].skipped, skipped);
        match (report.entries[0].accuracy, parsed.entries[0].accuracy) {
            (Some(a), Some(b)) => {
                prop_assert_eq!(format!("{a:.4}"), format!("{b:.4}"));
            }
            (a, b) => prop_assert_eq!(a, b),
        }
    }
}
