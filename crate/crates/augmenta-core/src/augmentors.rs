//! Sentence-level augmentation: back-translation, paraphrasing, random
//! masking (sequential and parallel), named-entity masking (sequential and
//! parallel), and the dataset-level wrapper that applies one method to a
//! whole corpus.
//!
//! Sequential masking predicts each replacement against the word list *as
//! already modified by earlier replacements*; parallel masking predicts
//! every replacement against the original list and applies them all at
//! once. The two coincide exactly when predictions don't interact.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::backends::{
    validate_spans, BackendSet, FillMaskBackend, NerBackend, ParaphraserBackend,
    TranslatorBackend, DEFAULT_PIVOT_LANG, DEFAULT_SOURCE_LANG, OTHER_CATEGORY,
};
use crate::corpus::{Dataset, LabeledExample};
use crate::error::{Error, Result};
use crate::exec::ExecPolicy;
use crate::textprep;

/// Fraction of words masked by default.
pub const DEFAULT_MASK_RATIO: f64 = 0.4;

/// Nearest integer with half-way cases rounded up.
pub fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// The word indices selected for masking in one sentence, in sampling
/// order (sequential masking replaces them in exactly this order).
#[derive(Debug, Clone, PartialEq)]
pub struct MaskPlan {
    pub indices: Vec<usize>,
    pub ratio: f64,
    pub seed: u64,
}

impl MaskPlan {
    /// Checks the plan against a concrete word list: indices distinct and
    /// in bounds.
    pub fn validate_for(&self, word_count: usize) -> Result<()> {
        let mut seen = vec![false; word_count];
        for &index in &self.indices {
            if index >= word_count {
                return Err(Error::Precondition(format!(
                    "mask index {index} out of bounds for {word_count} words"
                )));
            }
            if seen[index] {
                return Err(Error::Precondition(format!(
                    "mask index {index} selected twice"
                )));
            }
            seen[index] = true;
        }
        Ok(())
    }
}

/// Samples `round_half_up(ratio × word_count)` distinct word indices
/// uniformly without replacement. Deterministic given the seed.
pub fn select_mask_indices(word_count: usize, ratio: f64, seed: u64) -> Result<MaskPlan> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::Precondition(format!(
            "mask ratio {ratio} outside [0, 1]"
        )));
    }
    let count = round_half_up(ratio * word_count as f64);
    debug_assert!(count <= word_count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..word_count).collect();
    let (chosen, _) = pool.partial_shuffle(&mut rng, count);
    Ok(MaskPlan {
        indices: chosen.to_vec(),
        ratio,
        seed,
    })
}

fn checked_prediction(fm: &dyn FillMaskBackend, words: &[String], index: usize) -> Result<String> {
    let word = fm.predict(words, index)?;
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return Err(Error::BackendContract(format!(
            "fill-mask prediction {word:?} is not one whitespace-free word"
        )));
    }
    Ok(word)
}

/// Replaces the planned indices one at a time, each prediction conditioned
/// on the replacements already applied.
pub fn random_mask_sequential(
    words: &[String],
    plan: &MaskPlan,
    fm: &dyn FillMaskBackend,
) -> Result<Vec<String>> {
    plan.validate_for(words.len())?;
    let mut current = words.to_vec();
    for &index in &plan.indices {
        current[index] = checked_prediction(fm, &current, index)?;
    }
    Ok(current)
}

/// Predicts every planned index against the original word list, then
/// applies all replacements simultaneously. Order-independent.
pub fn random_mask_parallel(
    words: &[String],
    plan: &MaskPlan,
    fm: &dyn FillMaskBackend,
) -> Result<Vec<String>> {
    plan.validate_for(words.len())?;
    let mut result = words.to_vec();
    for &index in &plan.indices {
        result[index] = checked_prediction(fm, words, index)?;
    }
    Ok(result)
}

/// Word indices covered by entity spans, skipping the `Other` category.
/// Spans are validated (in bounds, sorted, disjoint) before use.
fn entity_indices(words: &[String], ner: &dyn NerBackend) -> Result<Vec<usize>> {
    let spans = ner.tag(words)?;
    validate_spans(&spans, words.len())?;
    Ok(spans
        .iter()
        .filter(|span| span.category != OTHER_CATEGORY)
        .flat_map(|span| span.start..span.end)
        .collect())
}

/// Masks and replaces named-entity words one at a time against the current
/// word list. Entities are tagged once, on the original words.
pub fn ner_mask_sequential(
    words: &[String],
    ner: &dyn NerBackend,
    fm: &dyn FillMaskBackend,
) -> Result<Vec<String>> {
    let mut current = words.to_vec();
    for index in entity_indices(words, ner)? {
        current[index] = checked_prediction(fm, &current, index)?;
    }
    Ok(current)
}

/// Predicts every named-entity word against the original list and replaces
/// them simultaneously by recorded index.
pub fn ner_mask_parallel(
    words: &[String],
    ner: &dyn NerBackend,
    fm: &dyn FillMaskBackend,
) -> Result<Vec<String>> {
    let mut result = words.to_vec();
    for index in entity_indices(words, ner)? {
        result[index] = checked_prediction(fm, words, index)?;
    }
    Ok(result)
}

/// Translates to the pivot language and back.
pub fn back_translate(text: &str, tr: &dyn TranslatorBackend, pivot: &str) -> Result<String> {
    let pivoted = tr.translate(text, DEFAULT_SOURCE_LANG, pivot)?;
    tr.translate(&pivoted, pivot, DEFAULT_SOURCE_LANG)
}

/// Rewrites the sentence through the paraphraser backend.
pub fn paraphrase(text: &str, pp: &dyn ParaphraserBackend) -> Result<String> {
    if text.trim().is_empty() {
        return Err(Error::Precondition("cannot paraphrase empty text".into()));
    }
    let output = pp.paraphrase(text)?;
    if output.trim().is_empty() {
        return Err(Error::BackendContract(
            "paraphraser returned empty text for non-empty input".into(),
        ));
    }
    Ok(output)
}

/// The six sentence-level augmentation methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentMethod {
    BackTranslation,
    Paraphrase,
    RandomMaskSeq,
    RandomMaskPar,
    NerMaskSeq,
    NerMaskPar,
}

impl AugmentMethod {
    pub const ALL: [AugmentMethod; 6] = [
        AugmentMethod::BackTranslation,
        AugmentMethod::Paraphrase,
        AugmentMethod::RandomMaskSeq,
        AugmentMethod::RandomMaskPar,
        AugmentMethod::NerMaskSeq,
        AugmentMethod::NerMaskPar,
    ];

    /// The tag written into `LabeledExample.source`.
    pub fn tag(self) -> &'static str {
        match self {
            AugmentMethod::BackTranslation => "back-translation",
            AugmentMethod::Paraphrase => "paraphrase",
            AugmentMethod::RandomMaskSeq => "random-mask-seq",
            AugmentMethod::RandomMaskPar => "random-mask-par",
            AugmentMethod::NerMaskSeq => "ner-mask-seq",
            AugmentMethod::NerMaskPar => "ner-mask-par",
        }
    }
}

impl FromStr for AugmentMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AugmentMethod::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown augmentation method {s:?} (expected one of {})",
                    AugmentMethod::ALL.map(AugmentMethod::tag).join(", ")
                ))
            })
    }
}

impl fmt::Display for AugmentMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Settings for one dataset-level augmentation run.
#[derive(Debug, Clone)]
pub struct AugmentationConfig {
    pub method: AugmentMethod,
    pub ratio: f64,
    pub seed: u64,
    pub pivot_lang: String,
    pub keep_original: bool,
}

impl AugmentationConfig {
    pub fn new(method: AugmentMethod) -> Self {
        AugmentationConfig {
            method,
            ratio: DEFAULT_MASK_RATIO,
            seed: 42,
            pivot_lang: DEFAULT_PIVOT_LANG.to_string(),
            keep_original: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ratio) {
            return Err(Error::Config(format!(
                "mask ratio {} outside [0, 1]",
                self.ratio
            )));
        }
        Ok(())
    }
}

/// Counts reported after a dataset-level run; the CLI prints them as
/// `augmented=<n> skipped=<m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AugmentSummary {
    pub augmented: usize,
    pub skipped: usize,
}

/// Derives the per-example seed from the run seed and the example id, so
/// results don't depend on example position or execution order.
/// FNV-1a: stable across platforms and releases, unlike the std hasher.
pub fn derive_example_seed(run_seed: u64, example_id: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for byte in run_seed.to_le_bytes().into_iter().chain(example_id.bytes()) {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}

/// The backends one method needs, borrowed out of a [`BackendSet`] up
/// front so a missing backend fails before any work starts.
enum MethodBackends {
    Translate(Arc<dyn TranslatorBackend>),
    Paraphrase(Arc<dyn ParaphraserBackend>),
    Mask(Arc<dyn FillMaskBackend>),
    NerMask(Arc<dyn NerBackend>, Arc<dyn FillMaskBackend>),
}

impl MethodBackends {
    fn resolve(method: AugmentMethod, backends: &BackendSet) -> Result<Self> {
        Ok(match method {
            AugmentMethod::BackTranslation => {
                MethodBackends::Translate(backends.require_translator()?)
            }
            AugmentMethod::Paraphrase => {
                MethodBackends::Paraphrase(backends.require_paraphraser()?)
            }
            AugmentMethod::RandomMaskSeq | AugmentMethod::RandomMaskPar => {
                MethodBackends::Mask(backends.require_fill_mask()?)
            }
            AugmentMethod::NerMaskSeq | AugmentMethod::NerMaskPar => {
                MethodBackends::NerMask(backends.require_ner()?, backends.require_fill_mask()?)
            }
        })
    }

    fn concurrency_safe(&self) -> bool {
        match self {
            MethodBackends::Translate(tr) => tr.concurrency_safe(),
            MethodBackends::Paraphrase(pp) => pp.concurrency_safe(),
            MethodBackends::Mask(fm) => fm.concurrency_safe(),
            MethodBackends::NerMask(ner, fm) => ner.concurrency_safe() && fm.concurrency_safe(),
        }
    }
}

fn augment_text(
    text: &str,
    config: &AugmentationConfig,
    backends: &MethodBackends,
    example_seed: u64,
) -> Result<String> {
    match backends {
        MethodBackends::Translate(tr) => back_translate(text, tr.as_ref(), &config.pivot_lang),
        MethodBackends::Paraphrase(pp) => paraphrase(text, pp.as_ref()),
        MethodBackends::Mask(fm) => {
            let words = textprep::tokenize(text).words;
            let plan = select_mask_indices(words.len(), config.ratio, example_seed)?;
            let masked = match config.method {
                AugmentMethod::RandomMaskSeq => random_mask_sequential(&words, &plan, fm.as_ref()),
                _ => random_mask_parallel(&words, &plan, fm.as_ref()),
            }?;
            textprep::detokenize(&masked)
        }
        MethodBackends::NerMask(ner, fm) => {
            let words = textprep::tokenize(text).words;
            let masked = match config.method {
                AugmentMethod::NerMaskSeq => ner_mask_sequential(&words, ner.as_ref(), fm.as_ref()),
                _ => ner_mask_parallel(&words, ner.as_ref(), fm.as_ref()),
            }?;
            textprep::detokenize(&masked)
        }
    }
}

/// Applies one augmentation method to every example.
///
/// Each example yields one augmented copy with the same label (the methods
/// are sentiment-preserving by construction), `source` set to the method
/// tag, and params recording the run settings. With `keep_original` the
/// output is all originals followed by all augmented copies. Examples
/// whose backend calls fail are skipped with a warning and counted;
/// processing order never affects output order.
pub fn augment_dataset(
    dataset: &Dataset,
    config: &AugmentationConfig,
    backends: &BackendSet,
    policy: &ExecPolicy,
) -> Result<(Dataset, AugmentSummary)> {
    config.validate()?;
    let method_backends = MethodBackends::resolve(config.method, backends)?;
    let concurrency_safe = method_backends.concurrency_safe();

    let results = policy.map_indexed(&dataset.examples, concurrency_safe, |_, example| {
        let example_seed = derive_example_seed(config.seed, &example.id);
        augment_text(&example.text, config, &method_backends, example_seed)
            .and_then(|text| {
                if text.trim().is_empty() {
                    Err(Error::Augmentation {
                        id: example.id.clone(),
                        source: Box::new(Error::BackendContract(
                            "augmented text is empty".into(),
                        )),
                    })
                } else {
                    Ok(text)
                }
            })
            .map_err(|e| match e {
                already @ Error::Augmentation { .. } => already,
                other => Error::Augmentation {
                    id: example.id.clone(),
                    source: Box::new(other),
                },
            })
    });

    let mut output = Dataset::new(dataset.domain.clone(), dataset.split.clone());
    if config.keep_original {
        output.examples.extend(dataset.examples.iter().cloned());
    }
    let mut summary = AugmentSummary::default();
    for (example, result) in dataset.examples.iter().zip(results) {
        match result {
            Ok(text) => {
                let mut params = BTreeMap::new();
                params.insert("seed".to_string(), config.seed.to_string());
                match config.method {
                    AugmentMethod::RandomMaskSeq | AugmentMethod::RandomMaskPar => {
                        params.insert("ratio".to_string(), config.ratio.to_string());
                    }
                    AugmentMethod::BackTranslation => {
                        params.insert("pivot".to_string(), config.pivot_lang.clone());
                    }
                    _ => {}
                }
                output.examples.push(LabeledExample {
                    id: format!("{}-{}", example.id, config.method.tag()),
                    text,
                    label: example.label,
                    source: config.method.tag().to_string(),
                    params,
                });
                summary.augmented += 1;
            }
            Err(err) => {
                log::warn!("skipping example {}: {err}", example.id);
                summary.skipped += 1;
            }
        }
    }
    Ok((output, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::mocks::{
        ConstantFillMask, DictionaryTranslator, EchoFillMask, IdentityParaphraser, LexiconNer,
        LossyTranslator, NeighborFillMask, SuffixParaphraser, BOUNDARY_TOKEN,
    };
    use crate::corpus::SentimentLabel;

    fn words(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn plan(indices: &[usize]) -> MaskPlan {
        MaskPlan {
            indices: indices.to_vec(),
            ratio: DEFAULT_MASK_RATIO,
            seed: 0,
        }
    }

    /// Independent integer form of round_half_up(0.4 × L): ⌊(4L + 5) / 10⌋.
    fn mask_count_oracle(word_count: usize) -> usize {
        (4 * word_count + 5) / 10
    }

    #[test]
    fn mask_counts_match_rounding_fixtures() {
        let count = |wc| select_mask_indices(wc, 0.4, 7).unwrap().indices.len();
        assert_eq!(count(10), 4);
        assert_eq!(count(1), 0);
        assert_eq!(count(4), 2);
        assert_eq!(count(3), 1);
        assert_eq!(count(0), 0);
    }

    #[test]
    fn mask_count_matches_integer_oracle_up_to_200() {
        for wc in 0..=200 {
            let plan = select_mask_indices(wc, 0.4, 99).unwrap();
            assert_eq!(plan.indices.len(), mask_count_oracle(wc), "word_count={wc}");
        }
    }

    #[test]
    fn plans_are_deterministic_distinct_and_in_bounds() {
        let a = select_mask_indices(20, 0.4, 1234).unwrap();
        let b = select_mask_indices(20, 0.4, 1234).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), a.indices.len());
        assert!(a.indices.iter().all(|&i| i < 20));
    }

    #[test]
    fn full_ratio_masks_every_word() {
        let plan = select_mask_indices(7, 1.0, 3).unwrap();
        assert_eq!(plan.indices.len(), 7);
    }

    #[test]
    fn ratio_outside_unit_interval_is_rejected() {
        assert!(select_mask_indices(5, 1.5, 0).is_err());
        assert!(select_mask_indices(5, -0.1, 0).is_err());
        assert!(select_mask_indices(5, f64::NAN, 0).is_err());
    }

    #[test]
    fn echo_backend_makes_both_maskings_identity() {
        let fm = EchoFillMask::new();
        let list = words(&["a", "b", "c", "d", "e"]);
        let p = plan(&[0, 2, 4]);
        assert_eq!(random_mask_sequential(&list, &p, &fm).unwrap(), list);
        assert_eq!(random_mask_parallel(&list, &p, &fm).unwrap(), list);
    }

    #[test]
    fn constant_backend_replaces_exactly_the_planned_indices() {
        let fm = ConstantFillMask::new("X", true).unwrap();
        let list = words(&["a", "b", "c", "d", "e"]);
        let got = random_mask_sequential(&list, &plan(&[0, 2]), &fm).unwrap();
        assert_eq!(got, words(&["X", "b", "X", "d", "e"]));
    }

    #[test]
    fn sequential_and_parallel_masking_diverge_on_context() {
        let fm = NeighborFillMask::new();
        let list = words(&["a", "b", "c"]);
        let p = plan(&[1, 2]);
        assert_eq!(
            random_mask_sequential(&list, &p, &fm).unwrap(),
            words(&["a", "a", "a"])
        );
        assert_eq!(
            random_mask_parallel(&list, &p, &fm).unwrap(),
            words(&["a", "a", "b"])
        );
    }

    #[test]
    fn parallel_masking_ignores_plan_order() {
        let fm = NeighborFillMask::new();
        let list = words(&["a", "b", "c"]);
        assert_eq!(
            random_mask_parallel(&list, &plan(&[1, 2]), &fm).unwrap(),
            random_mask_parallel(&list, &plan(&[2, 1]), &fm).unwrap()
        );
    }

    #[test]
    fn empty_plan_is_a_no_op() {
        let fm = NeighborFillMask::new();
        let list = words(&["a", "b"]);
        assert_eq!(random_mask_parallel(&list, &plan(&[]), &fm).unwrap(), list);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let fm = EchoFillMask::new();
        let list = words(&["a", "b"]);
        assert!(random_mask_sequential(&list, &plan(&[2]), &fm).is_err());
        assert!(random_mask_parallel(&list, &plan(&[0, 0]), &fm).is_err());
    }

    fn lexicon(entries: &[(&str, &str)]) -> LexiconNer {
        LexiconNer::new(
            entries
                .iter()
                .map(|(w, c)| (w.to_string(), c.to_string()))
                .collect(),
        )
    }

    #[test]
    fn ner_masking_without_entities_is_identity() {
        let ner = lexicon(&[]);
        let fm = ConstantFillMask::new("X", true).unwrap();
        let list = words(&["a", "b", "c"]);
        assert_eq!(ner_mask_sequential(&list, &ner, &fm).unwrap(), list);
        assert_eq!(ner_mask_parallel(&list, &ner, &fm).unwrap(), list);
    }

    #[test]
    fn ner_masking_replaces_tagged_words() {
        let ner = lexicon(&[("b", "Person")]);
        let fm = ConstantFillMask::new("X", true).unwrap();
        let list = words(&["a", "b", "c"]);
        assert_eq!(
            ner_mask_sequential(&list, &ner, &fm).unwrap(),
            words(&["a", "X", "c"])
        );
    }

    #[test]
    fn ner_masking_skips_the_other_category() {
        let ner = lexicon(&[("b", "Other")]);
        let fm = ConstantFillMask::new("X", true).unwrap();
        let list = words(&["a", "b", "c"]);
        assert_eq!(ner_mask_sequential(&list, &ner, &fm).unwrap(), list);
        assert_eq!(ner_mask_parallel(&list, &ner, &fm).unwrap(), list);
    }

    #[test]
    fn ner_parallel_predicts_against_the_original_words() {
        let ner = lexicon(&[("a", "Person"), ("c", "Location")]);
        let fm = NeighborFillMask::new();
        let list = words(&["a", "b", "c"]);
        let expected = vec![BOUNDARY_TOKEN.to_string(), "b".to_string(), "b".to_string()];
        assert_eq!(ner_mask_parallel(&list, &ner, &fm).unwrap(), expected);
        // Here the predictions don't interact, so sequential agrees.
        assert_eq!(ner_mask_sequential(&list, &ner, &fm).unwrap(), expected);
    }

    #[test]
    fn back_translation_round_trips_through_an_invertible_table() {
        let tr = DictionaryTranslator::new(
            [("a", "x"), ("b", "y")]
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .into(),
            "mr",
            "en",
            true,
        )
        .unwrap();
        assert_eq!(back_translate("a b", &tr, "en").unwrap(), "a b");
        assert_eq!(back_translate("", &tr, "en").unwrap(), "");
    }

    #[test]
    fn lossy_back_translation_composes_the_two_tables() {
        let tr = LossyTranslator {
            forward: [("a".to_string(), "x".to_string())].into(),
            backward: [("x".to_string(), "b".to_string())].into(),
            source_lang: "mr".to_string(),
            pivot_lang: "en".to_string(),
            concurrency_safe: true,
        };
        assert_eq!(back_translate("a", &tr, "en").unwrap(), "b");
    }

    #[test]
    fn paraphrase_contracts() {
        assert_eq!(paraphrase("a b", &IdentityParaphraser::new()).unwrap(), "a b");
        assert_eq!(
            paraphrase("a b", &SuffixParaphraser::new("Z")).unwrap(),
            "a b Z"
        );
        assert!(matches!(
            paraphrase("", &IdentityParaphraser::new()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn derived_seeds_differ_by_example_and_run() {
        let a = derive_example_seed(42, "0");
        let b = derive_example_seed(42, "1");
        let c = derive_example_seed(43, "0");
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_example_seed(42, "0"));
    }

    fn tiny_dataset() -> Dataset {
        let mut ds = Dataset::new("mahasent", "train");
        for (i, (text, label)) in [
            ("कख गघ चछ", SentimentLabel::POSITIVE),
            ("जझ टठ", SentimentLabel::NEGATIVE),
            ("डढ णत थद नप", SentimentLabel::NEUTRAL),
        ]
        .iter()
        .enumerate()
        {
            ds.examples
                .push(LabeledExample::new(i.to_string(), *text, *label));
        }
        ds
    }

    fn echo_set() -> BackendSet {
        let mut set = BackendSet::default();
        set.insert(crate::backends::AnyBackend::FillMask(Arc::new(
            EchoFillMask::new(),
        )));
        set
    }

    #[test]
    fn augment_dataset_with_echo_doubles_and_preserves() {
        let ds = tiny_dataset();
        let config = AugmentationConfig::new(AugmentMethod::RandomMaskPar);
        let (out, summary) =
            augment_dataset(&ds, &config, &echo_set(), &ExecPolicy::serial()).unwrap();
        assert_eq!(out.len(), 6);
        assert_eq!(summary, AugmentSummary { augmented: 3, skipped: 0 });
        for i in 0..3 {
            assert_eq!(out.examples[i + 3].text, ds.examples[i].text);
            assert_eq!(out.examples[i + 3].label, ds.examples[i].label);
            assert_eq!(out.examples[i + 3].source, "random-mask-par");
        }
        out.validate().unwrap();
    }

    #[test]
    fn augment_dataset_without_originals_keeps_only_copies() {
        let ds = tiny_dataset();
        let mut config = AugmentationConfig::new(AugmentMethod::RandomMaskSeq);
        config.keep_original = false;
        let (out, _) = augment_dataset(&ds, &config, &echo_set(), &ExecPolicy::serial()).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.examples.iter().all(|e| e.source == "random-mask-seq"));
    }

    #[test]
    fn augment_dataset_is_deterministic_across_policies() {
        let ds = tiny_dataset();
        let mut set = echo_set();
        set.insert(crate::backends::AnyBackend::FillMask(Arc::new(
            NeighborFillMask::new(),
        )));
        let config = AugmentationConfig::new(AugmentMethod::RandomMaskPar);
        let (serial, _) = augment_dataset(&ds, &config, &set, &ExecPolicy::serial()).unwrap();
        let (parallel, _) = augment_dataset(&ds, &config, &set, &ExecPolicy::default()).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn missing_backend_fails_before_any_work() {
        let ds = tiny_dataset();
        let config = AugmentationConfig::new(AugmentMethod::BackTranslation);
        let err = augment_dataset(&ds, &config, &echo_set(), &ExecPolicy::serial()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn failing_backend_skips_examples_and_counts_them() {
        struct FailingParaphraser;
        impl ParaphraserBackend for FailingParaphraser {
            fn paraphrase(&self, text: &str) -> Result<String> {
                if text.split_whitespace().count() == 2 {
                    Err(Error::Backend("model refused".into()))
                } else {
                    Ok(text.to_string())
                }
            }
        }
        let ds = tiny_dataset();
        let mut set = BackendSet::default();
        set.insert(crate::backends::AnyBackend::Paraphraser(Arc::new(
            FailingParaphraser,
        )));
        let config = AugmentationConfig::new(AugmentMethod::Paraphrase);
        let (out, summary) =
            augment_dataset(&ds, &config, &set, &ExecPolicy::serial()).unwrap();
        assert_eq!(summary, AugmentSummary { augmented: 2, skipped: 1 });
        assert_eq!(out.len(), 5);
        out.validate().unwrap();
    }
}
