//! Serial vs. data-parallel execution of the per-example pipelines.
//!
//! The mocks burn a fixed amount of deterministic CPU per call so the
//! comparison measures real work. Without the `parallel` feature both
//! policies run serially and the two series coincide.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use augmenta_core::augmentors::{augment_dataset, AugmentMethod, AugmentationConfig};
use augmenta_core::backends::{AnyBackend, BackendSet, ClassifierBackend, FillMaskBackend};
use augmenta_core::corpus::{Dataset, LabeledExample, SentimentLabel};
use augmenta_core::error::Result;
use augmenta_core::evalharness::evaluate;
use augmenta_core::exec::ExecPolicy;

fn busy_hash(seed: u64, rounds: u32) -> u64 {
    let mut h = seed ^ 0xcbf2_9ce4_8422_2325;
    for i in 0..rounds {
        h ^= u64::from(i);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
        h ^= h >> 31;
    }
    h
}

struct BusyFillMask;

impl FillMaskBackend for BusyFillMask {
    fn predict(&self, words: &[String], masked_index: usize) -> Result<String> {
        let mut seed = masked_index as u64;
        for word in words {
            seed = seed.wrapping_add(word.len() as u64);
        }
        Ok(format!("w{}", busy_hash(seed, 4_000) % 97))
    }
}

struct BusyClassifier;

impl ClassifierBackend for BusyClassifier {
    fn predict(&self, text: &str) -> Result<SentimentLabel> {
        let code = busy_hash(text.len() as u64, 4_000) % 3;
        Ok(SentimentLabel::new(code as i64).expect("code in range"))
    }
}

fn corpus(size: usize, words_per_example: usize) -> Dataset {
    let mut dataset = Dataset::new("bench", "train");
    for i in 0..size {
        let text = (0..words_per_example)
            .map(|w| format!("w{}", (i * 31 + w * 7) % 211))
            .collect::<Vec<_>>()
            .join(" ");
        dataset.examples.push(LabeledExample::new(
            i.to_string(),
            text,
            SentimentLabel::new((i % 3) as i64).expect("code in range"),
        ));
    }
    dataset
}

fn policies() -> [(&'static str, ExecPolicy); 2] {
    [
        ("serial", ExecPolicy::serial()),
        ("parallel", ExecPolicy::default()),
    ]
}

fn bench_augment(c: &mut Criterion) {
    let dataset = corpus(400, 24);
    let mut backends = BackendSet::default();
    backends.insert(AnyBackend::FillMask(Arc::new(BusyFillMask)));
    let config = AugmentationConfig::new(AugmentMethod::RandomMaskPar);
    let mut group = c.benchmark_group("augment/random-mask-par");
    group.sample_size(10);
    for (name, policy) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &policy, |b, policy| {
            b.iter(|| augment_dataset(&dataset, &config, &backends, policy).unwrap());
        });
    }
    group.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let dataset = corpus(1_000, 16);
    let mut group = c.benchmark_group("evaluate");
    group.sample_size(10);
    for (name, policy) in policies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &policy, |b, policy| {
            b.iter(|| evaluate(&BusyClassifier, &dataset, policy).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_augment, bench_evaluate);
criterion_main!(benches);
