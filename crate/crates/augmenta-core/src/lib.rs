//! Text-data-augmentation toolkit and evaluation harness for low-resource
//! sentiment analysis.
//!
//! The crate implements nine augmentation and label-generation procedures
//! — back-translation, paraphrasing, sequential/parallel random masking,
//! sequential/parallel named-entity masking, classifier pseudo-labeling,
//! generative label generation, and completion of halved sentences —
//! behind pluggable model backends. Deterministic mock backends make the
//! full pipeline runnable and exactly verifiable without trained models;
//! real model adapters plug in behind the same traits.
//!
//! Modules:
//! - [`corpus`]: data model, TSV/JSONL dataset I/O, fine→coarse label maps.
//! - [`textprep`]: Devanagari-preserving cleaning and word tokenization.
//! - [`backends`]: the five model-role contracts and their mocks.
//! - [`augmentors`]: sentence-level augmentation and the dataset wrapper.
//! - [`generative`]: pseudo-labeling and halved-sentence completion.
//! - [`evalharness`]: accuracy/confusion evaluation and report rendering.
//! - [`exec`]: the serial/parallel execution policy used by all of them.
//!
//! With the default `parallel` feature, per-example work runs on a rayon
//! pool when the backends allow it; without it everything runs serially.
//! Outputs are byte-identical either way.

pub mod augmentors;
pub mod backends;
pub mod corpus;
pub mod error;
pub mod evalharness;
pub mod exec;
pub mod generative;
pub mod textprep;

pub use error::{Error, Result};
