//! Command-line entry point wiring the toolkit into subcommands with
//! reproducible, config-driven runs.
//!
//! Every subcommand writes a [`RunManifest`] JSON next to each output file
//! recording the resolved flags, seed, paths, tool version, and timestamp;
//! with mock backends the manifest fully determines a rerun's output.
//!
//! Exit codes: 0 success, 1 input/config error (including bad flags),
//! 2 backend failure (a model errored or an external model is not
//! available in this build).

mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use augmenta_core::exec::ExecPolicy;

pub use manifest::{manifest_path, rerun_from_manifest, RunManifest};

#[derive(Debug, Parser)]
#[command(
    name = "augmenta",
    version,
    about = "Text data augmentation and evaluation for low-resource sentiment analysis"
)]
struct Cli {
    /// Worker cap for per-example parallelism; 1 forces serial execution.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clean dataset texts: strip URLs, hashtags, punctuation, and
    /// non-Devanagari content; drop examples whose text cleans to nothing.
    Preprocess(PreprocessArgs),
    /// Apply one augmentation method to every example of a dataset.
    Augment(AugmentArgs),
    /// Label plain text with a classifier backend, one sentence per line.
    Pseudolabel(PseudolabelArgs),
    /// Extend a dataset with label-conditioned completions of halved
    /// sentences.
    Complete(CompleteArgs),
    /// Score a classifier (or a precomputed predictions file) against gold
    /// labels.
    Evaluate(EvaluateArgs),
    /// Merge evaluation CSVs into one accuracy grid.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct PreprocessArgs {
    /// Input dataset (.tsv or .jsonl).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output dataset path; format inferred from the extension.
    #[arg(long)]
    out: PathBuf,
    /// Drop the whole hashtag word instead of keeping it without '#'.
    #[arg(long)]
    drop_hashtag_words: bool,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    /// Input dataset (.tsv or .jsonl).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output dataset path.
    #[arg(long)]
    out: PathBuf,
    /// One of: back-translation, paraphrase, random-mask-seq,
    /// random-mask-par, ner-mask-seq, ner-mask-par.
    #[arg(long)]
    method: String,
    /// Fraction of words to mask (random masking methods).
    #[arg(long, default_value_t = 0.4)]
    ratio: f64,
    /// Run seed; per-example seeds derive from it and the example id.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Pivot language for back-translation.
    #[arg(long, default_value = "en")]
    pivot: String,
    /// Keep originals alongside augmented copies (default).
    #[arg(long, overrides_with = "no_keep_original")]
    keep_original: bool,
    /// Emit only the augmented copies.
    #[arg(long, overrides_with = "keep_original")]
    no_keep_original: bool,
    /// Backend config JSON (single backend or role-keyed map).
    #[arg(long, env = "AUGMENTA_BACKEND_CONFIG")]
    backend_config: PathBuf,
}

impl AugmentArgs {
    fn keep_original(&self) -> bool {
        !self.no_keep_original
    }
}

#[derive(Debug, Args)]
struct PseudolabelArgs {
    /// Plain-text input, one sentence per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output dataset path.
    #[arg(long)]
    out: PathBuf,
    /// Classifier backend config JSON.
    #[arg(long)]
    classifier_config: PathBuf,
    /// Also write the fine-tuning protocol (JSONL) to this path.
    #[arg(long)]
    train_manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompleteArgs {
    /// Input dataset (.tsv or .jsonl).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output dataset path.
    #[arg(long)]
    out: PathBuf,
    /// Completer backend config JSON.
    #[arg(long)]
    generator_config: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Gold dataset (.tsv or .jsonl).
    #[arg(long)]
    gold: PathBuf,
    /// Report output path.
    #[arg(long)]
    report: PathBuf,
    /// Report format: markdown or csv.
    #[arg(long, default_value = "markdown")]
    format: String,
    /// Classifier backend config JSON.
    #[arg(long)]
    classifier_config: Option<PathBuf>,
    /// Precomputed predictions TSV (header `id\tpredicted`) for
    /// model-free evaluation.
    #[arg(long)]
    predictions: Option<PathBuf>,
    /// Row label for this model in reports.
    #[arg(long, default_value = "model")]
    model_tag: String,
    /// Domain the model was trained on.
    #[arg(long, default_value = "unspecified")]
    train_domain: String,
    /// Domain of the gold dataset.
    #[arg(long, default_value = "unspecified")]
    eval_domain: String,
    /// Split name of the gold dataset.
    #[arg(long, default_value = "test")]
    split: String,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Evaluation CSVs to merge; repeatable.
    #[arg(long = "in", required = true)]
    inputs: Vec<PathBuf>,
    /// Merged markdown output path.
    #[arg(long)]
    out: PathBuf,
}

fn policy(jobs: Option<usize>) -> ExecPolicy {
    ExecPolicy { jobs }
}

fn execute(cli: Cli) -> augmenta_core::Result<()> {
    let policy = policy(cli.jobs);
    match cli.command {
        Command::Preprocess(args) => commands::preprocess(&args, cli.jobs, &policy),
        Command::Augment(args) => commands::augment(&args, cli.jobs, &policy),
        Command::Pseudolabel(args) => commands::pseudolabel(&args, cli.jobs, &policy),
        Command::Complete(args) => commands::complete(&args, cli.jobs, &policy),
        Command::Evaluate(args) => commands::evaluate(&args, cli.jobs, &policy),
        Command::Report(args) => commands::report(&args, cli.jobs),
    }
}

/// Parses `args` (argv[0] included) and runs the named subcommand,
/// returning the process exit code.
pub fn run_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default()).try_init();
    match Cli::try_parse_from(args) {
        Ok(cli) => match execute(cli) {
            Ok(()) => 0,
            Err(err) => {
                eprintln!("error: {err}");
                if err.is_backend_failure() {
                    2
                } else {
                    1
                }
            }
        },
        Err(err) => {
            use clap::error::ErrorKind;
            match err.kind() {
                // Help and version are successful outputs, not errors.
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    print!("{err}");
                    0
                }
                // Anything else is an input error: usage on stderr, exit 1
                // (input error), not clap's default exit 2.
                _ => {
                    eprint!("{err}");
                    1
                }
            }
        }
    }
}
