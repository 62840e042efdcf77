//! Accuracy and confusion-matrix evaluation of sentiment classifiers,
//! in-domain/cross-domain matrix assembly, and report rendering.
//!
//! The markdown report is a grid with one row per model tag and one
//! accuracy column per (train domain → eval domain, split) combination;
//! cells with no measurement render as "-". The CSV form is flat, one row
//! per entry, carrying the confusion counts and per-class
//! precision/recall/F1 as supplementary columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::backends::ClassifierBackend;
use crate::corpus::{Dataset, SentimentLabel};
use crate::error::{Error, Result};
use crate::exec::ExecPolicy;

/// 3×3 integer grid; rows are gold labels, columns predicted labels, both
/// in code order 0 (negative), 1 (positive), 2 (neutral).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn record(&mut self, gold: SentimentLabel, predicted: SentimentLabel) {
        self.counts[gold.value() as usize][predicted.value() as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn row_sum(&self, gold: usize) -> u64 {
        self.counts[gold].iter().sum()
    }

    pub fn column_sum(&self, predicted: usize) -> u64 {
        self.counts.iter().map(|row| row[predicted]).sum()
    }

    /// trace / total; `None` for an empty matrix.
    pub fn accuracy(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.trace() as f64 / total as f64)
    }

    /// (precision, recall, F1) for one class; each is `None` when its
    /// denominator is zero.
    pub fn class_metrics(&self, class: usize) -> (Option<f64>, Option<f64>, Option<f64>) {
        let tp = self.counts[class][class] as f64;
        let precision = match self.column_sum(class) {
            0 => None,
            n => Some(tp / n as f64),
        };
        let recall = match self.row_sum(class) {
            0 => None,
            n => Some(tp / n as f64),
        };
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        (precision, recall, f1)
    }
}

/// Result of evaluating one classifier on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub evaluated: u64,
    pub skipped: u64,
}

/// Runs the classifier over the dataset and tallies the confusion matrix.
/// Items the classifier fails on are excluded from the denominator and
/// counted as skipped — skips never inflate accuracy.
pub fn evaluate(
    clf: &dyn ClassifierBackend,
    dataset: &Dataset,
    policy: &ExecPolicy,
) -> Result<EvalOutcome> {
    if dataset.is_empty() {
        return Err(Error::Precondition("cannot evaluate an empty dataset".into()));
    }
    let predictions = policy.map_indexed(&dataset.examples, clf.concurrency_safe(), |_, ex| {
        clf.predict(&ex.text)
    });
    let mut confusion = ConfusionMatrix::default();
    let mut skipped = 0u64;
    for (example, prediction) in dataset.examples.iter().zip(predictions) {
        match prediction {
            Ok(predicted) => confusion.record(example.label, predicted),
            Err(err) => {
                log::warn!("skipping example {}: {err}", example.id);
                skipped += 1;
            }
        }
    }
    let evaluated = confusion.total();
    let accuracy = confusion
        .accuracy()
        .ok_or_else(|| Error::Backend("classifier failed on every example".into()))?;
    Ok(EvalOutcome {
        confusion,
        accuracy,
        evaluated,
        skipped,
    })
}

/// Precomputed id → predicted-label map for model-free evaluation.
pub fn load_predictions(path: &Path) -> Result<BTreeMap<String, SentimentLabel>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end_matches('\r') == "id\tpredicted" => {}
        Some((_, header)) => {
            return Err(Error::parse(
                path,
                1,
                format!("unexpected header {header:?} (expected id\\tpredicted)"),
            ))
        }
        None => return Err(Error::parse(path, 1, "missing header line")),
    }
    let mut predictions = BTreeMap::new();
    for (idx, raw_line) in lines {
        let line_no = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (id, code) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, line_no, "expected id\\tpredicted"))?;
        let value: i64 = code.trim().parse().map_err(|_| {
            Error::parse(path, line_no, format!("predicted label {code:?} is not an integer"))
        })?;
        let label = SentimentLabel::new(value).map_err(|_| {
            Error::parse(path, line_no, format!("label {value} outside {{0, 1, 2}}"))
        })?;
        if predictions.insert(id.to_string(), label).is_some() {
            return Err(Error::parse(path, line_no, format!("duplicate prediction for id {id:?}")));
        }
    }
    Ok(predictions)
}

/// Scores a predictions map against gold labels. Gold examples with no
/// prediction are counted as skipped.
pub fn evaluate_predictions(
    gold: &Dataset,
    predictions: &BTreeMap<String, SentimentLabel>,
) -> Result<EvalOutcome> {
    if gold.is_empty() {
        return Err(Error::Precondition("cannot evaluate an empty dataset".into()));
    }
    let mut confusion = ConfusionMatrix::default();
    let mut skipped = 0u64;
    for example in &gold.examples {
        match predictions.get(&example.id) {
            Some(&predicted) => confusion.record(example.label, predicted),
            None => {
                log::warn!("no prediction for example {}", example.id);
                skipped += 1;
            }
        }
    }
    let accuracy = confusion
        .accuracy()
        .ok_or_else(|| Error::Precondition("predictions cover no gold example".into()))?;
    Ok(EvalOutcome {
        evaluated: confusion.total(),
        confusion,
        accuracy,
        skipped,
    })
}

/// One cell of the evaluation grid. `accuracy == None` (with an empty
/// confusion matrix) marks a cell with no measurement, rendered "-".
#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub model_tag: String,
    pub train_domain: String,
    pub eval_domain: String,
    pub split: String,
    pub accuracy: Option<f64>,
    pub confusion: ConfusionMatrix,
    pub skipped: u64,
}

impl ReportEntry {
    pub fn from_outcome(
        model_tag: impl Into<String>,
        train_domain: impl Into<String>,
        eval_domain: impl Into<String>,
        split: impl Into<String>,
        outcome: &EvalOutcome,
    ) -> Self {
        ReportEntry {
            model_tag: model_tag.into(),
            train_domain: train_domain.into(),
            eval_domain: eval_domain.into(),
            split: split.into(),
            accuracy: Some(outcome.accuracy),
            confusion: outcome.confusion,
            skipped: outcome.skipped,
        }
    }

    /// An unpopulated cell, rendered "-".
    pub fn empty(
        model_tag: impl Into<String>,
        train_domain: impl Into<String>,
        eval_domain: impl Into<String>,
        split: impl Into<String>,
    ) -> Self {
        ReportEntry {
            model_tag: model_tag.into(),
            train_domain: train_domain.into(),
            eval_domain: eval_domain.into(),
            split: split.into(),
            accuracy: None,
            confusion: ConfusionMatrix::default(),
            skipped: 0,
        }
    }

    pub fn is_in_domain(&self) -> bool {
        self.train_domain == self.eval_domain
    }

    fn cell_key(&self) -> (String, String, String, String) {
        (
            self.model_tag.clone(),
            self.train_domain.clone(),
            self.eval_domain.clone(),
            self.split.clone(),
        )
    }
}

/// A set of evaluation cells, renderable as a grid or flat CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvaluationReport {
    pub entries: Vec<ReportEntry>,
}

/// How far a 4-decimal rendering may sit from the exact ratio.
const FOUR_DP_TOLERANCE: f64 = 5.1e-5;

impl EvaluationReport {
    /// Checks that every populated entry's accuracy matches its confusion
    /// matrix and every empty entry has an empty matrix.
    pub fn validate(&self) -> Result<()> {
        for entry in &self.entries {
            match (entry.accuracy, entry.confusion.accuracy()) {
                (Some(stated), Some(computed)) => {
                    if (stated - computed).abs() > FOUR_DP_TOLERANCE {
                        return Err(Error::Precondition(format!(
                            "entry {:?}: stated accuracy {stated} disagrees with confusion \
                             matrix ({computed})",
                            entry.model_tag
                        )));
                    }
                }
                (None, None) => {}
                _ => {
                    return Err(Error::Precondition(format!(
                        "entry {:?}: accuracy and confusion matrix must be populated together",
                        entry.model_tag
                    )))
                }
            }
        }
        Ok(())
    }
}

/// A classifier under evaluation, tagged with its identity and the domain
/// it was trained on.
#[derive(Clone)]
pub struct EvalModel {
    pub tag: String,
    pub train_domain: String,
    pub classifier: Arc<dyn ClassifierBackend>,
}

/// Evaluates every model on every dataset — one report entry per pair.
/// Entries where the model's train domain equals the dataset's domain are
/// the in-domain cells; the rest are cross-domain.
pub fn cross_domain_matrix(
    models: &[EvalModel],
    datasets: &[Dataset],
    policy: &ExecPolicy,
) -> Result<EvaluationReport> {
    if models.is_empty() || datasets.is_empty() {
        return Err(Error::Precondition(
            "cross-domain evaluation needs at least one model and one dataset".into(),
        ));
    }
    let mut report = EvaluationReport::default();
    for model in models {
        for dataset in datasets {
            let outcome = evaluate(model.classifier.as_ref(), dataset, policy)?;
            report.entries.push(ReportEntry::from_outcome(
                model.tag.clone(),
                model.train_domain.clone(),
                dataset.domain.clone(),
                dataset.split.clone(),
                &outcome,
            ));
        }
    }
    Ok(report)
}

/// Output formats for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "markdown" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown report format {other:?} (expected markdown or csv)"
            ))),
        }
    }
}

fn split_rank(split: &str) -> u8 {
    match split {
        "train" => 0,
        "validation" => 1,
        "test" => 2,
        _ => 3,
    }
}

fn format_accuracy(accuracy: Option<f64>) -> String {
    match accuracy {
        Some(a) => format!("{a:.4}"),
        None => "-".to_string(),
    }
}

const LABEL_NAMES: [&str; 3] = ["neg", "pos", "neu"];

fn render_markdown(report: &EvaluationReport) -> String {
    // Column per (train, eval, split), sorted; row per model tag in
    // first-appearance order.
    let mut columns: Vec<(String, String, String)> = Vec::new();
    let mut models: Vec<String> = Vec::new();
    for entry in &report.entries {
        let column = (
            entry.train_domain.clone(),
            entry.eval_domain.clone(),
            entry.split.clone(),
        );
        if !columns.contains(&column) {
            columns.push(column);
        }
        if !models.contains(&entry.model_tag) {
            models.push(entry.model_tag.clone());
        }
    }
    columns.sort_by(|a, b| {
        (&a.0, &a.1, split_rank(&a.2), &a.2).cmp(&(&b.0, &b.1, split_rank(&b.2), &b.2))
    });

    let mut cells: BTreeMap<(&str, usize), String> = BTreeMap::new();
    for entry in &report.entries {
        let column = (
            entry.train_domain.clone(),
            entry.eval_domain.clone(),
            entry.split.clone(),
        );
        let col_index = columns.iter().position(|c| *c == column).expect("collected");
        cells.insert(
            (entry.model_tag.as_str(), col_index),
            format_accuracy(entry.accuracy),
        );
    }

    let mut out = String::new();
    out.push_str("# Accuracy by model and evaluation dataset\n\n");
    out.push_str("| Method |");
    for (train, eval, split) in &columns {
        let _ = write!(out, " {train}→{eval} ({split}) |");
    }
    out.push('\n');
    out.push_str("| --- |");
    for _ in &columns {
        out.push_str(" --- |");
    }
    out.push('\n');
    for model in &models {
        let _ = write!(out, "| {model} |");
        for col_index in 0..columns.len() {
            let cell = cells
                .get(&(model.as_str(), col_index))
                .map(String::as_str)
                .unwrap_or("-");
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }

    let populated: Vec<&ReportEntry> = report
        .entries
        .iter()
        .filter(|e| e.confusion.total() > 0)
        .collect();
    if !populated.is_empty() {
        out.push_str("\n# Confusion matrices\n");
        for entry in populated {
            let _ = write!(
                out,
                "\n## {} — trained on {}, evaluated on {} ({})\n\n",
                entry.model_tag, entry.train_domain, entry.eval_domain, entry.split
            );
            out.push_str("| gold \\ predicted | neg | pos | neu |\n");
            out.push_str("| --- | --- | --- | --- |\n");
            for gold in 0..3 {
                let _ = write!(out, "| {} |", LABEL_NAMES[gold]);
                for predicted in 0..3 {
                    let _ = write!(out, " {} |", entry.confusion.counts[gold][predicted]);
                }
                out.push('\n');
            }
            let _ = write!(
                out,
                "\nevaluated={} skipped={}\n",
                entry.confusion.total(),
                entry.skipped
            );
        }
    }
    out
}

/// The flat CSV header. The first five columns are the report proper; the
/// rest carry the confusion counts and per-class metrics so the accuracy
/// can be recomputed from the rendered file.
pub const CSV_HEADER: [&str; 25] = [
    "model",
    "train_domain",
    "eval_domain",
    "split",
    "accuracy",
    "evaluated",
    "skipped",
    "gold0_pred0",
    "gold0_pred1",
    "gold0_pred2",
    "gold1_pred0",
    "gold1_pred1",
    "gold1_pred2",
    "gold2_pred0",
    "gold2_pred1",
    "gold2_pred2",
    "precision_neg",
    "recall_neg",
    "f1_neg",
    "precision_pos",
    "recall_pos",
    "f1_pos",
    "precision_neu",
    "recall_neu",
    "f1_neu",
];

fn render_csv(report: &EvaluationReport) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(CSV_HEADER)
        .map_err(|e| Error::Config(format!("csv rendering failed: {e}")))?;
    for entry in &report.entries {
        let mut record: Vec<String> = vec![
            entry.model_tag.clone(),
            entry.train_domain.clone(),
            entry.eval_domain.clone(),
            entry.split.clone(),
            entry.accuracy.map(|a| format!("{a:.4}")).unwrap_or_default(),
            entry.confusion.total().to_string(),
            entry.skipped.to_string(),
        ];
        for gold in 0..3 {
            for predicted in 0..3 {
                record.push(entry.confusion.counts[gold][predicted].to_string());
            }
        }
        for class in 0..3 {
            let (precision, recall, f1) = entry.confusion.class_metrics(class);
            for metric in [precision, recall, f1] {
                record.push(metric.map(|m| format!("{m:.4}")).unwrap_or_default());
            }
        }
        writer
            .write_record(&record)
            .map_err(|e| Error::Config(format!("csv rendering failed: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("csv rendering failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(format!("csv rendering failed: {e}")))
}

/// Renders the report. Markdown is the Table-style grid; CSV is flat.
pub fn render_report(report: &EvaluationReport, format: ReportFormat) -> Result<String> {
    if report.entries.is_empty() {
        return Err(Error::Precondition("cannot render an empty report".into()));
    }
    report.validate()?;
    match format {
        ReportFormat::Markdown => Ok(render_markdown(report)),
        ReportFormat::Csv => render_csv(report),
    }
}

/// Parses a CSV produced by [`render_report`] back into a report.
pub fn parse_report_csv(path: &Path, text: &str) -> Result<EvaluationReport> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, format!("invalid csv: {e}")))?;
    let expected: Vec<&str> = CSV_HEADER.to_vec();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(
            path,
            1,
            format!("unexpected csv header (expected {})", expected.join(",")),
        ));
    }
    let mut report = EvaluationReport::default();
    for (idx, row) in reader.records().enumerate() {
        let line_no = idx + 2;
        let row = row.map_err(|e| Error::parse(path, line_no, format!("invalid csv row: {e}")))?;
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        let accuracy = match row.get(4).unwrap_or("") {
            "" => None,
            raw => Some(raw.parse::<f64>().map_err(|_| {
                Error::parse(path, line_no, format!("accuracy {raw:?} is not a number"))
            })?),
        };
        let skipped: u64 = row.get(6).unwrap_or("0").parse().map_err(|_| {
            Error::parse(path, line_no, "skipped count is not an integer")
        })?;
        let mut confusion = ConfusionMatrix::default();
        for gold in 0..3 {
            for predicted in 0..3 {
                let raw = row.get(7 + gold * 3 + predicted).unwrap_or("");
                confusion.counts[gold][predicted] = raw.parse().map_err(|_| {
                    Error::parse(
                        path,
                        line_no,
                        format!("confusion count {raw:?} is not an integer"),
                    )
                })?;
            }
        }
        report.entries.push(ReportEntry {
            model_tag: field(0),
            train_domain: field(1),
            eval_domain: field(2),
            split: field(3),
            accuracy,
            confusion,
            skipped,
        });
    }
    report.validate()?;
    Ok(report)
}

/// Merges reports cell-wise. Identical duplicate cells collapse; cells
/// with the same key but different values are a conflict, reported with
/// both renderings.
pub fn merge_reports(reports: Vec<EvaluationReport>) -> Result<EvaluationReport> {
    let mut merged = EvaluationReport::default();
    let mut index: BTreeMap<(String, String, String, String), usize> = BTreeMap::new();
    for report in reports {
        for entry in report.entries {
            let key = entry.cell_key();
            match index.get(&key) {
                None => {
                    index.insert(key, merged.entries.len());
                    merged.entries.push(entry);
                }
                Some(&existing_index) => {
                    let existing = &merged.entries[existing_index];
                    let same = format_accuracy(existing.accuracy)
                        == format_accuracy(entry.accuracy)
                        && existing.confusion == entry.confusion
                        && existing.skipped == entry.skipped;
                    if !same {
                        return Err(Error::Config(format!(
                            "conflicting report cells for model {:?}, {}→{} ({}): {} vs {}",
                            key.0,
                            key.1,
                            key.2,
                            key.3,
                            format_accuracy(existing.accuracy),
                            format_accuracy(entry.accuracy),
                        )));
                    }
                }
            }
        }
    }
    Ok(merged)
}
