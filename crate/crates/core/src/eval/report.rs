//! Table-shaped evaluation reports for a trained translator.

use serde::{Deserialize, Serialize};

use crate::corpus::{clean_text, tokenize, Corpus};
use crate::error::{Error, Result};
use crate::eval::bleu::{corpus_bleu, BleuScore, Smoothing, MAX_ORDER};
use crate::eval::interpret::{interpret, Interpretation};
use crate::seq2seq::Seq2SeqModel;

/// One report row: language, a sample translation, corpus BLEU-1..4 and the
/// reading of BLEU-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub language: String,
    pub example_source: String,
    pub example_output: String,
    pub bleu: [f64; MAX_ORDER],
    pub interpretation: Interpretation,
    pub pairs_scored: usize,
}

const HEADERS: [&str; 7] = [
    "Language",
    "Example Translation",
    "BLEU-1",
    "BLEU-2",
    "BLEU-3",
    "BLEU-4",
    "Interpretation",
];

impl EvalReport {
    pub fn from_score(
        language: impl Into<String>,
        example_source: impl Into<String>,
        example_output: impl Into<String>,
        score: &BleuScore,
        pairs_scored: usize,
    ) -> Result<Self> {
        Ok(Self {
            language: language.into(),
            example_source: example_source.into(),
            example_output: example_output.into(),
            bleu: score.bleu,
            interpretation: interpret(score.bleu[0])?,
            pairs_scored,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn cells(&self) -> [String; 7] {
        [
            self.language.clone(),
            format!("{} -> {}", self.example_source, self.example_output),
            format!("{:.2}", self.bleu[0]),
            format!("{:.2}", self.bleu[1]),
            format!("{:.2}", self.bleu[2]),
            format!("{:.2}", self.bleu[3]),
            self.interpretation.label().to_string(),
        ]
    }
}

/// Renders reports as a whitespace-aligned table with a header line.
pub fn render_table(reports: &[EvalReport]) -> String {
    let rows: Vec<[String; 7]> = reports.iter().map(EvalReport::cells).collect();
    let mut widths = HEADERS.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&HEADERS.map(String::from));
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

/// Translates every source in `test`, scores each output against its paired
/// target and reports corpus BLEU. Both sides are cleaned with the model's
/// policy before tokenizing. The example row is the first pair.
pub fn evaluate_model(
    model: &Seq2SeqModel,
    test: &Corpus,
    smoothing: Smoothing,
) -> Result<EvalReport> {
    if test.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let sources: Vec<&str> = test.sources().collect();
    let outputs = model.translate_batch(&sources)?;
    let scored: Vec<(Vec<String>, Vec<Vec<String>>)> = outputs
        .iter()
        .zip(test.targets())
        .map(|(out, reference)| {
            let reference = clean_text(reference, model.policy);
            (
                tokenize(out).map(String::from).collect(),
                vec![tokenize(&reference).map(String::from).collect()],
            )
        })
        .collect();
    let score = corpus_bleu(&scored, MAX_ORDER, smoothing)?;
    EvalReport::from_score(
        &test.source_lang,
        sources[0],
        &outputs[0],
        &score,
        test.len(),
    )
}
