//! BLEU scoring, qualitative interpretation and report rows.

pub mod bleu;
pub mod interpret;
pub mod report;

pub use bleu::{
    brevity_penalty, closest_ref_len, corpus_bleu, modified_precision, sentence_bleu, BleuScore,
    BleuStats, Precision, Smoothing, MAX_ORDER,
};
pub use interpret::{interpret, Interpretation};
pub use report::{evaluate_model, render_table, EvalReport};
