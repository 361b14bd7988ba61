//! Sentence and corpus BLEU with the qualitative reading of each score.

use microtrans::eval::{corpus_bleu, interpret, sentence_bleu, Smoothing};

fn toks(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn main() -> microtrans::Result<()> {
    let pairs = [
        ("she just left", "she just left"),
        ("the cat sat on a mat", "the cat sat on the mat"),
        ("the the the the the the the", "the cat is on the mat"),
        ("bomb a was it", "it was a bomb"),
    ];
    println!(
        "{:<30} {:<24} {:>6} {:>6} {:>6} {:>6}  reading",
        "candidate", "reference", "B1", "B2", "B3", "B4"
    );
    for (cand, reference) in pairs {
        let s = sentence_bleu(&toks(cand), &[toks(reference)], 4, Smoothing::None)?;
        println!(
            "{cand:<30} {reference:<24} {:>6.3} {:>6.3} {:>6.3} {:>6.3}  {}",
            s.bleu[0],
            s.bleu[1],
            s.bleu[2],
            s.bleu[3],
            interpret(s.bleu[0])?
        );
    }

    let scored: Vec<(Vec<&str>, Vec<Vec<&str>>)> = pairs
        .iter()
        .map(|(c, r)| (toks(c), vec![toks(r)]))
        .collect();
    for smoothing in [Smoothing::None, Smoothing::Epsilon(0.1)] {
        let c = corpus_bleu(&scored, 4, smoothing)?;
        println!(
            "corpus ({smoothing:?}): {:.3?} bp {:.3}",
            c.bleu, c.brevity_penalty
        );
    }
    Ok(())
}
