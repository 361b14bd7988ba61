use crate::corpus::{clean_text, encode, PAD};
use crate::error::Result;
use crate::numerics::layers::argmax;
use crate::seq2seq::model::Seq2SeqModel;

const TRANSLATE_BATCH: usize = 64;

impl Seq2SeqModel {
    /// Greedy translation of one sentence.
    pub fn translate(&self, text: &str) -> Result<String> {
        Ok(self.translate_batch(&[text])?.pop().unwrap_or_default())
    }

    /// Greedy translations, one per input, in order. Each step emits its
    /// argmax token (lowest id on ties); padding is dropped and the rest
    /// joined with single spaces.
    pub fn translate_batch<S: AsRef<str>>(&self, texts: &[S]) -> Result<Vec<String>> {
        let mut out = Vec::with_capacity(texts.len());
        for chunk in texts.chunks(TRANSLATE_BATCH) {
            let cleaned: Vec<String> = chunk
                .iter()
                .map(|t| clean_text(t.as_ref(), self.policy))
                .collect();
            let batch = encode(
                cleaned.iter().map(String::as_str),
                &self.src_vocab,
                self.config.src_max_len,
            )?;
            let dist = self.forward(&batch)?;
            for r in 0..chunk.len() {
                let words: Vec<&str> = (0..dist.steps)
                    .map(|t| argmax(dist.get(r, t)))
                    .filter(|&id| id != PAD)
                    .filter_map(|id| self.tgt_vocab.token(id))
                    .collect();
                out.push(words.join(" "));
            }
        }
        Ok(out)
    }
}
