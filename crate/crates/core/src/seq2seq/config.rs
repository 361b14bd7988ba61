use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::lstm::GATE_COUNT;

/// Layer sizes of the encoder-decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub embed_dim: usize,
    pub hidden_size: usize,
    pub src_vocab_size: usize,
    pub tgt_vocab_size: usize,
    pub src_max_len: usize,
    pub tgt_max_len: usize,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("embed_dim", self.embed_dim),
            ("hidden_size", self.hidden_size),
            ("src_vocab_size", self.src_vocab_size),
            ("tgt_vocab_size", self.tgt_vocab_size),
            ("src_max_len", self.src_max_len),
            ("tgt_max_len", self.tgt_max_len),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Number of trainable scalars:
/// `V_s·d + 4(h(d+h)+h) + 4(h(h+h)+h) + (h+1)·V_t`.
pub fn parameter_count(config: &ModelConfig) -> usize {
    let (d, h) = (config.embed_dim, config.hidden_size);
    let embedding = config.src_vocab_size * d;
    let encoder = GATE_COUNT * (h * (d + h) + h);
    let decoder = GATE_COUNT * (h * (h + h) + h);
    let projection = (h + 1) * config.tgt_vocab_size;
    embedding + encoder + decoder + projection
}
