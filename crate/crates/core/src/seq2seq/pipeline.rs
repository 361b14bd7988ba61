use serde::{Deserialize, Serialize};

use crate::corpus::{build_vocab, clean, encode, tokenize, CleaningPolicy, Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::seq2seq::config::ModelConfig;
use crate::seq2seq::model::Seq2SeqModel;
use crate::seq2seq::train::{train, EncodedPairs, EpochRecord, TrainingConfig, TrainingHistory};

/// Longest sequence the model is sized for unless overridden.
pub const MAX_LEN_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOptions {
    pub embed_dim: usize,
    pub hidden_size: usize,
    /// Vocabulary cap per side, reserved tokens included.
    pub max_vocab: Option<usize>,
    /// Upper bound on the sequence lengths derived from the corpus.
    pub max_len_cap: usize,
    pub policy: CleaningPolicy,
}

impl Default for ModelOptions {
    fn default() -> Self {
        Self {
            embed_dim: 256,
            hidden_size: 256,
            max_vocab: None,
            max_len_cap: MAX_LEN_CAP,
            policy: CleaningPolicy::Natural,
        }
    }
}

/// A cleaned corpus with its vocabularies and encoded rows.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub corpus: Corpus,
    pub dropped: usize,
    pub config: ModelConfig,
    pub src_vocab: Vocabulary,
    pub tgt_vocab: Vocabulary,
    pub encoded: EncodedPairs,
}

fn longest<'a>(texts: impl Iterator<Item = &'a str>) -> usize {
    texts.map(|t| tokenize(t).count()).max().unwrap_or(0)
}

/// Cleans `corpus`, builds both vocabularies and sizes the model from the
/// longest cleaned sentence on each side (capped).
pub fn prepare(corpus: &Corpus, options: &ModelOptions) -> Result<PreparedData> {
    let cleaned = clean(corpus, options.policy);
    let corpus = cleaned.corpus;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let src_vocab = build_vocab(corpus.sources(), options.max_vocab);
    let tgt_vocab = build_vocab(corpus.targets(), options.max_vocab);
    let cap = options.max_len_cap.max(1);
    let src_max_len = longest(corpus.sources()).clamp(1, cap);
    let tgt_max_len = longest(corpus.targets()).clamp(1, cap);
    let config = ModelConfig {
        embed_dim: options.embed_dim,
        hidden_size: options.hidden_size,
        src_vocab_size: src_vocab.len(),
        tgt_vocab_size: tgt_vocab.len(),
        src_max_len,
        tgt_max_len,
    };
    config.validate()?;
    let encoded = EncodedPairs::new(
        encode(corpus.sources(), &src_vocab, src_max_len)?,
        encode(corpus.targets(), &tgt_vocab, tgt_max_len)?,
    )?;
    Ok(PreparedData {
        corpus,
        dropped: cleaned.dropped,
        config,
        src_vocab,
        tgt_vocab,
        encoded,
    })
}

impl PreparedData {
    /// Untrained model initialized from `seed`.
    pub fn model(&self, policy: CleaningPolicy, seed: u64) -> Result<Seq2SeqModel> {
        Seq2SeqModel::new(
            self.config,
            self.src_vocab.clone(),
            self.tgt_vocab.clone(),
            policy,
            seed,
        )
    }
}

/// Prepares `corpus`, initializes a model from `training.seed` and trains it.
pub fn fit<F>(
    corpus: &Corpus,
    options: &ModelOptions,
    training: &TrainingConfig,
    observer: F,
) -> Result<(Seq2SeqModel, TrainingHistory)>
where
    F: FnMut(&EpochRecord),
{
    training.validate()?;
    let data = prepare(corpus, options)?;
    let mut model = data.model(options.policy, training.seed)?;
    let history = train(&mut model, &data.encoded, training, observer)?;
    Ok((model, history))
}
