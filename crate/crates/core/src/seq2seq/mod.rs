//! Encoder-decoder translator: architecture, training, greedy decoding and
//! the `.mtm` file format.

pub mod config;
pub mod format;
pub mod model;
pub mod pipeline;
pub mod train;
mod translate;

pub use config::{parameter_count, ModelConfig};
pub use model::{Distributions, ForwardCache, Gradients, Seq2SeqModel};
pub use pipeline::{fit, prepare, ModelOptions, PreparedData, MAX_LEN_CAP};
pub use train::{
    evaluate_loss, loss_and_gradients, train, EncodedPairs, EpochRecord, TrainingConfig,
    TrainingHistory,
};
