pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod numerics;
pub mod obfuscation;
pub mod phrasebook;
pub mod rng;
pub mod seq2seq;

pub use error::{Error, Result};
