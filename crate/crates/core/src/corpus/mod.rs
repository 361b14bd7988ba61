//! Bilingual corpus ingestion, cleaning, splitting and integer encoding.

pub mod clean;
pub mod encode;
pub mod pair;
pub mod split;
pub mod vocab;

pub use clean::{clean, clean_text, Cleaned, CleaningPolicy};
pub use encode::{decode, encode, EncodedBatch};
pub use pair::{load_tsv, parse_tsv, Corpus, SentencePair, TsvColumns};
pub use split::split;
pub use vocab::{build_vocab, tokenize, Vocabulary, PAD, PAD_TOKEN, UNK, UNK_TOKEN};
