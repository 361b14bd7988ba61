//! Leet and mirror-writing obfuscators and the bilingual pair generator
//! built on them.

pub mod generate;
pub mod leet;
pub mod mirror;
pub mod table;

pub use generate::{generate_pairs, obfuscate, variant_seed, ObfuscationMode};
pub use leet::{leet_encode, LeetTier};
pub use mirror::mirror_encode;
pub use table::{CasePolicy, LiteRule, SubstitutionTable, LITE_LETTERS};
