use std::fmt;
use std::str::FromStr;

use crate::corpus::{Corpus, SentencePair};
use crate::error::{Error, Result};
use crate::obfuscation::leet::{leet_encode, LeetTier};
use crate::obfuscation::mirror::mirror_encode;
use crate::obfuscation::table::SubstitutionTable;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObfuscationMode {
    Mirror,
    Leet(LeetTier),
}

impl ObfuscationMode {
    pub fn is_deterministic(self) -> bool {
        match self {
            ObfuscationMode::Mirror => true,
            ObfuscationMode::Leet(tier) => tier.is_deterministic(),
        }
    }

    /// Label used for the obfuscated side of generated corpora.
    pub fn label(self) -> &'static str {
        match self {
            ObfuscationMode::Mirror => "mirror",
            ObfuscationMode::Leet(LeetTier::Lite) => "leet-lite",
            ObfuscationMode::Leet(LeetTier::Mid) => "leet-mid",
            ObfuscationMode::Leet(LeetTier::Hard) => "leet-hard",
        }
    }
}

impl fmt::Display for ObfuscationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl serde::Serialize for ObfuscationMode {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

impl FromStr for ObfuscationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mirror" => Ok(ObfuscationMode::Mirror),
            "leet-lite" => Ok(ObfuscationMode::Leet(LeetTier::Lite)),
            "leet-mid" => Ok(ObfuscationMode::Leet(LeetTier::Mid)),
            "leet-hard" => Ok(ObfuscationMode::Leet(LeetTier::Hard)),
            other => Err(Error::Argument(format!(
                "unknown mode {other:?} (mirror, leet-lite, leet-mid, leet-hard)"
            ))),
        }
    }
}

/// Obfuscates one sentence. `seed` is only consulted by the hard tier.
pub fn obfuscate(
    text: &str,
    mode: ObfuscationMode,
    table: &SubstitutionTable,
    seed: u64,
) -> Result<String> {
    match mode {
        ObfuscationMode::Mirror => Ok(mirror_encode(text)),
        ObfuscationMode::Leet(tier) => leet_encode(text, tier, table, Some(seed)),
    }
}

/// Seed for variant `variant` of sentence `index`. Depends only on the
/// sentence's position, so any partition of the work gives the same corpus.
pub fn variant_seed(seed: u64, index: usize, variant: usize) -> u64 {
    let sentence_seed = SplitMix64::derive(seed, index as u64).next_u64();
    SplitMix64::derive(sentence_seed, variant as u64).next_u64()
}

/// Builds `(obfuscated, english)` pairs: `variants_per_sentence` per
/// sentence, obfuscated text as the source.
pub fn generate_pairs<S: AsRef<str>>(
    sentences: &[S],
    mode: ObfuscationMode,
    table: &SubstitutionTable,
    variants_per_sentence: usize,
    seed: u64,
) -> Result<Corpus> {
    if variants_per_sentence == 0 {
        return Err(Error::Argument("variants must be at least 1".into()));
    }
    if variants_per_sentence > 1 && mode.is_deterministic() {
        return Err(Error::Argument("variants>1 requires leet-hard".into()));
    }
    table.validate()?;
    let mut pairs = Vec::with_capacity(sentences.len() * variants_per_sentence);
    for (index, sentence) in sentences.iter().enumerate() {
        let english = sentence.as_ref();
        for variant in 0..variants_per_sentence {
            let source = obfuscate(english, mode, table, variant_seed(seed, index, variant))?;
            pairs.push(SentencePair::new(source, english));
        }
    }
    Ok(Corpus::new(pairs, mode.label(), "en"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_pairs_reverse_their_target() {
        let table = SubstitutionTable::default_table();
        let c = generate_pairs(
            &["It was a bomb", "She just left", "Shoot me"],
            ObfuscationMode::Mirror,
            &table,
            1,
            0,
        )
        .unwrap();
        assert_eq!(c.len(), 3);
        for p in &c.pairs {
            assert_eq!(p.source, mirror_encode(&p.target));
        }
        assert_eq!(c.source_lang, "mirror");
    }

    #[test]
    fn variants_need_the_hard_tier() {
        let table = SubstitutionTable::default_table();
        let err = generate_pairs(&["a"], ObfuscationMode::Leet(LeetTier::Lite), &table, 7, 0)
            .unwrap_err();
        assert!(err.to_string().contains("variants>1 requires leet-hard"));
        assert!(generate_pairs(&["a"], ObfuscationMode::Mirror, &table, 0, 0).is_err());
    }

    #[test]
    fn hard_variants_multiply_pairs() {
        let table = SubstitutionTable::default_table();
        let c = generate_pairs(
            &["one", "two", "three"],
            ObfuscationMode::Leet(LeetTier::Hard),
            &table,
            7,
            1,
        )
        .unwrap();
        assert_eq!(c.len(), 21);
        assert!(c.pairs[..7].iter().all(|p| p.target == "one"));
    }

    #[test]
    fn generation_is_independent_of_partitioning() {
        let table = SubstitutionTable::default_table();
        let sentences = ["alpha beta", "gamma", "delta epsilon"];
        let whole = generate_pairs(
            &sentences,
            ObfuscationMode::Leet(LeetTier::Hard),
            &table,
            2,
            5,
        )
        .unwrap();
        let last = obfuscate(
            "delta epsilon",
            ObfuscationMode::Leet(LeetTier::Hard),
            &table,
            variant_seed(5, 2, 1),
        )
        .unwrap();
        assert_eq!(whole.pairs[5].source, last);
    }

    #[test]
    fn mode_names_round_trip() {
        for name in ["mirror", "leet-lite", "leet-mid", "leet-hard"] {
            assert_eq!(name.parse::<ObfuscationMode>().unwrap().to_string(), name);
        }
        assert!("leet".parse::<ObfuscationMode>().is_err());
    }
}
