use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::obfuscation::table::{CasePolicy, SubstitutionTable};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeetTier {
    /// Designated substitutes for S, E, I, O, T only.
    Lite,
    /// First candidate for every letter.
    Mid,
    /// Seeded uniform choice among all candidates, per letter occurrence.
    Hard,
}

impl LeetTier {
    pub fn is_deterministic(self) -> bool {
        self != LeetTier::Hard
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LeetTier::Lite => "lite",
            LeetTier::Mid => "mid",
            LeetTier::Hard => "hard",
        }
    }
}

impl FromStr for LeetTier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lite" => Ok(LeetTier::Lite),
            "mid" | "medium" => Ok(LeetTier::Mid),
            "hard" => Ok(LeetTier::Hard),
            other => Err(Error::Argument(format!("unknown leet tier {other:?}"))),
        }
    }
}

/// Rewrites the ASCII letters of `text`; everything else passes through.
/// `Hard` requires a seed and draws once per letter, left to right.
pub fn leet_encode(
    text: &str,
    tier: LeetTier,
    table: &SubstitutionTable,
    seed: Option<u64>,
) -> Result<String> {
    table.validate()?;
    let mut out = String::with_capacity(text.len() * 2);
    match tier {
        LeetTier::Lite => {
            for c in text.chars() {
                match table.lite_rule(c) {
                    Some(rule) => match rule.case {
                        CasePolicy::Fixed => out.push_str(&rule.candidate),
                        CasePolicy::Preserve if c.is_ascii_uppercase() => {
                            out.extend(rule.candidate.chars().flat_map(char::to_uppercase))
                        }
                        CasePolicy::Preserve => {
                            out.extend(rule.candidate.chars().flat_map(char::to_lowercase))
                        }
                    },
                    None => out.push(c),
                }
            }
        }
        LeetTier::Mid => {
            for c in text.chars() {
                match table.candidates(c) {
                    Some(cands) => out.push_str(&cands[0]),
                    None => out.push(c),
                }
            }
        }
        LeetTier::Hard => {
            let seed = seed.ok_or_else(|| Error::Argument("hard tier needs a seed".into()))?;
            let mut rng = SplitMix64::new(seed);
            for c in text.chars() {
                match table.candidates(c) {
                    Some(cands) => out.push_str(&cands[rng.below(cands.len())]),
                    None => out.push(c),
                }
            }
        }
    }
    Ok(out)
}
