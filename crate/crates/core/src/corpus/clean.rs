use serde::{Deserialize, Serialize};

use crate::corpus::pair::{Corpus, SentencePair};

/// How sentence text is normalized before tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CleaningPolicy {
    /// Case-fold, strip punctuation, drop non-printable characters.
    Natural,
    /// Keep case and every symbol; leet spellings are made of them.
    Obfuscated,
}

impl CleaningPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            CleaningPolicy::Natural => "natural",
            CleaningPolicy::Obfuscated => "obfuscated",
        }
    }
}

impl std::str::FromStr for CleaningPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "natural" => Ok(CleaningPolicy::Natural),
            "obfuscated" => Ok(CleaningPolicy::Obfuscated),
            other => Err(format!("unknown cleaning policy {other:?}")),
        }
    }
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '¡' | '¿'
                | '«'
                | '»'
                | '‘'
                | '’'
                | '‚'
                | '“'
                | '”'
                | '„'
                | '…'
                | '–'
                | '—'
                | '‹'
                | '›'
                | '、'
                | '。'
                | '，'
                | '！'
                | '？'
                | '：'
                | '；'
                | '「'
                | '」'
                | '『'
                | '』'
                | '（'
                | '）'
                | '·'
                | '،'
                | '؟'
                | '״'
                | '׳'
        )
}

/// Normalizes a single sentence; all whitespace runs become one space and
/// the ends are trimmed.
pub fn clean_text(text: &str, policy: CleaningPolicy) -> String {
    let mut kept = String::with_capacity(text.len());
    for c in text.chars() {
        if c.is_whitespace() {
            kept.push(' ');
        } else if c.is_control() {
            continue;
        } else if policy == CleaningPolicy::Natural {
            if is_punctuation(c) {
                continue;
            }
            kept.extend(c.to_lowercase());
        } else {
            kept.push(c);
        }
    }
    kept.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cleaned {
    pub corpus: Corpus,
    /// Pairs removed because a side became empty.
    pub dropped: usize,
}

/// Applies `policy` to both sides of every pair.
pub fn clean(corpus: &Corpus, policy: CleaningPolicy) -> Cleaned {
    let mut dropped = 0;
    let mut pairs = Vec::with_capacity(corpus.len());
    for p in &corpus.pairs {
        let source = clean_text(&p.source, policy);
        let target = clean_text(&p.target, policy);
        if source.is_empty() || target.is_empty() {
            dropped += 1;
            continue;
        }
        pairs.push(SentencePair {
            source,
            target,
            attribution: p.attribution.clone(),
        });
    }
    Cleaned {
        corpus: corpus.with_pairs(pairs),
        dropped,
    }
}
