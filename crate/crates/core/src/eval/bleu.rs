//! BLEU with clipped n-gram precision and brevity penalty.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

/// Exact clipped-match fraction `matched / total`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Precision {
    pub matched: u64,
    pub total: u64,
}

impl Precision {
    pub fn value(self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.matched as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", content = "epsilon", rename_all = "lowercase")]
pub enum Smoothing {
    /// Any zero precision zeroes every cumulative score that includes it.
    #[default]
    None,
    /// Zero match counts are replaced by this value before the geometric mean.
    Epsilon(f64),
}

impl Smoothing {
    pub const DEFAULT_EPSILON: f64 = 0.1;
}

impl std::str::FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Smoothing::None),
            "epsilon" => Ok(Smoothing::Epsilon(Smoothing::DEFAULT_EPSILON)),
            other => Err(Error::Argument(format!(
                "unknown smoothing {other:?} (none, epsilon)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BleuScore {
    /// Modified precisions p1..p4.
    pub precisions: [f64; MAX_ORDER],
    /// Cumulative BLEU-1..BLEU-4; orders above `max_n` are zero.
    pub bleu: [f64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub cand_len: usize,
    pub ref_len: usize,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts
                .entry(w.iter().map(AsRef::as_ref).collect())
                .or_default() += 1;
        }
    }
    counts
}

/// Candidate n-gram counts clipped to their largest count in any single
/// reference. A candidate shorter than `n` gives `0/0`.
pub fn modified_precision<S: AsRef<str>, R: AsRef<[S]>>(
    candidate: &[S],
    references: &[R],
    n: usize,
) -> Precision {
    assert!(n >= 1, "n-gram order starts at 1");
    let cand = ngram_counts(candidate, n);
    let mut max_ref: HashMap<Vec<&str>, u64> = HashMap::new();
    for r in references {
        for (g, c) in ngram_counts(r.as_ref(), n) {
            let e = max_ref.entry(g).or_default();
            *e = (*e).max(c);
        }
    }
    let matched = cand
        .iter()
        .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
        .sum();
    Precision {
        matched,
        total: candidate.len().saturating_sub(n - 1) as u64,
    }
}

/// Length of the reference closest to `cand_len` (shorter wins ties).
pub fn closest_ref_len(cand_len: usize, ref_lens: impl IntoIterator<Item = usize>) -> usize {
    ref_lens
        .into_iter()
        .min_by_key(|&r| (r.abs_diff(cand_len), r))
        .unwrap_or(0)
}

/// `1` when the candidate is longer than the reference, else
/// `exp(1 - r/c)`; zero for an empty candidate.
pub fn brevity_penalty(cand_len: usize, ref_len: usize) -> f64 {
    if cand_len == 0 {
        0.0
    } else if cand_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / cand_len as f64).exp()
    }
}

/// Sufficient statistics; sums over sentences give corpus BLEU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BleuStats {
    pub precisions: [Precision; MAX_ORDER],
    pub cand_len: usize,
    pub ref_len: usize,
}

impl BleuStats {
    pub fn of<S: AsRef<str>, R: AsRef<[S]>>(candidate: &[S], references: &[R]) -> Self {
        let mut precisions = [Precision::default(); MAX_ORDER];
        for (k, p) in precisions.iter_mut().enumerate() {
            *p = modified_precision(candidate, references, k + 1);
        }
        Self {
            precisions,
            cand_len: candidate.len(),
            ref_len: closest_ref_len(candidate.len(), references.iter().map(|r| r.as_ref().len())),
        }
    }

    pub fn add(&mut self, other: &BleuStats) {
        for (a, b) in self.precisions.iter_mut().zip(&other.precisions) {
            a.matched += b.matched;
            a.total += b.total;
        }
        self.cand_len += other.cand_len;
        self.ref_len += other.ref_len;
    }

    pub fn score(&self, max_n: usize, smoothing: Smoothing) -> Result<BleuScore> {
        check_order(max_n)?;
        let mut out = BleuScore {
            precisions: [0.0; MAX_ORDER],
            bleu: [0.0; MAX_ORDER],
            brevity_penalty: brevity_penalty(self.cand_len, self.ref_len),
            cand_len: self.cand_len,
            ref_len: self.ref_len,
        };
        for k in 0..MAX_ORDER {
            out.precisions[k] = self.precisions[k].value();
        }
        if self.cand_len == 0 {
            return Ok(out);
        }
        let mut log_sum = 0.0;
        let mut zeroed = false;
        for k in 0..max_n {
            let p = self.precisions[k];
            let value = match smoothing {
                _ if p.matched > 0 => p.matched as f64 / p.total as f64,
                Smoothing::None => {
                    zeroed = true;
                    0.0
                }
                Smoothing::Epsilon(eps) => eps / p.total.max(1) as f64,
            };
            if !zeroed {
                log_sum += value.ln();
            }
            out.bleu[k] = if zeroed {
                0.0
            } else {
                (out.brevity_penalty * (log_sum / (k + 1) as f64).exp()).min(1.0)
            };
        }
        Ok(out)
    }
}

fn check_order(max_n: usize) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&max_n) {
        return Err(Error::Argument(format!("max_n {max_n} outside 1..=4")));
    }
    Ok(())
}

pub fn sentence_bleu<S: AsRef<str>, R: AsRef<[S]>>(
    candidate: &[S],
    references: &[R],
    max_n: usize,
    smoothing: Smoothing,
) -> Result<BleuScore> {
    if references.is_empty() {
        return Err(Error::Argument("at least one reference is required".into()));
    }
    BleuStats::of(candidate, references).score(max_n, smoothing)
}

/// Micro-averaged BLEU: clipped counts and lengths are summed over all
/// pairs before the geometric mean.
pub fn corpus_bleu<S, R, Rs>(
    pairs: &[(Vec<S>, Rs)],
    max_n: usize,
    smoothing: Smoothing,
) -> Result<BleuScore>
where
    S: AsRef<str>,
    R: AsRef<[S]>,
    Rs: AsRef<[R]>,
{
    if pairs.is_empty() {
        return Err(Error::Argument(
            "corpus BLEU needs at least one pair".into(),
        ));
    }
    let mut total = BleuStats::default();
    for (cand, refs) in pairs {
        if refs.as_ref().is_empty() {
            return Err(Error::Argument("at least one reference is required".into()));
        }
        total.add(&BleuStats::of(cand, refs.as_ref()));
    }
    total.score(max_n, smoothing)
}
