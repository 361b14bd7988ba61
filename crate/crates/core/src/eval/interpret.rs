//! Qualitative reading of a BLEU score.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seven bins that partition `[0, 1]`, ordered worst to best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Interpretation {
    Useless,
    HardToGetGist,
    GistClearWithErrors,
    UnderstandableToGood,
    HighQuality,
    Fluent,
    MayExceedHuman,
}

impl Interpretation {
    pub const ALL: [Interpretation; 7] = [
        Interpretation::Useless,
        Interpretation::HardToGetGist,
        Interpretation::GistClearWithErrors,
        Interpretation::UnderstandableToGood,
        Interpretation::HighQuality,
        Interpretation::Fluent,
        Interpretation::MayExceedHuman,
    ];

    /// Lower bounds of each bin; every bin but the last is half-open.
    const LOWER: [f64; 7] = [0.0, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60];

    /// `[lo, hi)` for all bins except `MayExceedHuman`, which is `[0.6, 1]`.
    pub fn bounds(self) -> (f64, f64) {
        let i = self as usize;
        (
            Self::LOWER[i],
            Self::LOWER.get(i + 1).copied().unwrap_or(1.0),
        )
    }

    /// Human-readable label as used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Interpretation::Useless => "Useless",
            Interpretation::HardToGetGist => "Hard to Get the Gist",
            Interpretation::GistClearWithErrors => "Gist Clear, Grammatical Errors",
            Interpretation::UnderstandableToGood => "Understandable to Good",
            Interpretation::HighQuality => "High Quality",
            Interpretation::Fluent => "Fluent",
            Interpretation::MayExceedHuman => "May Exceed Human",
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn interpret(score: f64) -> Result<Interpretation> {
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::Argument(format!(
            "BLEU score {score} outside [0, 1]"
        )));
    }
    let idx = Interpretation::LOWER
        .iter()
        .rposition(|&lo| score >= lo)
        .unwrap_or(0);
    Ok(Interpretation::ALL[idx])
}
