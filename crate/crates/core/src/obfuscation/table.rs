use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const DEFAULT_TABLE: &str = include_str!("../../data/leet_table.tsv");

/// How a lite-tier substitute follows the case of the letter it replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasePolicy {
    /// Emit the candidate as written for either case.
    Fixed,
    /// Upper-case the candidate for `A-Z`, lower-case it for `a-z`.
    Preserve,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteRule {
    pub candidate: String,
    pub case: CasePolicy,
}

/// Per-letter leet substitutions.
///
/// On disk: UTF-8 lines `LETTER<TAB>cand1<TAB>cand2...`, plus directive
/// lines `!lite<TAB>LETTER<TAB>candidate[<TAB>preserve]` and
/// `!name<TAB>label`. Lines starting with `#` and blank lines are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionTable {
    pub name: String,
    entries: Vec<Vec<String>>,
    lite: Vec<Option<LiteRule>>,
}

/// Letters the lite tier may touch.
pub const LITE_LETTERS: [char; 5] = ['S', 'E', 'I', 'O', 'T'];

fn letter_index(c: char) -> Option<usize> {
    c.is_ascii_alphabetic()
        .then(|| (c.to_ascii_uppercase() as u8 - b'A') as usize)
}

impl SubstitutionTable {
    /// The bundled table.
    pub fn default_table() -> Self {
        Self::parse(DEFAULT_TABLE).expect("bundled leet table is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::from("unnamed");
        let mut entries: Vec<Option<Vec<String>>> = vec![None; 26];
        let mut lite: Vec<Option<LiteRule>> = vec![None; 26];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let bad =
                |msg: String| Error::Config(format!("substitution table line {line_no}: {msg}"));
            let letter_of = |f: &str| -> Result<usize> {
                let mut chars = f.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_uppercase() => Ok(letter_index(c).unwrap()),
                    _ => Err(bad(format!("expected an upper-case letter, found {f:?}"))),
                }
            };
            match fields[0] {
                "!name" => {
                    name = fields
                        .get(1)
                        .ok_or_else(|| bad("!name needs a label".into()))?
                        .to_string();
                }
                "!lite" => {
                    if !(3..=4).contains(&fields.len()) {
                        return Err(bad(
                            "!lite takes LETTER, candidate and an optional case flag".into(),
                        ));
                    }
                    let k = letter_of(fields[1])?;
                    let case = match fields.get(3) {
                        None => CasePolicy::Fixed,
                        Some(&"preserve") => CasePolicy::Preserve,
                        Some(&"fixed") => CasePolicy::Fixed,
                        Some(other) => return Err(bad(format!("unknown case flag {other:?}"))),
                    };
                    if lite[k].is_some() {
                        return Err(bad(format!("duplicate lite rule for {}", fields[1])));
                    }
                    lite[k] = Some(LiteRule {
                        candidate: fields[2].to_string(),
                        case,
                    });
                }
                first => {
                    let k = letter_of(first)?;
                    if entries[k].is_some() {
                        return Err(bad(format!("duplicate entry for {first}")));
                    }
                    entries[k] = Some(fields[1..].iter().map(|s| s.to_string()).collect());
                }
            }
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                e.ok_or_else(|| {
                    Error::Config(format!("no entry for letter {}", (b'A' + k as u8) as char))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let table = Self {
            name,
            entries,
            lite,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != 26 || self.lite.len() != 26 {
            return Err(Error::Config(
                "table must cover exactly the letters A-Z".into(),
            ));
        }
        for (k, cands) in self.entries.iter().enumerate() {
            let letter = (b'A' + k as u8) as char;
            if cands.is_empty() {
                return Err(Error::Config(format!("letter {letter} has no candidates")));
            }
            if cands.iter().any(|c| c.is_empty()) {
                return Err(Error::Config(format!(
                    "letter {letter} has an empty candidate"
                )));
            }
        }
        for (k, rule) in self.lite.iter().enumerate() {
            if let Some(rule) = rule {
                let letter = (b'A' + k as u8) as char;
                if !LITE_LETTERS.contains(&letter) {
                    return Err(Error::Config(format!(
                        "lite rule for {letter}, allowed only for S, E, I, O, T"
                    )));
                }
                if rule.candidate.is_empty() {
                    return Err(Error::Config(format!("empty lite candidate for {letter}")));
                }
            }
        }
        Ok(())
    }

    /// Ordered candidates for an ASCII letter of either case.
    pub fn candidates(&self, letter: char) -> Option<&[String]> {
        letter_index(letter).map(|k| self.entries[k].as_slice())
    }

    pub fn lite_rule(&self, letter: char) -> Option<&LiteRule> {
        letter_index(letter).and_then(|k| self.lite[k].as_ref())
    }

    /// Letters with a lite rule, alphabetical.
    pub fn lite_keys(&self) -> Vec<char> {
        (0..26)
            .filter(|&k| self.lite[k].is_some())
            .map(|k| (b'A' + k as u8) as char)
            .collect()
    }

    /// Serializes in the file format; `parse(to_text())` reproduces the table.
    pub fn to_text(&self) -> String {
        let mut out = format!("!name\t{}\n", self.name);
        for (k, rule) in self.lite.iter().enumerate() {
            if let Some(rule) = rule {
                out.push_str(&format!(
                    "!lite\t{}\t{}",
                    (b'A' + k as u8) as char,
                    rule.candidate
                ));
                if rule.case == CasePolicy::Preserve {
                    out.push_str("\tpreserve");
                }
                out.push('\n');
            }
        }
        for (k, cands) in self.entries.iter().enumerate() {
            out.push((b'A' + k as u8) as char);
            for c in cands {
                out.push('\t');
                out.push_str(c);
            }
            out.push('\n');
        }
        out
    }
}
