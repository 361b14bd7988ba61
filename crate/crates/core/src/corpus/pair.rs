use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub source: String,
    pub target: String,
    /// Remaining columns of the source line (e.g. a Tatoeba attribution), tab-joined.
    pub attribution: Option<String>,
}

impl SentencePair {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            target: target.into(),
            attribution: None,
        }
    }

    /// The same pair translated in the opposite direction.
    pub fn swapped(&self) -> Self {
        Self {
            source: self.target.clone(),
            target: self.source.clone(),
            attribution: self.attribution.clone(),
        }
    }
}

/// Ordered bilingual sentence pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub pairs: Vec<SentencePair>,
    pub source_lang: String,
    pub target_lang: String,
}

impl Corpus {
    pub fn new(
        pairs: Vec<SentencePair>,
        source_lang: impl Into<String>,
        target_lang: impl Into<String>,
    ) -> Self {
        Self {
            pairs,
            source_lang: source_lang.into(),
            target_lang: target_lang.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.source.as_str())
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|p| p.target.as_str())
    }

    /// Same pairs with a subset selected, keeping the language labels.
    pub fn with_pairs(&self, pairs: Vec<SentencePair>) -> Corpus {
        Corpus {
            pairs,
            source_lang: self.source_lang.clone(),
            target_lang: self.target_lang.clone(),
        }
    }

    /// Serializes as `source\ttarget[\tattribution]\n` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            out.push_str(&p.source);
            out.push('\t');
            out.push_str(&p.target);
            if let Some(a) = &p.attribution {
                out.push('\t');
                out.push_str(a);
            }
            out.push('\n');
        }
        out
    }

    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv())
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }
}

/// Options for reading tab-separated pair files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsvColumns {
    pub source: usize,
    pub target: usize,
    /// Skip malformed lines instead of failing.
    pub lenient: bool,
}

impl Default for TsvColumns {
    fn default() -> Self {
        Self {
            source: 0,
            target: 1,
            lenient: false,
        }
    }
}

/// Reads a Tatoeba/Anki style TSV file. Swapping `source` and `target`
/// reverses the translation direction.
pub fn load_tsv(path: impl AsRef<Path>, columns: TsvColumns) -> Result<Corpus> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_tsv(&text, path, columns)
}

pub fn parse_tsv(text: &str, path: &Path, columns: TsvColumns) -> Result<Corpus> {
    if columns.source == columns.target {
        return Err(Error::Argument(
            "source and target columns must differ".into(),
        ));
    }
    let needed = columns.source.max(columns.target) + 1;
    let mut pairs = Vec::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let problem = if fields.len() < needed {
            Some(format!(
                "expected at least {needed} tab-separated fields, found {}",
                fields.len()
            ))
        } else if fields[columns.source].trim().is_empty()
            || fields[columns.target].trim().is_empty()
        {
            Some("empty source or target field".to_string())
        } else {
            None
        };
        if let Some(message) = problem {
            if columns.lenient {
                continue;
            }
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message,
            });
        }
        let rest: Vec<&str> = fields
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != columns.source && *i != columns.target)
            .map(|(_, f)| *f)
            .collect();
        pairs.push(SentencePair {
            source: fields[columns.source].to_string(),
            target: fields[columns.target].to_string(),
            attribution: if rest.is_empty() {
                None
            } else {
                Some(rest.join("\t"))
            },
        });
    }
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (source_lang, target_lang) = if columns.source < columns.target {
        ("col0", "col1")
    } else {
        ("col1", "col0")
    };
    Ok(Corpus::new(pairs, source_lang, target_lang))
}
