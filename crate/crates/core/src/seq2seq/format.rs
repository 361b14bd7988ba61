//! `.mtm` model files.
//!
//! ```text
//! offset 0   8 bytes   magic "MICROTM\0"
//! offset 8   1 byte    format version (1)
//! offset 9   u32 LE    header length N
//! offset 13  N bytes   UTF-8 JSON header: config, policy, both vocabularies
//! then       f32 LE    embedding, encoder W, U, b, decoder W, U, b,
//!                      projection, projection bias (row-major each)
//! ```
//!
//! Nothing may follow the last array.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{CleaningPolicy, Vocabulary};
use crate::error::{Error, Result};
use crate::numerics::lstm::LstmParams;
use crate::numerics::matrix::Matrix;
use crate::seq2seq::config::ModelConfig;
use crate::seq2seq::model::Seq2SeqModel;

pub const MAGIC: &[u8; 8] = b"MICROTM\0";
pub const FORMAT_VERSION: u8 = 1;
pub const EXTENSION: &str = "mtm";

#[derive(Serialize, Deserialize)]
struct Header {
    config: ModelConfig,
    policy: CleaningPolicy,
    src_vocab: Vocabulary,
    tgt_vocab: Vocabulary,
}

/// Serializes the model; weights are rounded to `f32`.
pub fn to_bytes(model: &Seq2SeqModel) -> Result<Vec<u8>> {
    let header = Header {
        config: model.config,
        policy: model.policy,
        src_vocab: model.src_vocab.clone(),
        tgt_vocab: model.tgt_vocab.clone(),
    };
    let json = serde_json::to_vec(&header)?;
    let header_len = u32::try_from(json.len())
        .map_err(|_| Error::Config("model header exceeds 4 GiB".into()))?;
    let mut out = Vec::with_capacity(13 + json.len() + 4 * model.stored_parameter_count());
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.extend_from_slice(&header_len.to_le_bytes());
    out.extend_from_slice(&json);
    for arr in model.param_slices() {
        for &x in arr {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::Format {
                offset: self.pos,
                message: format!(
                    "truncated {what}: need {n} bytes, {} remain",
                    self.bytes.len() - self.pos
                ),
            });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn floats(&mut self, n: usize, what: &str) -> Result<Vec<f64>> {
        let raw = self.take(n * 4, what)?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect())
    }

    fn matrix(&mut self, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
        Matrix::from_vec(rows, cols, self.floats(rows * cols, what)?)
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<Seq2SeqModel> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8, "magic")? != MAGIC {
        return Err(Error::Format {
            offset: 0,
            message: "bad magic; not a model file".into(),
        });
    }
    let version = r.take(1, "version")?[0];
    if version != FORMAT_VERSION {
        return Err(Error::Format {
            offset: 8,
            message: format!("unsupported format version {version}"),
        });
    }
    let len_bytes = r.take(4, "header length")?;
    let header_len =
        u32::from_le_bytes([len_bytes[0], len_bytes[1], len_bytes[2], len_bytes[3]]) as usize;
    let header_at = r.pos;
    let header: Header =
        serde_json::from_slice(r.take(header_len, "header")?).map_err(|e| Error::Format {
            offset: header_at,
            message: format!("bad header: {e}"),
        })?;
    let config = header.config;
    config.validate().map_err(|e| Error::Format {
        offset: header_at,
        message: e.to_string(),
    })?;
    if header.src_vocab.len() != config.src_vocab_size
        || header.tgt_vocab.len() != config.tgt_vocab_size
    {
        return Err(Error::Format {
            offset: header_at,
            message: "vocabulary sizes disagree with config".into(),
        });
    }
    let (d, h) = (config.embed_dim, config.hidden_size);
    let embedding = r.matrix(config.src_vocab_size, d, "embedding")?;
    let encoder = LstmParams {
        w: r.matrix(4 * h, d, "encoder W")?,
        u: r.matrix(4 * h, h, "encoder U")?,
        b: r.floats(4 * h, "encoder b")?,
    };
    let decoder = LstmParams {
        w: r.matrix(4 * h, h, "decoder W")?,
        u: r.matrix(4 * h, h, "decoder U")?,
        b: r.floats(4 * h, "decoder b")?,
    };
    let projection = r.matrix(h, config.tgt_vocab_size, "projection")?;
    let projection_bias = r.floats(config.tgt_vocab_size, "projection bias")?;
    if r.pos != bytes.len() {
        return Err(Error::Format {
            offset: r.pos,
            message: format!("{} trailing bytes", bytes.len() - r.pos),
        });
    }
    let model = Seq2SeqModel {
        config,
        embedding,
        encoder,
        decoder,
        projection,
        projection_bias,
        src_vocab: header.src_vocab,
        tgt_vocab: header.tgt_vocab,
        policy: header.policy,
    };
    if model
        .param_slices()
        .iter()
        .any(|s| s.iter().any(|x| !x.is_finite()))
    {
        return Err(Error::Format {
            offset: header_at + header_len,
            message: "non-finite weight".into(),
        });
    }
    Ok(model)
}

impl Seq2SeqModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, to_bytes(self)?)
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes =
            fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        from_bytes(&bytes)
    }

    /// The model as it reads back from disk (weights rounded to `f32`).
    pub fn quantized(&self) -> Self {
        let mut m = self.clone();
        for s in m.param_slices_mut() {
            for x in s.iter_mut() {
                *x = *x as f32 as f64;
            }
        }
        m
    }
}
