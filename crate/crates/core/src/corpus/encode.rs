use crate::corpus::vocab::{tokenize, Vocabulary, PAD};
use crate::error::{Error, Result};

/// Right-padded id matrix `(batch, max_len)` stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedBatch {
    pub ids: Vec<usize>,
    pub lengths: Vec<usize>,
    pub max_len: usize,
}

impl EncodedBatch {
    pub fn batch_size(&self) -> usize {
        self.lengths.len()
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.ids[r * self.max_len..(r + 1) * self.max_len]
    }

    /// New batch with the given rows, in order.
    pub fn select(&self, rows: &[usize]) -> EncodedBatch {
        let mut ids = Vec::with_capacity(rows.len() * self.max_len);
        let mut lengths = Vec::with_capacity(rows.len());
        for &r in rows {
            ids.extend_from_slice(self.row(r));
            lengths.push(self.lengths[r]);
        }
        EncodedBatch {
            ids,
            lengths,
            max_len: self.max_len,
        }
    }

    /// Time-major ids: position `t * batch + r` holds row `r`, step `t`.
    pub fn time_major(&self) -> Vec<usize> {
        let b = self.batch_size();
        let mut out = vec![PAD; b * self.max_len];
        for r in 0..b {
            for (t, &id) in self.row(r).iter().enumerate() {
                out[t * b + r] = id;
            }
        }
        out
    }
}

/// Maps tokens to ids (unknown → `UNK`), truncates at `max_len` and pads.
pub fn encode<'a, I>(texts: I, vocab: &Vocabulary, max_len: usize) -> Result<EncodedBatch>
where
    I: IntoIterator<Item = &'a str>,
{
    if max_len == 0 {
        return Err(Error::Argument("max_len must be at least 1".into()));
    }
    let mut ids = Vec::new();
    let mut lengths = Vec::new();
    for text in texts {
        let start = ids.len();
        ids.extend(tokenize(text).take(max_len).map(|t| vocab.id(t)));
        lengths.push(ids.len() - start);
        ids.resize(start + max_len, PAD);
    }
    Ok(EncodedBatch {
        ids,
        lengths,
        max_len,
    })
}

/// Tokens of one encoded row with padding removed.
pub fn decode<'v>(ids: &[usize], vocab: &'v Vocabulary) -> Vec<&'v str> {
    ids.iter()
        .filter(|&&id| id != PAD)
        .filter_map(|&id| vocab.token(id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::vocab::{build_vocab, UNK};

    fn vocab() -> Vocabulary {
        build_vocab(["a b", "b c"], None)
    }

    #[test]
    fn pads_on_the_right() {
        let e = encode(["b a"], &vocab(), 4).unwrap();
        assert_eq!(e.ids, vec![2, 3, 0, 0]);
        assert_eq!(e.lengths, vec![2]);
    }

    #[test]
    fn empty_text_is_all_pad() {
        let e = encode([""], &vocab(), 4).unwrap();
        assert_eq!(e.ids, vec![0; 4]);
    }

    #[test]
    fn unknown_tokens_become_unk_and_long_rows_truncate() {
        let e = encode(["zzz a b c a"], &vocab(), 3).unwrap();
        assert_eq!(e.ids, vec![UNK, 3, 2]);
        assert_eq!(e.lengths, vec![3]);
    }

    #[test]
    fn zero_max_len_is_rejected() {
        assert!(encode(["a"], &vocab(), 0).is_err());
    }

    #[test]
    fn time_major_transposes() {
        let e = encode(["a b", "c"], &vocab(), 2).unwrap();
        assert_eq!(e.time_major(), vec![3, 4, 2, 0]);
    }
}
