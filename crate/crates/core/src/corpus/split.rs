use crate::corpus::pair::Corpus;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Seeded shuffle, then the first `round(n * train_fraction)` pairs form the
/// training part and the rest the held-out part.
pub fn split(corpus: &Corpus, train_fraction: f64, seed: u64) -> Result<(Corpus, Corpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Argument(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let n = corpus.len();
    let n_train = (n as f64 * train_fraction).round() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Argument(format!(
            "corpus of {n} pairs is too small to split at {train_fraction}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    let pick =
        |idx: &[usize]| corpus.with_pairs(idx.iter().map(|&i| corpus.pairs[i].clone()).collect());
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}
