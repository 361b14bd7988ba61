use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corpus::EncodedBatch;
use crate::error::{Error, Result};
use crate::numerics::adam::{Adam, AdamConfig};
use crate::numerics::layers::cross_entropy;
use crate::rng::SplitMix64;
use crate::seq2seq::model::{Gradients, Seq2SeqModel};

/// Source and target rows of an encoded parallel corpus; row `r` of each
/// belong together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedPairs {
    pub src: EncodedBatch,
    pub tgt: EncodedBatch,
}

impl EncodedPairs {
    pub fn new(src: EncodedBatch, tgt: EncodedBatch) -> Result<Self> {
        if src.batch_size() != tgt.batch_size() {
            return Err(Error::Shape(format!(
                "{} source rows vs {} target rows",
                src.batch_size(),
                tgt.batch_size()
            )));
        }
        Ok(Self { src, tgt })
    }

    pub fn len(&self) -> usize {
        self.src.batch_size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn select(&self, rows: &[usize]) -> EncodedPairs {
        EncodedPairs {
            src: self.src.select(rows),
            tgt: self.tgt.select(rows),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub validation_fraction: f64,
    /// Written each time the validation loss improves.
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        Self {
            epochs: 30,
            batch_size: 64,
            learning_rate: 1e-3,
            seed: 0,
            validation_fraction: 0.1,
            checkpoint_path: None,
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Argument("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Argument("batch size must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(Error::Argument(format!(
                "validation fraction {} outside [0, 1)",
                self.validation_fraction
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Argument("learning rate must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose weights were last checkpointed.
    pub best_epoch: Option<usize>,
}

impl TrainingHistory {
    pub fn final_train_loss(&self) -> Option<f64> {
        self.epochs.last().map(|e| e.train_loss)
    }

    pub fn final_val_loss(&self) -> Option<f64> {
        self.epochs.last().and_then(|e| e.val_loss)
    }

    /// Losses only, for reproducibility comparisons.
    pub fn losses(&self) -> Vec<(f64, Option<f64>)> {
        self.epochs
            .iter()
            .map(|e| (e.train_loss, e.val_loss))
            .collect()
    }
}

/// Mean cross-entropy over every target position of `data` (padding
/// included: the decoder must learn to emit it after the sentence ends),
/// plus gradients of that mean.
pub fn loss_and_gradients(model: &Seq2SeqModel, data: &EncodedPairs) -> Result<(f64, Gradients)> {
    let mut grads = Gradients::zeros(&model.config);
    let loss = accumulate_batch(model, data, &mut grads)?;
    Ok((loss, grads))
}

fn accumulate_batch(
    model: &Seq2SeqModel,
    data: &EncodedPairs,
    grads: &mut Gradients,
) -> Result<f64> {
    if data.tgt.max_len != model.config.tgt_max_len {
        return Err(Error::Shape(format!(
            "targets padded to {}, model decodes {} steps",
            data.tgt.max_len, model.config.tgt_max_len
        )));
    }
    let (dist, cache) = model.forward_cached(&data.src)?;
    let targets = data.tgt.time_major();
    let mask = vec![true; targets.len()];
    let (loss, grad_logits) = cross_entropy(dist.time_major(), &targets, &mask)?;
    model.backward(&cache, &grad_logits, grads)?;
    Ok(loss)
}

/// Mean loss without gradients, evaluated in batches.
pub fn evaluate_loss(model: &Seq2SeqModel, data: &EncodedPairs, batch_size: usize) -> Result<f64> {
    let mut total = 0.0;
    for start in (0..data.len()).step_by(batch_size.max(1)) {
        let rows: Vec<usize> = (start..(start + batch_size).min(data.len())).collect();
        let part = data.select(&rows);
        let dist = model.forward(&part.src)?;
        let targets = part.tgt.time_major();
        let mask = vec![true; targets.len()];
        let (loss, _) = cross_entropy(dist.time_major(), &targets, &mask)?;
        total += loss * rows.len() as f64;
    }
    Ok(total / data.len() as f64)
}

/// Minibatch Adam training.
///
/// A seeded shuffle holds out `validation_fraction` of the rows; every
/// epoch reshuffles the rest with a stream derived from the seed and the
/// epoch number. `observer` sees each epoch record as it completes.
pub fn train<F>(
    model: &mut Seq2SeqModel,
    data: &EncodedPairs,
    config: &TrainingConfig,
    mut observer: F,
) -> Result<TrainingHistory>
where
    F: FnMut(&EpochRecord),
{
    config.validate()?;
    model.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<usize> = (0..data.len()).collect();
    SplitMix64::derive(config.seed, u64::MAX).shuffle(&mut order);
    let n_val = if data.len() > 1 {
        ((data.len() as f64 * config.validation_fraction).round() as usize).min(data.len() - 1)
    } else {
        0
    };
    let validation = (n_val > 0).then(|| data.select(&order[..n_val]));
    let mut train_rows = order[n_val..].to_vec();

    let sizes: Vec<usize> = model.param_slices().iter().map(|s| s.len()).collect();
    let mut adam = Adam::new(
        AdamConfig {
            learning_rate: config.learning_rate,
            ..AdamConfig::default()
        },
        &sizes,
    );
    let mut history = TrainingHistory::default();
    let mut best = f64::INFINITY;

    for epoch in 1..=config.epochs {
        let started = Instant::now();
        SplitMix64::derive(config.seed, epoch as u64).shuffle(&mut train_rows);
        let mut weighted = 0.0;
        for chunk in train_rows.chunks(config.batch_size) {
            let batch = data.select(chunk);
            let mut grads = Gradients::zeros(&model.config);
            let loss = accumulate_batch(model, &batch, &mut grads)?;
            if !loss.is_finite() || !grads.is_finite() {
                return Err(Error::NonFinite(format!(
                    "training loss {loss} at epoch {epoch}, step {}",
                    adam.steps_taken() + 1
                )));
            }
            adam.step(model.param_slices_mut(), grads.slices())?;
            weighted += loss * chunk.len() as f64;
        }
        let train_loss = weighted / train_rows.len() as f64;
        let val_loss = match &validation {
            Some(v) => Some(evaluate_loss(model, v, config.batch_size)?),
            None => None,
        };
        if let Some(v) = val_loss {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!(
                    "validation loss {v} at epoch {epoch}"
                )));
            }
        }
        let monitored = val_loss.unwrap_or(train_loss);
        if monitored < best {
            best = monitored;
            history.best_epoch = Some(epoch);
            if let Some(path) = &config.checkpoint_path {
                model.save(path)?;
            }
        }
        let record = EpochRecord {
            epoch,
            train_loss,
            val_loss,
            seconds: started.elapsed().as_secs_f64(),
        };
        observer(&record);
        history.epochs.push(record);
    }
    Ok(history)
}
