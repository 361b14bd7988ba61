//! Repeat-context encoder-decoder.
//!
//! Source tokens are embedded and run through the encoder LSTM; the final
//! encoder hidden state is fed as the input of every decoder step, and a
//! shared projection plus softmax turns each decoder state into a
//! distribution over target tokens. Padding after a source sentence's true
//! length leaves the encoder state untouched, so the context vector does not
//! depend on how much padding a batch carries.

use crate::corpus::{CleaningPolicy, EncodedBatch, Vocabulary};
use crate::error::{Error, Result};
use crate::numerics::init::glorot_bound;
use crate::numerics::layers::{embedding_backward, embedding_forward, softmax_rows};
use crate::numerics::lstm::{
    activate, activate_backward, LstmParams, LstmState, StepCache, GATE_COUNT,
};
use crate::numerics::matrix::{gemm, Matrix, Trans};
use crate::rng::SplitMix64;
use crate::seq2seq::config::{parameter_count, ModelConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Seq2SeqModel {
    pub config: ModelConfig,
    /// `(V_s, d)`.
    pub embedding: Matrix,
    pub encoder: LstmParams,
    pub decoder: LstmParams,
    /// `(h, V_t)`.
    pub projection: Matrix,
    pub projection_bias: Vec<f64>,
    pub src_vocab: Vocabulary,
    pub tgt_vocab: Vocabulary,
    /// Normalization applied to text before encoding and scoring.
    pub policy: CleaningPolicy,
}

/// Gradient buffers shaped like the model's trainable arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub embedding: Matrix,
    pub encoder: LstmParams,
    pub decoder: LstmParams,
    pub projection: Matrix,
    pub projection_bias: Vec<f64>,
}

impl Gradients {
    pub fn zeros(config: &ModelConfig) -> Self {
        let (d, h) = (config.embed_dim, config.hidden_size);
        Self {
            embedding: Matrix::zeros(config.src_vocab_size, d),
            encoder: LstmParams::zeros(d, h),
            decoder: LstmParams::zeros(h, h),
            projection: Matrix::zeros(h, config.tgt_vocab_size),
            projection_bias: vec![0.0; config.tgt_vocab_size],
        }
    }

    /// Arrays in serialization order.
    pub fn slices(&self) -> Vec<&[f64]> {
        vec![
            self.embedding.as_slice(),
            self.encoder.w.as_slice(),
            self.encoder.u.as_slice(),
            &self.encoder.b,
            self.decoder.w.as_slice(),
            self.decoder.u.as_slice(),
            &self.decoder.b,
            self.projection.as_slice(),
            &self.projection_bias,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.slices()
            .iter()
            .all(|s| s.iter().all(|x| x.is_finite()))
    }
}

/// Per-timestep target distributions for a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct Distributions {
    pub batch: usize,
    pub steps: usize,
    pub vocab: usize,
    /// Time-major rows: `t * batch + r`.
    probs: Matrix,
}

impl Distributions {
    pub fn get(&self, row: usize, step: usize) -> &[f64] {
        self.probs.row(step * self.batch + row)
    }

    pub fn time_major(&self) -> &Matrix {
        &self.probs
    }
}

/// Everything the backward pass needs from one forward pass.
pub struct ForwardCache {
    batch: usize,
    src_ids: Vec<usize>,
    embedded: Matrix,
    active: Vec<Vec<bool>>,
    encoder_steps: Vec<StepCache>,
    context: Matrix,
    decoder_steps: Vec<StepCache>,
    decoder_hidden: Matrix,
}

impl Seq2SeqModel {
    /// Freshly initialized model; all randomness comes from `seed`.
    pub fn new(
        config: ModelConfig,
        src_vocab: Vocabulary,
        tgt_vocab: Vocabulary,
        policy: CleaningPolicy,
        seed: u64,
    ) -> Result<Self> {
        config.validate()?;
        if src_vocab.len() != config.src_vocab_size || tgt_vocab.len() != config.tgt_vocab_size {
            return Err(Error::Config(format!(
                "vocabulary sizes {}/{} do not match config {}/{}",
                src_vocab.len(),
                tgt_vocab.len(),
                config.src_vocab_size,
                config.tgt_vocab_size
            )));
        }
        let (d, h) = (config.embed_dim, config.hidden_size);
        let mut rng = SplitMix64::new(seed);
        let embedding = Matrix::uniform(
            config.src_vocab_size,
            d,
            glorot_bound(config.src_vocab_size, d),
            &mut rng,
        );
        let encoder = LstmParams::init(d, h, &mut rng);
        let decoder = LstmParams::init(h, h, &mut rng);
        let projection = Matrix::uniform(
            h,
            config.tgt_vocab_size,
            glorot_bound(h, config.tgt_vocab_size),
            &mut rng,
        );
        Ok(Self {
            config,
            embedding,
            encoder,
            decoder,
            projection,
            projection_bias: vec![0.0; config.tgt_vocab_size],
            src_vocab,
            tgt_vocab,
            policy,
        })
    }

    /// Number of scalars actually stored, counted array by array.
    pub fn stored_parameter_count(&self) -> usize {
        self.embedding.len()
            + self.encoder.param_count()
            + self.decoder.param_count()
            + self.projection.len()
            + self.projection_bias.len()
    }

    pub fn parameter_count(&self) -> usize {
        parameter_count(&self.config)
    }

    /// Trainable arrays in serialization order.
    pub fn param_slices_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            self.embedding.as_mut_slice(),
            self.encoder.w.as_mut_slice(),
            self.encoder.u.as_mut_slice(),
            &mut self.encoder.b,
            self.decoder.w.as_mut_slice(),
            self.decoder.u.as_mut_slice(),
            &mut self.decoder.b,
            self.projection.as_mut_slice(),
            &mut self.projection_bias,
        ]
    }

    pub fn param_slices(&self) -> Vec<&[f64]> {
        vec![
            self.embedding.as_slice(),
            self.encoder.w.as_slice(),
            self.encoder.u.as_slice(),
            &self.encoder.b,
            self.decoder.w.as_slice(),
            self.decoder.u.as_slice(),
            &self.decoder.b,
            self.projection.as_slice(),
            &self.projection_bias,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        let c = &self.config;
        let (d, h) = (c.embed_dim, c.hidden_size);
        self.encoder.validate()?;
        self.decoder.validate()?;
        let ok = self.embedding.shape() == (c.src_vocab_size, d)
            && self.encoder.input_size() == d
            && self.encoder.hidden_size() == h
            && self.decoder.input_size() == h
            && self.decoder.hidden_size() == h
            && self.projection.shape() == (h, c.tgt_vocab_size)
            && self.projection_bias.len() == c.tgt_vocab_size
            && self.src_vocab.len() == c.src_vocab_size
            && self.tgt_vocab.len() == c.tgt_vocab_size;
        if !ok {
            return Err(Error::Shape("model arrays disagree with config".into()));
        }
        Ok(())
    }

    /// Target distributions for every row of `src` at each of the
    /// `tgt_max_len` decoder steps.
    pub fn forward(&self, src: &EncodedBatch) -> Result<Distributions> {
        Ok(self.forward_cached(src)?.0)
    }

    pub fn forward_cached(&self, src: &EncodedBatch) -> Result<(Distributions, ForwardCache)> {
        let batch = src.batch_size();
        let (h, steps) = (self.config.hidden_size, self.config.tgt_max_len);
        if let Some(&bad) = src.ids.iter().find(|&&id| id >= self.config.src_vocab_size) {
            return Err(Error::Argument(format!(
                "source id {bad} outside vocabulary of {}",
                self.config.src_vocab_size
            )));
        }
        let src_ids = src.time_major();
        let enc_steps = src
            .lengths
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            .min(src.max_len);

        let embedded = embedding_forward(&self.embedding, &src_ids[..enc_steps * batch])?;
        let mut input_gates = Matrix::zeros(enc_steps * batch, GATE_COUNT * h);
        gemm(
            1.0,
            &embedded,
            Trans::N,
            &self.encoder.w,
            Trans::T,
            0.0,
            &mut input_gates,
        )?;
        input_gates.add_row_broadcast(&self.encoder.b)?;

        let mut state = LstmState::zeros(batch, h);
        let mut encoder_steps = Vec::with_capacity(enc_steps);
        let mut active = Vec::with_capacity(enc_steps);
        for t in 0..enc_steps {
            let mut z = input_gates.rows_slice(t * batch, batch);
            gemm(
                1.0,
                &state.h,
                Trans::N,
                &self.encoder.u,
                Trans::T,
                1.0,
                &mut z,
            )?;
            let (mut next, cache) = activate(&z, &state)?;
            let mask: Vec<bool> = src.lengths.iter().map(|&len| t < len).collect();
            for (r, &on) in mask.iter().enumerate() {
                if !on {
                    next.h.row_mut(r).copy_from_slice(state.h.row(r));
                    next.c.row_mut(r).copy_from_slice(state.c.row(r));
                }
            }
            encoder_steps.push(cache);
            active.push(mask);
            state = next;
        }
        let context = state.h;

        let mut context_gates = Matrix::zeros(batch, GATE_COUNT * h);
        gemm(
            1.0,
            &context,
            Trans::N,
            &self.decoder.w,
            Trans::T,
            0.0,
            &mut context_gates,
        )?;
        context_gates.add_row_broadcast(&self.decoder.b)?;
        let mut state = LstmState::zeros(batch, h);
        let mut decoder_steps = Vec::with_capacity(steps);
        let mut decoder_hidden = Matrix::zeros(steps * batch, h);
        for t in 0..steps {
            let mut z = context_gates.clone();
            gemm(
                1.0,
                &state.h,
                Trans::N,
                &self.decoder.u,
                Trans::T,
                1.0,
                &mut z,
            )?;
            let (next, cache) = activate(&z, &state)?;
            decoder_hidden.as_mut_slice()[t * batch * h..(t + 1) * batch * h]
                .copy_from_slice(next.h.as_slice());
            decoder_steps.push(cache);
            state = next;
        }

        let mut probs = Matrix::zeros(steps * batch, self.config.tgt_vocab_size);
        gemm(
            1.0,
            &decoder_hidden,
            Trans::N,
            &self.projection,
            Trans::N,
            0.0,
            &mut probs,
        )?;
        probs.add_row_broadcast(&self.projection_bias)?;
        softmax_rows(&mut probs);

        let dist = Distributions {
            batch,
            steps,
            vocab: self.config.tgt_vocab_size,
            probs,
        };
        let cache = ForwardCache {
            batch,
            src_ids,
            embedded,
            active,
            encoder_steps,
            context,
            decoder_steps,
            decoder_hidden,
        };
        Ok((dist, cache))
    }

    /// Backpropagates `grad_logits` (time-major, like [`Distributions`])
    /// and accumulates into `grads`.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        grad_logits: &Matrix,
        grads: &mut Gradients,
    ) -> Result<()> {
        let batch = cache.batch;
        let h = self.config.hidden_size;
        let steps = cache.decoder_steps.len();
        if grad_logits.shape() != (steps * batch, self.config.tgt_vocab_size) {
            return Err(Error::Shape(format!(
                "grad_logits {:?}, expected ({}, {})",
                grad_logits.shape(),
                steps * batch,
                self.config.tgt_vocab_size
            )));
        }

        gemm(
            1.0,
            &cache.decoder_hidden,
            Trans::T,
            grad_logits,
            Trans::N,
            1.0,
            &mut grads.projection,
        )?;
        grad_logits.accumulate_col_sums(&mut grads.projection_bias);
        let mut grad_hidden = Matrix::zeros(steps * batch, h);
        gemm(
            1.0,
            grad_logits,
            Trans::N,
            &self.projection,
            Trans::T,
            0.0,
            &mut grad_hidden,
        )?;

        // Decoder through time. The context feeds every step, so its input
        // weights see the sum of the per-step gate gradients.
        let mut dz_all = Matrix::zeros(steps * batch, GATE_COUNT * h);
        let mut h_prev_all = Matrix::zeros(steps * batch, h);
        let mut dz_sum = Matrix::zeros(batch, GATE_COUNT * h);
        let mut dh_next = Matrix::zeros(batch, h);
        let mut dc_next = Matrix::zeros(batch, h);
        for t in (0..steps).rev() {
            let mut dh = grad_hidden.rows_slice(t * batch, batch);
            dh.add_assign(&dh_next)?;
            let step = &cache.decoder_steps[t];
            let (dz, dc_prev) = activate_backward(step, &dh, &dc_next)?;
            dz_sum.add_assign(&dz)?;
            gemm(
                1.0,
                &dz,
                Trans::N,
                &self.decoder.u,
                Trans::N,
                0.0,
                &mut dh_next,
            )?;
            dc_next = dc_prev;
            copy_rows(&mut dz_all, t * batch, &dz);
            copy_rows(&mut h_prev_all, t * batch, &step.h_prev);
        }
        gemm(
            1.0,
            &dz_all,
            Trans::T,
            &h_prev_all,
            Trans::N,
            1.0,
            &mut grads.decoder.u,
        )?;
        gemm(
            1.0,
            &dz_sum,
            Trans::T,
            &cache.context,
            Trans::N,
            1.0,
            &mut grads.decoder.w,
        )?;
        dz_sum.accumulate_col_sums(&mut grads.decoder.b);
        let mut dh_next = Matrix::zeros(batch, h);
        gemm(
            1.0,
            &dz_sum,
            Trans::N,
            &self.decoder.w,
            Trans::N,
            0.0,
            &mut dh_next,
        )?;

        // Encoder through time; padded positions pass gradients straight through.
        let enc_steps = cache.encoder_steps.len();
        let mut dz_all = Matrix::zeros(enc_steps * batch, GATE_COUNT * h);
        let mut h_prev_all = Matrix::zeros(enc_steps * batch, h);
        let mut dc_next = Matrix::zeros(batch, h);
        for t in (0..enc_steps).rev() {
            let step = &cache.encoder_steps[t];
            let mask = &cache.active[t];
            let (mut dz, mut dc_prev) = activate_backward(step, &dh_next, &dc_next)?;
            for (r, &on) in mask.iter().enumerate() {
                if !on {
                    dz.row_mut(r).fill(0.0);
                    dc_prev.row_mut(r).copy_from_slice(dc_next.row(r));
                }
            }
            let mut dh_prev = Matrix::zeros(batch, h);
            gemm(
                1.0,
                &dz,
                Trans::N,
                &self.encoder.u,
                Trans::N,
                0.0,
                &mut dh_prev,
            )?;
            for (r, &on) in mask.iter().enumerate() {
                if !on {
                    dh_prev.row_mut(r).copy_from_slice(dh_next.row(r));
                }
            }
            dh_next = dh_prev;
            dc_next = dc_prev;
            copy_rows(&mut dz_all, t * batch, &dz);
            copy_rows(&mut h_prev_all, t * batch, &step.h_prev);
        }
        if enc_steps > 0 {
            gemm(
                1.0,
                &dz_all,
                Trans::T,
                &h_prev_all,
                Trans::N,
                1.0,
                &mut grads.encoder.u,
            )?;
            gemm(
                1.0,
                &dz_all,
                Trans::T,
                &cache.embedded,
                Trans::N,
                1.0,
                &mut grads.encoder.w,
            )?;
            dz_all.accumulate_col_sums(&mut grads.encoder.b);
            let mut grad_embedded = Matrix::zeros(enc_steps * batch, self.config.embed_dim);
            gemm(
                1.0,
                &dz_all,
                Trans::N,
                &self.encoder.w,
                Trans::N,
                0.0,
                &mut grad_embedded,
            )?;
            embedding_backward(
                &mut grads.embedding,
                &cache.src_ids[..enc_steps * batch],
                &grad_embedded,
            )?;
        }
        Ok(())
    }
}

fn copy_rows(dst: &mut Matrix, start_row: usize, src: &Matrix) {
    let cols = dst.cols();
    dst.as_mut_slice()[start_row * cols..(start_row + src.rows()) * cols]
        .copy_from_slice(src.as_slice());
}
