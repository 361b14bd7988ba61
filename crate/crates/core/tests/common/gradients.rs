//! Finite-difference checks shared by the gradient tests and the acceptance run.

use microtrans::corpus::{build_vocab, CleaningPolicy, EncodedBatch, Vocabulary};
use microtrans::numerics::{
    cross_entropy, dense_backward, dense_forward, embedding_backward, embedding_forward,
    grad_check, lstm_cell_backward, lstm_cell_forward, softmax, LstmParams, LstmState, Matrix,
};
use microtrans::rng::SplitMix64;
use microtrans::seq2seq::{loss_and_gradients, EncodedPairs, ModelConfig, Seq2SeqModel};

pub const EPS: f64 = 1e-5;
pub const TOL: f64 = 1e-4;

type Check = Result<(), String>;

fn dims(rng: &mut SplitMix64) -> (usize, usize, usize) {
    (1 + rng.below(8), 1 + rng.below(8), 1 + rng.below(4))
}

fn random_lstm(d: usize, h: usize, rng: &mut SplitMix64) -> LstmParams {
    LstmParams {
        w: Matrix::uniform(4 * h, d, 0.8, rng),
        u: Matrix::uniform(4 * h, h, 0.8, rng),
        b: (0..4 * h).map(|_| rng.symmetric(0.5)).collect(),
    }
}

/// Scalar objective `sum(h ⊙ a) + sum(c ⊙ b)` of one LSTM step.
fn lstm_objective(
    params: &LstmParams,
    x: &Matrix,
    prev: &LstmState,
    a: &Matrix,
    b: &Matrix,
) -> f64 {
    let (s, _) = lstm_cell_forward(params, x, prev).unwrap();
    let dot = |m: &Matrix, w: &Matrix| {
        m.as_slice()
            .iter()
            .zip(w.as_slice())
            .map(|(p, q)| p * q)
            .sum::<f64>()
    };
    dot(&s.h, a) + dot(&s.c, b)
}

fn flatten(p: &LstmParams) -> Vec<f64> {
    [p.w.as_slice(), p.u.as_slice(), &p.b].concat()
}

fn unflatten(v: &[f64], d: usize, h: usize) -> LstmParams {
    let (w, rest) = v.split_at(4 * h * d);
    let (u, b) = rest.split_at(4 * h * h);
    LstmParams {
        w: Matrix::from_vec(4 * h, d, w.to_vec()).unwrap(),
        u: Matrix::from_vec(4 * h, h, u.to_vec()).unwrap(),
        b: b.to_vec(),
    }
}

pub fn lstm_cell(instances: usize) -> Check {
    let mut rng = SplitMix64::new(11);
    for _ in 0..instances {
        let (d, h, batch) = dims(&mut rng);
        let params = random_lstm(d, h, &mut rng);
        let x = Matrix::uniform(batch, d, 1.0, &mut rng);
        let prev = LstmState {
            h: Matrix::uniform(batch, h, 0.9, &mut rng),
            c: Matrix::uniform(batch, h, 1.0, &mut rng),
        };
        let a = Matrix::uniform(batch, h, 1.0, &mut rng);
        let b = Matrix::uniform(batch, h, 1.0, &mut rng);
        let (_, cache) = lstm_cell_forward(&params, &x, &prev).unwrap();
        let (grads, dx, dprev) = lstm_cell_backward(&params, &cache, &a, &b).unwrap();

        let report = grad_check(
            |v| lstm_objective(&unflatten(v, d, h), &x, &prev, &a, &b),
            &flatten(&params),
            &flatten(&grads),
            EPS,
            TOL,
        )
        .unwrap();
        if !report.passed {
            return Err(format!("params: {report:?}"));
        }

        let report = grad_check(
            |v| {
                lstm_objective(
                    &params,
                    &Matrix::from_vec(batch, d, v.to_vec()).unwrap(),
                    &prev,
                    &a,
                    &b,
                )
            },
            x.as_slice(),
            dx.as_slice(),
            EPS,
            TOL,
        )
        .unwrap();
        if !report.passed {
            return Err(format!("x: {report:?}"));
        }

        let state_vec = [prev.h.as_slice(), prev.c.as_slice()].concat();
        let report = grad_check(
            |v| {
                let (hv, cv) = v.split_at(batch * h);
                let st = LstmState {
                    h: Matrix::from_vec(batch, h, hv.to_vec()).unwrap(),
                    c: Matrix::from_vec(batch, h, cv.to_vec()).unwrap(),
                };
                lstm_objective(&params, &x, &st, &a, &b)
            },
            &state_vec,
            &[dprev.h.as_slice(), dprev.c.as_slice()].concat(),
            EPS,
            TOL,
        )
        .unwrap();
        if !report.passed {
            return Err(format!("state: {report:?}"));
        }
    }
    Ok(())
}

/// Negative control: dropping the forget-gate path into the previous cell
/// state must be detected.
pub fn corrupted_lstm_backward() -> Check {
    let mut rng = SplitMix64::new(5);
    let (d, h, batch) = (3, 2, 2);
    let params = random_lstm(d, h, &mut rng);
    let x = Matrix::uniform(batch, d, 1.0, &mut rng);
    let prev = LstmState {
        h: Matrix::uniform(batch, h, 0.9, &mut rng),
        c: Matrix::uniform(batch, h, 1.0, &mut rng),
    };
    let a = Matrix::uniform(batch, h, 1.0, &mut rng);
    let b = Matrix::uniform(batch, h, 1.0, &mut rng);
    let (_, cache) = lstm_cell_forward(&params, &x, &prev).unwrap();
    let (_, _, dprev) = lstm_cell_backward(&params, &cache, &a, &b).unwrap();
    let broken = vec![0.0; batch * h];
    let report = grad_check(
        |v| {
            let st = LstmState {
                h: prev.h.clone(),
                c: Matrix::from_vec(batch, h, v.to_vec()).unwrap(),
            };
            lstm_objective(&params, &x, &st, &a, &b)
        },
        prev.c.as_slice(),
        &broken,
        EPS,
        TOL,
    )
    .unwrap();
    if report.passed || dprev.c.as_slice().iter().all(|&v| v == 0.0) {
        return Err("corrupted backward was not detected".into());
    }
    Ok(())
}

pub fn cross_entropy_loss(instances: usize) -> Check {
    let mut rng = SplitMix64::new(21);
    for _ in 0..instances {
        let rows = 1 + rng.below(8);
        let vocab = 2 + rng.below(7);
        let logits: Vec<f64> = (0..rows * vocab).map(|_| rng.symmetric(3.0)).collect();
        let targets: Vec<usize> = (0..rows).map(|_| rng.below(vocab)).collect();
        let mut mask: Vec<bool> = (0..rows).map(|_| rng.below(4) != 0).collect();
        mask[0] = true;
        let loss_of = |l: &[f64]| {
            let probs: Vec<f64> = l.chunks(vocab).flat_map(softmax).collect();
            let probs = Matrix::from_vec(rows, vocab, probs).unwrap();
            cross_entropy(&probs, &targets, &mask).unwrap()
        };
        let (_, grad) = loss_of(&logits);
        let report = grad_check(|l| loss_of(l).0, &logits, grad.as_slice(), EPS, TOL).unwrap();
        if !report.passed {
            return Err(format!("{report:?}"));
        }
    }
    Ok(())
}

pub fn embedding_and_projection(instances: usize) -> Check {
    let mut rng = SplitMix64::new(31);
    for _ in 0..instances {
        let vocab = 2 + rng.below(7);
        let dim = 1 + rng.below(8);
        let out = 1 + rng.below(8);
        let n = 1 + rng.below(6);
        let ids: Vec<usize> = (0..n).map(|_| rng.below(vocab)).collect();
        let table = Matrix::uniform(vocab, dim, 1.0, &mut rng);
        let weight = Matrix::uniform(dim, out, 1.0, &mut rng);
        let bias: Vec<f64> = (0..out).map(|_| rng.symmetric(1.0)).collect();
        let upstream = Matrix::uniform(n, out, 1.0, &mut rng);
        let objective = |t: &Matrix, w: &Matrix, b: &[f64]| {
            let y = dense_forward(&embedding_forward(t, &ids).unwrap(), w, b).unwrap();
            y.as_slice()
                .iter()
                .zip(upstream.as_slice())
                .map(|(p, q)| p * q)
                .sum::<f64>()
        };
        let x = embedding_forward(&table, &ids).unwrap();
        let mut gw = Matrix::zeros(dim, out);
        let mut gb = vec![0.0; out];
        let dx = dense_backward(&x, &weight, &upstream, &mut gw, &mut gb).unwrap();
        let mut gt = Matrix::zeros(vocab, dim);
        embedding_backward(&mut gt, &ids, &dx).unwrap();

        let r = grad_check(
            |v| {
                objective(
                    &Matrix::from_vec(vocab, dim, v.to_vec()).unwrap(),
                    &weight,
                    &bias,
                )
            },
            table.as_slice(),
            gt.as_slice(),
            EPS,
            TOL,
        )
        .unwrap();
        if !r.passed {
            return Err(format!("embedding: {r:?}"));
        }
        let r = grad_check(
            |v| {
                objective(
                    &table,
                    &Matrix::from_vec(dim, out, v.to_vec()).unwrap(),
                    &bias,
                )
            },
            weight.as_slice(),
            gw.as_slice(),
            EPS,
            TOL,
        )
        .unwrap();
        if !r.passed {
            return Err(format!("projection: {r:?}"));
        }
        let r = grad_check(|v| objective(&table, &weight, v), &bias, &gb, EPS, TOL).unwrap();
        if !r.passed {
            return Err(format!("bias: {r:?}"));
        }
    }
    Ok(())
}

fn vocab_of(n: usize) -> Vocabulary {
    let words: Vec<String> = (0..n - 2).map(|i| format!("w{i}")).collect();
    build_vocab(words.iter().map(String::as_str), None)
}

fn random_batch(
    rng: &mut SplitMix64,
    rows: usize,
    max_len: usize,
    vocab: usize,
    min_len: usize,
) -> EncodedBatch {
    let mut ids = Vec::new();
    let mut lengths = Vec::new();
    for _ in 0..rows {
        let len = min_len + rng.below(max_len - min_len + 1);
        for t in 0..max_len {
            ids.push(if t < len { 1 + rng.below(vocab - 1) } else { 0 });
        }
        lengths.push(len);
    }
    EncodedBatch {
        ids,
        lengths,
        max_len,
    }
}

pub fn whole_model(instances: u64) -> Check {
    let mut rng = SplitMix64::new(41);
    for trial in 0..instances {
        let config = ModelConfig {
            embed_dim: 1 + rng.below(5),
            hidden_size: 1 + rng.below(5),
            src_vocab_size: 3 + rng.below(5),
            tgt_vocab_size: 3 + rng.below(5),
            src_max_len: 1 + rng.below(4),
            tgt_max_len: 1 + rng.below(4),
        };
        let mut model = Seq2SeqModel::new(
            config,
            vocab_of(config.src_vocab_size),
            vocab_of(config.tgt_vocab_size),
            CleaningPolicy::Obfuscated,
            trial,
        )
        .unwrap();
        for s in model.param_slices_mut() {
            for x in s.iter_mut() {
                *x += rng.symmetric(0.3);
            }
        }
        let rows = 1 + rng.below(3);
        // Includes zero-length sources, which exercise the padding pass-through.
        let src = random_batch(&mut rng, rows, config.src_max_len, config.src_vocab_size, 0);
        let tgt = random_batch(&mut rng, rows, config.tgt_max_len, config.tgt_vocab_size, 1);
        let data = EncodedPairs::new(src, tgt).unwrap();
        let (_, grads) = loss_and_gradients(&model, &data).unwrap();

        let flat: Vec<f64> = model.param_slices().concat();
        let analytic: Vec<f64> = grads.slices().concat();
        let sizes: Vec<usize> = model.param_slices().iter().map(|s| s.len()).collect();
        let report = grad_check(
            |v| {
                let mut m = model.clone();
                let mut offset = 0;
                for (slice, &n) in m.param_slices_mut().into_iter().zip(&sizes) {
                    slice.copy_from_slice(&v[offset..offset + n]);
                    offset += n;
                }
                loss_and_gradients(&m, &data).unwrap().0
            },
            &flat,
            &analytic,
            EPS,
            TOL,
        )
        .unwrap();
        if !report.passed {
            return Err(format!("trial {trial}: {report:?}"));
        }
    }
    Ok(())
}
