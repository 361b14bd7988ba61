//! Embedding lookup, affine projection, softmax and masked cross-entropy.

use crate::error::{Error, Result};
use crate::numerics::matrix::{gemm, Matrix, Trans};

/// Floor applied to probabilities inside the logarithm.
pub const PROB_FLOOR: f64 = 1e-12;

/// Numerically stable softmax (max-subtracted).
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let mut out = logits.to_vec();
    softmax_in_place(&mut out);
    out
}

pub fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = (*x - max).exp();
        sum += *x;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
}

pub fn softmax_rows(m: &mut Matrix) {
    let cols = m.cols();
    for row in m.as_mut_slice().chunks_exact_mut(cols) {
        softmax_in_place(row);
    }
}

/// Mean negative log-likelihood over the rows with `mask[r] == true`, and its
/// gradient with respect to the logits that produced `probs`:
/// `(probs[r] - onehot(target[r])) / n` on unmasked rows, zero elsewhere.
///
/// With no unmasked rows the loss is zero.
pub fn cross_entropy(probs: &Matrix, targets: &[usize], mask: &[bool]) -> Result<(f64, Matrix)> {
    let (rows, vocab) = probs.shape();
    if targets.len() != rows || mask.len() != rows {
        return Err(Error::Shape(format!(
            "cross_entropy: {rows} rows, {} targets, {} mask entries",
            targets.len(),
            mask.len()
        )));
    }
    if let Some(&bad) = targets.iter().find(|&&t| t >= vocab) {
        return Err(Error::Argument(format!(
            "target id {bad} outside vocabulary of {vocab}"
        )));
    }
    let count = mask.iter().filter(|&&m| m).count();
    let mut grad = Matrix::zeros(rows, vocab);
    if count == 0 {
        return Ok((0.0, grad));
    }
    let scale = 1.0 / count as f64;
    let mut loss = 0.0;
    for r in 0..rows {
        if !mask[r] {
            continue;
        }
        let p = probs.row(r);
        loss -= p[targets[r]].max(PROB_FLOOR).ln();
        let g = grad.row_mut(r);
        for (gv, pv) in g.iter_mut().zip(p) {
            *gv = pv * scale;
        }
        g[targets[r]] -= scale;
    }
    Ok((loss * scale, grad))
}

/// Row lookup: output row `k` is `table[ids[k]]`.
pub fn embedding_forward(table: &Matrix, ids: &[usize]) -> Result<Matrix> {
    let dim = table.cols();
    let mut out = Matrix::zeros(ids.len(), dim);
    for (k, &id) in ids.iter().enumerate() {
        if id >= table.rows() {
            return Err(Error::Argument(format!(
                "token id {id} outside embedding of {} rows",
                table.rows()
            )));
        }
        out.row_mut(k).copy_from_slice(table.row(id));
    }
    Ok(out)
}

/// Scatter-add of output-row gradients back onto the table rows.
pub fn embedding_backward(grad_table: &mut Matrix, ids: &[usize], grad_out: &Matrix) -> Result<()> {
    if grad_out.shape() != (ids.len(), grad_table.cols()) {
        return Err(Error::Shape(format!(
            "embedding backward: {:?} for {} ids",
            grad_out.shape(),
            ids.len()
        )));
    }
    for (k, &id) in ids.iter().enumerate() {
        let src = grad_out.row(k);
        for (d, s) in grad_table.row_mut(id).iter_mut().zip(src) {
            *d += s;
        }
    }
    Ok(())
}

/// `x · weight + bias` with `weight` of shape `(in, out)`.
pub fn dense_forward(x: &Matrix, weight: &Matrix, bias: &[f64]) -> Result<Matrix> {
    let mut out = Matrix::zeros(x.rows(), weight.cols());
    gemm(1.0, x, Trans::N, weight, Trans::N, 0.0, &mut out)?;
    out.add_row_broadcast(bias)?;
    Ok(out)
}

/// Accumulates weight and bias gradients; returns the gradient on `x`.
pub fn dense_backward(
    x: &Matrix,
    weight: &Matrix,
    grad_out: &Matrix,
    grad_weight: &mut Matrix,
    grad_bias: &mut [f64],
) -> Result<Matrix> {
    gemm(1.0, x, Trans::T, grad_out, Trans::N, 1.0, grad_weight)?;
    grad_out.accumulate_col_sums(grad_bias);
    let mut dx = Matrix::zeros(x.rows(), x.cols());
    gemm(1.0, grad_out, Trans::N, weight, Trans::T, 0.0, &mut dx)?;
    Ok(dx)
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    best
}
