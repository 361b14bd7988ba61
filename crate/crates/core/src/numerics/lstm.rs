//! Single LSTM cell with packed gate weights.
//!
//! Gate blocks are packed in the order input `i`, forget `f`, cell
//! candidate `g`, output `o`; row block `k` of `w`, `u` and `b` holds gate
//! `k`. The model file depends on this order.
//!
//! All functions operate on a batch: every row of `x`, `h` and `c` is an
//! independent sequence element.

use crate::error::{Error, Result};
use crate::numerics::init::glorot_bound;
use crate::numerics::matrix::{gemm, Matrix, Trans};
use crate::rng::SplitMix64;

pub const GATE_COUNT: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    /// Input weights, `(4h, d)`.
    pub w: Matrix,
    /// Recurrent weights, `(4h, h)`.
    pub u: Matrix,
    /// Biases, `4h`.
    pub b: Vec<f64>,
}

impl LstmParams {
    pub fn zeros(input_size: usize, hidden_size: usize) -> Self {
        Self {
            w: Matrix::zeros(GATE_COUNT * hidden_size, input_size),
            u: Matrix::zeros(GATE_COUNT * hidden_size, hidden_size),
            b: vec![0.0; GATE_COUNT * hidden_size],
        }
    }

    /// Glorot-uniform `w` and `u`, zero biases except the forget gate at 1.0.
    pub fn init(input_size: usize, hidden_size: usize, rng: &mut SplitMix64) -> Self {
        let rows = GATE_COUNT * hidden_size;
        let w = Matrix::uniform(rows, input_size, glorot_bound(input_size, rows), rng);
        let u = Matrix::uniform(rows, hidden_size, glorot_bound(hidden_size, rows), rng);
        let mut b = vec![0.0; rows];
        b[hidden_size..2 * hidden_size].fill(1.0);
        Self { w, u, b }
    }

    pub fn hidden_size(&self) -> usize {
        self.u.cols()
    }

    pub fn input_size(&self) -> usize {
        self.w.cols()
    }

    pub fn param_count(&self) -> usize {
        self.w.len() + self.u.len() + self.b.len()
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.input_size(), self.hidden_size())
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.hidden_size();
        if self.u.rows() != GATE_COUNT * h
            || self.w.rows() != GATE_COUNT * h
            || self.b.len() != GATE_COUNT * h
        {
            return Err(Error::Shape(format!(
                "lstm params: w {:?}, u {:?}, b {}",
                self.w.shape(),
                self.u.shape(),
                self.b.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub h: Matrix,
    pub c: Matrix,
}

impl LstmState {
    pub fn zeros(batch: usize, hidden_size: usize) -> Self {
        Self {
            h: Matrix::zeros(batch, hidden_size),
            c: Matrix::zeros(batch, hidden_size),
        }
    }

    pub fn batch(&self) -> usize {
        self.h.rows()
    }
}

/// Intermediates of one step that the backward pass needs, independent of
/// how the pre-activations were produced.
#[derive(Debug, Clone)]
pub struct StepCache {
    pub h_prev: Matrix,
    pub c_prev: Matrix,
    /// Activated gates `[i | f | g | o]`, `(batch, 4h)`.
    pub gates: Matrix,
    pub c: Matrix,
    pub tanh_c: Matrix,
}

#[derive(Debug, Clone)]
pub struct LstmCache {
    pub x: Matrix,
    pub step: StepCache,
}

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Elementwise half of the cell: turns pre-activations `z = Wx + Uh' + b`
/// into the next state.
pub fn activate(z: &Matrix, prev: &LstmState) -> Result<(LstmState, StepCache)> {
    let batch = prev.batch();
    let h = prev.h.cols();
    if z.shape() != (batch, GATE_COUNT * h) || prev.c.shape() != (batch, h) {
        return Err(Error::Shape(format!(
            "activate: z {:?}, h {:?}, c {:?}",
            z.shape(),
            prev.h.shape(),
            prev.c.shape()
        )));
    }
    let mut gates = Matrix::zeros(batch, GATE_COUNT * h);
    let mut c = Matrix::zeros(batch, h);
    let mut tanh_c = Matrix::zeros(batch, h);
    let mut h_out = Matrix::zeros(batch, h);
    for r in 0..batch {
        let zr = z.row(r);
        let cp = prev.c.row(r);
        let gr = gates.row_mut(r);
        for j in 0..h {
            gr[j] = sigmoid(zr[j]);
            gr[h + j] = sigmoid(zr[h + j]);
            gr[2 * h + j] = zr[2 * h + j].tanh();
            gr[3 * h + j] = sigmoid(zr[3 * h + j]);
        }
        let gr = gates.row(r);
        let cr = c.row_mut(r);
        for j in 0..h {
            cr[j] = gr[h + j] * cp[j] + gr[j] * gr[2 * h + j];
        }
        let cr = c.row(r);
        let tr = tanh_c.row_mut(r);
        let hr = h_out.row_mut(r);
        for j in 0..h {
            tr[j] = cr[j].tanh();
            hr[j] = gr[3 * h + j] * tr[j];
        }
    }
    let state = LstmState {
        h: h_out,
        c: c.clone(),
    };
    let cache = StepCache {
        h_prev: prev.h.clone(),
        c_prev: prev.c.clone(),
        gates,
        c,
        tanh_c,
    };
    Ok((state, cache))
}

/// Elementwise backward: upstream gradients on `h` and `c` to gradients on
/// the pre-activations `z` and on the previous cell state.
pub fn activate_backward(
    cache: &StepCache,
    grad_h: &Matrix,
    grad_c: &Matrix,
) -> Result<(Matrix, Matrix)> {
    let (batch, h) = cache.c.shape();
    if grad_h.shape() != (batch, h) || grad_c.shape() != (batch, h) {
        return Err(Error::Shape(format!(
            "lstm backward: grad_h {:?}, grad_c {:?}, state {:?}",
            grad_h.shape(),
            grad_c.shape(),
            (batch, h)
        )));
    }
    let mut dz = Matrix::zeros(batch, GATE_COUNT * h);
    let mut dc_prev = Matrix::zeros(batch, h);
    for r in 0..batch {
        let g = cache.gates.row(r);
        let tc = cache.tanh_c.row(r);
        let cp = cache.c_prev.row(r);
        let dh = grad_h.row(r);
        let dc = grad_c.row(r);
        let dzr = dz.row_mut(r);
        let mut dcp = vec![0.0; h];
        for j in 0..h {
            let (i, f, gg, o) = (g[j], g[h + j], g[2 * h + j], g[3 * h + j]);
            let dct = dc[j] + dh[j] * o * (1.0 - tc[j] * tc[j]);
            dzr[j] = dct * gg * i * (1.0 - i);
            dzr[h + j] = dct * cp[j] * f * (1.0 - f);
            dzr[2 * h + j] = dct * i * (1.0 - gg * gg);
            dzr[3 * h + j] = dh[j] * tc[j] * o * (1.0 - o);
            dcp[j] = dct * f;
        }
        dc_prev.row_mut(r).copy_from_slice(&dcp);
    }
    Ok((dz, dc_prev))
}

/// One step: `i, f, o = σ(·)`, `g = tanh(·)`, `c = f⊙c' + i⊙g`, `h = o⊙tanh(c)`.
pub fn lstm_cell_forward(
    params: &LstmParams,
    x: &Matrix,
    prev: &LstmState,
) -> Result<(LstmState, LstmCache)> {
    params.validate()?;
    let batch = prev.batch();
    if x.shape() != (batch, params.input_size()) || prev.h.cols() != params.hidden_size() {
        return Err(Error::Shape(format!(
            "lstm forward: x {:?}, h {:?} for params ({}, {})",
            x.shape(),
            prev.h.shape(),
            params.input_size(),
            params.hidden_size()
        )));
    }
    let mut z = Matrix::zeros(batch, GATE_COUNT * params.hidden_size());
    gemm(1.0, x, Trans::N, &params.w, Trans::T, 0.0, &mut z)?;
    gemm(1.0, &prev.h, Trans::N, &params.u, Trans::T, 1.0, &mut z)?;
    z.add_row_broadcast(&params.b)?;
    let (state, step) = activate(&z, prev)?;
    Ok((state, LstmCache { x: x.clone(), step }))
}

/// Exact gradients of one step given upstream gradients on its outputs.
/// Returns parameter gradients, the gradient on `x`, and the gradient on
/// the previous state.
pub fn lstm_cell_backward(
    params: &LstmParams,
    cache: &LstmCache,
    grad_h: &Matrix,
    grad_c: &Matrix,
) -> Result<(LstmParams, Matrix, LstmState)> {
    let (dz, dc_prev) = activate_backward(&cache.step, grad_h, grad_c)?;
    let mut grads = params.zeros_like();
    gemm(1.0, &dz, Trans::T, &cache.x, Trans::N, 0.0, &mut grads.w)?;
    gemm(
        1.0,
        &dz,
        Trans::T,
        &cache.step.h_prev,
        Trans::N,
        0.0,
        &mut grads.u,
    )?;
    dz.accumulate_col_sums(&mut grads.b);
    let mut dx = Matrix::zeros(cache.x.rows(), params.input_size());
    gemm(1.0, &dz, Trans::N, &params.w, Trans::N, 0.0, &mut dx)?;
    let mut dh_prev = Matrix::zeros(cache.x.rows(), params.hidden_size());
    gemm(1.0, &dz, Trans::N, &params.u, Trans::N, 0.0, &mut dh_prev)?;
    Ok((
        grads,
        dx,
        LstmState {
            h: dh_prev,
            c: dc_prev,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_cell() -> LstmParams {
        LstmParams {
            w: Matrix::from_vec(4, 1, vec![1.0; 4]).unwrap(),
            u: Matrix::zeros(4, 1),
            b: vec![0.0; 4],
        }
    }

    #[test]
    fn zero_params_give_zero_state() {
        let params = LstmParams::zeros(3, 2);
        let x = Matrix::row_vector(vec![0.3, -1.2, 4.0]);
        let (state, _) = lstm_cell_forward(&params, &x, &LstmState::zeros(1, 2)).unwrap();
        assert!(state.h.as_slice().iter().all(|&v| v == 0.0));
        assert!(state.c.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scalar_cell_matches_hand_evaluation() {
        // Independent evaluation of the four gate formulas:
        // i = f = o = σ(1), g = tanh(1), c = i·g, h = o·tanh(c).
        let (state, cache) = lstm_cell_forward(
            &scalar_cell(),
            &Matrix::row_vector(vec![1.0]),
            &LstmState::zeros(1, 1),
        )
        .unwrap();
        let g = cache.step.gates.row(0);
        assert!((g[0] - 0.731_059).abs() < 1e-6);
        assert!((g[1] - 0.731_059).abs() < 1e-6);
        assert!((g[2] - 0.761_594).abs() < 1e-6);
        assert!((g[3] - 0.731_059).abs() < 1e-6);
        assert!((state.c.get(0, 0) - 0.556_770).abs() < 1e-6);
        assert!((state.h.get(0, 0) - 0.369_606).abs() < 1e-6);
    }

    #[test]
    fn output_gate_gradient_at_scalar_example() {
        // dh/do = tanh(c) = tanh(0.556770) ≈ 0.505577, so the pre-activation
        // gradient of the output gate is tanh(c)·o·(1-o).
        let (_, cache) = lstm_cell_forward(
            &scalar_cell(),
            &Matrix::row_vector(vec![1.0]),
            &LstmState::zeros(1, 1),
        )
        .unwrap();
        assert!((cache.step.tanh_c.get(0, 0) - 0.505_577).abs() < 1e-6);
        let (dz, _) = activate_backward(
            &cache.step,
            &Matrix::row_vector(vec![1.0]),
            &Matrix::row_vector(vec![0.0]),
        )
        .unwrap();
        let o = 0.731_058_578_630_004_9;
        assert!((dz.get(0, 3) - 0.505_576_931_507_108 * o * (1.0 - o)).abs() < 1e-9);
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let mut rng = SplitMix64::new(1);
        let params = LstmParams::init(3, 4, &mut rng);
        let x = Matrix::uniform(2, 3, 1.0, &mut rng);
        let prev = LstmState {
            h: Matrix::uniform(2, 4, 0.9, &mut rng),
            c: Matrix::uniform(2, 4, 1.0, &mut rng),
        };
        let (_, cache) = lstm_cell_forward(&params, &x, &prev).unwrap();
        let zero = Matrix::zeros(2, 4);
        let (grads, dx, dprev) = lstm_cell_backward(&params, &cache, &zero, &zero).unwrap();
        for s in [
            grads.w.as_slice(),
            grads.u.as_slice(),
            grads.b.as_slice(),
            dx.as_slice(),
            dprev.h.as_slice(),
            dprev.c.as_slice(),
        ] {
            assert!(s.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn init_sets_forget_bias() {
        let mut rng = SplitMix64::new(0);
        let p = LstmParams::init(5, 3, &mut rng);
        assert_eq!(&p.b[0..3], &[0.0; 3]);
        assert_eq!(&p.b[3..6], &[1.0; 3]);
        assert_eq!(&p.b[6..12], &[0.0; 6]);
        let bound = glorot_bound(5, 12);
        assert!(p.w.as_slice().iter().all(|v| v.abs() <= bound));
    }

    #[test]
    fn mismatched_input_is_rejected() {
        let params = LstmParams::zeros(3, 2);
        let x = Matrix::row_vector(vec![1.0, 2.0]);
        assert!(matches!(
            lstm_cell_forward(&params, &x, &LstmState::zeros(1, 2)),
            Err(Error::Shape(_))
        ));
    }
}
