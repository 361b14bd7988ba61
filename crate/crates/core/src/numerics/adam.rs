use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates for one parameter array.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl Moments {
    pub fn zeros(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }
}

/// Bias-corrected Adam update of `params` in place. `t` is the 1-based step.
pub fn adam_step(
    params: &mut [f64],
    grads: &[f64],
    moments: &mut Moments,
    t: u64,
    cfg: &AdamConfig,
) -> Result<()> {
    if t == 0 {
        return Err(Error::Argument("adam step counter starts at 1".into()));
    }
    if grads.len() != params.len()
        || moments.m.len() != params.len()
        || moments.v.len() != params.len()
    {
        return Err(Error::Shape(format!(
            "adam: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            moments.m.len()
        )));
    }
    let t = t.min(i32::MAX as u64) as i32;
    let correction1 = 1.0 - cfg.beta1.powi(t);
    let correction2 = 1.0 - cfg.beta2.powi(t);
    for k in 0..params.len() {
        let g = grads[k];
        let m = cfg.beta1 * moments.m[k] + (1.0 - cfg.beta1) * g;
        let v = cfg.beta2 * moments.v[k] + (1.0 - cfg.beta2) * g * g;
        moments.m[k] = m;
        moments.v[k] = v;
        let m_hat = m / correction1;
        let v_hat = v / correction2;
        params[k] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
    Ok(())
}

/// Adam over a fixed list of parameter arrays sharing one step counter.
#[derive(Debug, Clone)]
pub struct Adam {
    pub config: AdamConfig,
    step: u64,
    moments: Vec<Moments>,
}

impl Adam {
    pub fn new(config: AdamConfig, sizes: &[usize]) -> Self {
        Self {
            config,
            step: 0,
            moments: sizes.iter().map(|&n| Moments::zeros(n)).collect(),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// Applies one update; `params[k]` pairs with `grads[k]`.
    pub fn step(&mut self, params: Vec<&mut [f64]>, grads: Vec<&[f64]>) -> Result<()> {
        if params.len() != self.moments.len() || grads.len() != self.moments.len() {
            return Err(Error::Shape(format!(
                "adam: {} arrays registered, {} params and {} grads given",
                self.moments.len(),
                params.len(),
                grads.len()
            )));
        }
        self.step += 1;
        for ((p, g), m) in params.into_iter().zip(grads).zip(&mut self.moments) {
            adam_step(p, g, m, self.step, &self.config)?;
        }
        Ok(())
    }
}
