//! Dense linear algebra and the differentiable building blocks of the
//! translator. Everything is `f64` and free of hidden global state.

pub mod adam;
pub mod gradcheck;
pub mod init;
pub mod layers;
pub mod lstm;
pub mod matrix;

pub use adam::{adam_step, Adam, AdamConfig, Moments};
pub use gradcheck::{grad_check, relative_error, GradCheckReport};
pub use layers::{
    argmax, cross_entropy, dense_backward, dense_forward, embedding_backward, embedding_forward,
    softmax, softmax_rows,
};
pub use lstm::{lstm_cell_backward, lstm_cell_forward, LstmCache, LstmParams, LstmState};
pub use matrix::{gemm, matmul, Matrix, Trans};
