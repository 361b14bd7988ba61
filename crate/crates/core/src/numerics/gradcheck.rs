use crate::error::{Error, Result};

/// Gradients smaller than this in magnitude are compared absolutely.
const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub relative_errors: Vec<f64>,
    pub max_relative_error: f64,
    pub worst_index: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Relative error `|a - n| / max(|a|, |n|, 1e-6)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(RELATIVE_FLOOR)
}

/// Compares `analytic` against central differences of `f` at `params`.
pub fn grad_check<F>(
    mut f: F,
    params: &[f64],
    analytic: &[f64],
    eps: f64,
    tol: f64,
) -> Result<GradCheckReport>
where
    F: FnMut(&[f64]) -> f64,
{
    if analytic.len() != params.len() {
        return Err(Error::Shape(format!(
            "grad_check: {} params, {} gradient entries",
            params.len(),
            analytic.len()
        )));
    }
    let mut point = params.to_vec();
    let mut relative_errors = Vec::with_capacity(params.len());
    for k in 0..params.len() {
        let orig = point[k];
        point[k] = orig + eps;
        let plus = f(&point);
        point[k] = orig - eps;
        let minus = f(&point);
        point[k] = orig;
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFinite(format!("objective at parameter {k}")));
        }
        let numeric = (plus - minus) / (2.0 * eps);
        relative_errors.push(relative_error(analytic[k], numeric));
    }
    let (worst_index, max_relative_error) =
        relative_errors
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, 0.0),
                |best, (i, e)| if e > best.1 { (i, e) } else { best },
            );
    Ok(GradCheckReport {
        passed: max_relative_error < tol,
        relative_errors,
        max_relative_error,
        worst_index,
        tolerance: tol,
    })
}
