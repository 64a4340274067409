//! Per-feature marginal slope fits with robust (HC0-type) studentization.

use alloc::vec::Vec;

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::sum::{mean, sum_map};

/// Marginal least-squares fit of the response on one feature.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarginalFit {
    pub feature_index: usize,
    /// Slope `Cov_n(X, Y) / Var_n(X)`.
    pub tau_hat: f64,
    /// Intercept `Ȳ − τ̂ X̄`.
    pub b_hat: f64,
    /// Robust variance of `√n τ̂`: `n⁻¹Σ(Xᵢ−X̄)²ε̂ᵢ² / (n⁻¹Σ(Xᵢ−X̄)²)²`.
    pub v_hat: f64,
    /// `√n τ̂ / √v̂`; NaN when `degenerate`.
    pub score: f64,
    /// `n⁻¹Σ(Xᵢ−X̄)²`.
    pub var_x_n: f64,
    /// Constant feature or exact linear fit (`v̂ = 0`). The score is then
    /// undefined and the feature is never selected.
    pub degenerate: bool,
}

impl MarginalFit {
    /// The score, or `None` for degenerate fits.
    pub fn checked_score(&self) -> Option<f64> {
        (!self.degenerate).then_some(self.score)
    }
}

/// Response quantities shared by every column of a matrix.
pub(crate) struct CenteredResponse {
    mean: f64,
    centered: Vec<f64>,
}

impl CenteredResponse {
    pub(crate) fn new(y: &[f64]) -> Self {
        let mean = mean(y);
        CenteredResponse {
            mean,
            centered: y.iter().map(|&v| v - mean).collect(),
        }
    }
}

fn fit_column(feature_index: usize, x: &[f64], y: &CenteredResponse) -> MarginalFit {
    let n = x.len();
    let nf = n as f64;
    let x_mean = mean(x);
    let ey = &y.centered;

    let sxx = sum_map(n, |i| {
        let d = x[i] - x_mean;
        d * d
    });
    let constant = x.iter().all(|&v| v == x[0]);
    if sxx == 0.0 || constant {
        return MarginalFit {
            feature_index,
            tau_hat: 0.0,
            b_hat: y.mean,
            v_hat: 0.0,
            score: f64::NAN,
            var_x_n: 0.0,
            degenerate: true,
        };
    }
    let sxy = sum_map(n, |i| (x[i] - x_mean) * ey[i]);
    let tau_hat = sxy / sxx;
    let b_hat = y.mean - tau_hat * x_mean;

    let weighted = sum_map(n, |i| {
        let d = x[i] - x_mean;
        let r = ey[i] - tau_hat * d;
        let dr = d * r;
        dr * dr
    });
    let var_x_n = sxx / nf;
    let v_hat = (weighted / nf) / (var_x_n * var_x_n);

    let degenerate = v_hat == 0.0;
    let score = if degenerate {
        f64::NAN
    } else {
        libm::sqrt(nf) * tau_hat / libm::sqrt(v_hat)
    };
    MarginalFit {
        feature_index,
        tau_hat,
        b_hat,
        v_hat,
        score,
        var_x_n,
        degenerate,
    }
}

fn check_inputs(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            x_len: x.len(),
            y_len: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFewSamples(x.len()));
    }
    if let Some(row) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row, column: None });
    }
    if let Some(row) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row,
            column: Some(0),
        });
    }
    Ok(())
}

/// Fits `Y = b + τ X + ε` by least squares and studentizes `τ̂` with the
/// heteroscedasticity-robust variance.
///
/// Sums are taken over centered values (means first), with compensated
/// accumulation once `n` exceeds 10⁴. A constant column or a perfect linear
/// relation yields a fit flagged `degenerate` rather than an error.
pub fn fit_marginal(x: &[f64], y: &[f64]) -> Result<MarginalFit> {
    check_inputs(x, y)?;
    Ok(fit_column(0, x, &CenteredResponse::new(y)))
}

/// [`fit_marginal`] for every column of `data`, in column order.
///
/// With the `parallel` feature columns are fitted concurrently; each
/// column's arithmetic is identical to the sequential path, so the output
/// does not depend on the number of workers.
pub fn fit_all(data: &DataMatrix) -> Vec<MarginalFit> {
    let y = CenteredResponse::new(data.y());
    fit_columns(data, &y)
}

#[cfg(feature = "parallel")]
fn fit_columns(data: &DataMatrix, y: &CenteredResponse) -> Vec<MarginalFit> {
    use rayon::prelude::*;
    (0..data.p())
        .into_par_iter()
        .map(|j| fit_column(j, data.column(j), y))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn fit_columns(data: &DataMatrix, y: &CenteredResponse) -> Vec<MarginalFit> {
    data.columns()
        .enumerate()
        .map(|(j, col)| fit_column(j, col, y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn exact_linear_relation_is_degenerate() {
        let f = fit_marginal(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert_eq!(f.tau_hat, 2.0);
        assert_eq!(f.b_hat, 1.0);
        assert_eq!(f.v_hat, 0.0);
        assert!(f.degenerate);
        assert!(f.checked_score().is_none());
    }

    #[test]
    fn hand_computed_small_case() {
        // X̄ = 1, Ȳ = 1/3, Cov_n = 0, residuals (−1/3, 2/3, −1/3):
        // numerator 2/27, denominator (2/3)² so v̂ = 1/6.
        let f = fit_marginal(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(f.tau_hat, 0.0);
        assert!((f.b_hat - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.v_hat - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(f.score, 0.0);
        assert!(!f.degenerate);
        assert!((f.var_x_n - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_feature_is_degenerate() {
        let f = fit_marginal(&[5.0, 5.0, 5.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(f.var_x_n, 0.0);
        assert!(f.degenerate);
        // constant but not exactly representable mean
        let f = fit_marginal(&[0.1; 7], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        assert!(f.degenerate);
    }

    #[test]
    fn response_affine_map() {
        let x = [0.3, -1.2, 2.5, 0.7, 1.1, -0.4];
        let y = [1.0, 0.2, 3.1, -0.5, 2.2, 0.9];
        let y2: Vec<f64> = y.iter().map(|v| 3.0 * v + 7.0).collect();
        let a = fit_marginal(&x, &y).unwrap();
        let b = fit_marginal(&x, &y2).unwrap();
        assert!((b.tau_hat - 3.0 * a.tau_hat).abs() < 1e-12);
        assert!((b.b_hat - (3.0 * a.b_hat + 7.0)).abs() < 1e-12);
        assert!((b.score - a.score).abs() < 1e-12 * a.score.abs());
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            fit_marginal(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { x_len: 2, y_len: 3 })
        );
        assert_eq!(
            fit_marginal(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::TooFewSamples(2))
        );
        assert!(matches!(
            fit_marginal(&[1.0, f64::INFINITY, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::NonFinite { row: 1, .. })
        ));
    }

    #[test]
    fn fit_all_flags_each_case() {
        let y = vec![0.1, 1.9, 3.2, 3.8, 5.1, 6.0];
        let linear: Vec<f64> = y.iter().map(|v| 2.0 * v - 1.0).collect();
        let constant = vec![4.0; 6];
        let noise = vec![0.5, -1.0, 0.3, 2.0, -0.7, 0.1];
        let data = DataMatrix::from_column_vecs(vec![linear, constant, noise.clone()], y.clone())
            .unwrap();
        let fits = fit_all(&data);
        assert_eq!(fits.len(), 3);
        assert!(fits[0].degenerate && fits[0].var_x_n > 0.0);
        assert!(fits[1].degenerate && fits[1].var_x_n == 0.0);
        assert!(!fits[2].degenerate);
        let single = fit_marginal(&noise, &y).unwrap();
        assert_eq!(MarginalFit { feature_index: 2, ..single }, fits[2]);
    }
}
