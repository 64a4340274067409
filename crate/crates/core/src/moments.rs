//! Plug-in moment estimates for one `(X, Y)` pair.
//!
//! Notation: `X̃ = X − E X`, `Ỹ = Y − E Y`, `τ = Cov(X, Y)/Var(X)`,
//! `ε = Ỹ − τ X̃`, `‖Z‖_q = (E|Z|^q)^{1/q}`. Every expectation is replaced by
//! the empirical mean over the sample.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sum::{mean, sum_map};

/// Plug-in moments entering the non-asymptotic constants.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentProfile {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub sigma_eps: f64,
    pub tau: f64,
    /// `‖X̃‖₃`
    pub x_l3: f64,
    pub x_l4: f64,
    pub x_l6: f64,
    pub y_l3: f64,
    pub y_l4: f64,
    pub eps_l3: f64,
    /// `‖X̃ε‖₂`
    pub xeps_l2: f64,
    pub xeps_l3: f64,
    pub xeps_l4: f64,
    pub xeps_l6: f64,
    /// `‖X̃Ỹ‖₂`
    pub xy_l2: f64,
    /// `‖X̃²Ỹ‖₁`
    pub x2y_l1: f64,
    pub x2y_l2: f64,
    /// `‖Ỹ²X̃‖₁`
    pub y2x_l1: f64,
    pub y2x_l2: f64,
    /// `‖X̃³Ỹ‖₁`
    pub x3y_l1: f64,
    /// `‖X̃³Ỹ‖_{3/2}`
    pub x3y_l3_2: f64,
    /// `Var(X̃²ε²)`
    pub var_x2eps2: f64,
    pub n_used: usize,
}

impl MomentProfile {
    /// Profile with every norm and standard deviation equal to one, `τ = 0`
    /// and `Var(X̃²ε²) = 1`.
    pub fn unit() -> Self {
        MomentProfile {
            sigma_x: 1.0,
            sigma_y: 1.0,
            sigma_eps: 1.0,
            tau: 0.0,
            x_l3: 1.0,
            x_l4: 1.0,
            x_l6: 1.0,
            y_l3: 1.0,
            y_l4: 1.0,
            eps_l3: 1.0,
            xeps_l2: 1.0,
            xeps_l3: 1.0,
            xeps_l4: 1.0,
            xeps_l6: 1.0,
            xy_l2: 1.0,
            x2y_l1: 1.0,
            x2y_l2: 1.0,
            y2x_l1: 1.0,
            y2x_l2: 1.0,
            x3y_l1: 1.0,
            x3y_l3_2: 1.0,
            var_x2eps2: 1.0,
            n_used: 0,
        }
    }

    /// Chains of norms of the same variable that must be non-decreasing in
    /// the exponent, labelled for diagnostics.
    pub fn lyapunov_chains(&self) -> [(&'static str, Vec<f64>); 7] {
        use alloc::vec;
        [
            ("X", vec![self.sigma_x, self.x_l3, self.x_l4, self.x_l6]),
            ("Y", vec![self.sigma_y, self.y_l3, self.y_l4]),
            ("eps", vec![self.sigma_eps, self.eps_l3]),
            ("X*eps", vec![self.xeps_l2, self.xeps_l3, self.xeps_l4, self.xeps_l6]),
            ("X^2*Y", vec![self.x2y_l1, self.x2y_l2]),
            ("Y^2*X", vec![self.y2x_l1, self.y2x_l2]),
            ("X^3*Y", vec![self.x3y_l1, self.x3y_l3_2]),
        ]
    }
}

fn lp_norm(len: usize, q: f64, mut f: impl FnMut(usize) -> f64) -> f64 {
    let m = sum_map(len, |i| libm::pow(libm::fabs(f(i)), q)) / len as f64;
    libm::pow(m, 1.0 / q)
}

/// Plug-in [`MomentProfile`] of `(x, y)`.
pub fn estimate_moments(x: &[f64], y: &[f64]) -> Result<MomentProfile> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            x_len: x.len(),
            y_len: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    if let Some(row) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: row % n,
            column: (row < n).then_some(0),
        });
    }
    let nf = n as f64;
    let mx = mean(x);
    let my = mean(y);
    let xt: Vec<f64> = x.iter().map(|v| v - mx).collect();
    let yt: Vec<f64> = y.iter().map(|v| v - my).collect();

    let sxx = sum_map(n, |i| xt[i] * xt[i]);
    if sxx == 0.0 || x.iter().all(|&v| v == x[0]) {
        return Err(Error::DegenerateProfile("Var_n(X)"));
    }
    let tau = sum_map(n, |i| xt[i] * yt[i]) / sxx;
    let eps: Vec<f64> = (0..n).map(|i| yt[i] - tau * xt[i]).collect();
    let xe: Vec<f64> = (0..n).map(|i| xt[i] * eps[i]).collect();

    let x2e2: Vec<f64> = xe.iter().map(|v| v * v).collect();
    let x2e2_mean = mean(&x2e2);
    let var_x2eps2 = sum_map(n, |i| {
        let d = x2e2[i] - x2e2_mean;
        d * d
    }) / nf;

    Ok(MomentProfile {
        sigma_x: libm::sqrt(sxx / nf),
        sigma_y: lp_norm(n, 2.0, |i| yt[i]),
        sigma_eps: lp_norm(n, 2.0, |i| eps[i]),
        tau,
        x_l3: lp_norm(n, 3.0, |i| xt[i]),
        x_l4: lp_norm(n, 4.0, |i| xt[i]),
        x_l6: lp_norm(n, 6.0, |i| xt[i]),
        y_l3: lp_norm(n, 3.0, |i| yt[i]),
        y_l4: lp_norm(n, 4.0, |i| yt[i]),
        eps_l3: lp_norm(n, 3.0, |i| eps[i]),
        xeps_l2: lp_norm(n, 2.0, |i| xe[i]),
        xeps_l3: lp_norm(n, 3.0, |i| xe[i]),
        xeps_l4: lp_norm(n, 4.0, |i| xe[i]),
        xeps_l6: lp_norm(n, 6.0, |i| xe[i]),
        xy_l2: lp_norm(n, 2.0, |i| xt[i] * yt[i]),
        x2y_l1: lp_norm(n, 1.0, |i| xt[i] * xt[i] * yt[i]),
        x2y_l2: lp_norm(n, 2.0, |i| xt[i] * xt[i] * yt[i]),
        y2x_l1: lp_norm(n, 1.0, |i| yt[i] * yt[i] * xt[i]),
        y2x_l2: lp_norm(n, 2.0, |i| yt[i] * yt[i] * xt[i]),
        x3y_l1: lp_norm(n, 1.0, |i| xt[i] * xt[i] * xt[i] * yt[i]),
        x3y_l3_2: lp_norm(n, 1.5, |i| xt[i] * xt[i] * xt[i] * yt[i]),
        var_x2eps2,
        n_used: n,
    })
}
