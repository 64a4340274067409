//! Simulation designs and the Monte Carlo harness.
//!
//! The explanatory design has four groups:
//!
//! | columns (1-based) | law |
//! |---|---|
//! | 1–5   | standard Gaussians, `Corr(X_i, X_j) = ρ^{|i−j|}` |
//! | 6     | Bernoulli(0.35) |
//! | 7     | χ²(2) |
//! | 8     | `X₁ · Z₁`, `Z₁ ~ Poisson(2)` |
//! | 9     | `X₂ · Z₂`, `Z₂ ~ N(1, 1)` |
//! | 10    | Student t(14) |
//! | 11–14 | `X₁ + Z₃`, `X₃ + Z₄`, `X₄ + Z₅`, `X₅ + Z₆` |
//! | 15–18 | `Z₃, Z₄, Z₅, Z₆` (decoys) |
//! | 19–p  | stationary Gaussian sequence, `Corr = ρ_noise^{|i−j|}` |
//!
//! `Z₃..Z₆` are centred Gaussians whose *variances* are
//! `noise_var_z3_z6`. Both power-correlated blocks are generated with the
//! AR(1) recursion `X_k = ρ X_{k−1} + √(1−ρ²) e_k`.
//!
//! Replicate `r` of a design seeded with `s` draws from ChaCha8 seeded from
//! `s` on stream `r` ([`replicate_rng`]), so replicates are independent
//! streams and can run in any order.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Poisson, StandardNormal, StudentT};

use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::fit::fit_all;
use crate::screening::{screen, ScreeningConfig};

/// Coefficients `(θ₀, θ₁, …, θ₁₀)` of the linear index driving the response.
pub const THETA_STAR: [f64; 11] = [
    -1.0, 3.619350, -3.274923, 2.963273, -2.681280, 2.0, 4.0, 6.0, 3.0, 2.0, 4.0,
];

/// Columns occupied by the structured groups (1–18).
pub const STRUCTURED_COLUMNS: usize = 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OutputKind {
    /// `Y = |θ·(1, X₁..X₁₀)|^0.8 + X₅ ε / 3`, `ε ~ χ²(3) − 3`.
    ContinuousHetero,
    /// `Y | X ~ Poisson(|θ·(1, X₁..X₁₀)|)`.
    Poisson,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationDesign {
    pub p: usize,
    pub n: usize,
    pub rho_signal: f64,
    pub rho_noise: f64,
    pub theta_star: [f64; 11],
    pub output_kind: OutputKind,
    /// Variances of `Z₃, Z₄, Z₅, Z₆`.
    pub noise_var_z3_z6: [f64; 4],
    pub seed: u64,
}

impl SimulationDesign {
    pub fn new(output_kind: OutputKind, n: usize, seed: u64) -> Self {
        SimulationDesign {
            p: 2000,
            n,
            rho_signal: 0.57,
            rho_noise: 0.7,
            theta_star: THETA_STAR,
            output_kind,
            noise_var_z3_z6: [0.4, 0.02, 0.35, 0.55],
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 19 {
            return Err(Error::Design(format!("p = {} but at least 19 columns are required", self.p)));
        }
        if self.n < 3 {
            return Err(Error::Design(format!("n = {} but at least 3 rows are required", self.n)));
        }
        for (name, rho) in [("rho_signal", self.rho_signal), ("rho_noise", self.rho_noise)] {
            if !(rho.abs() < 1.0) {
                return Err(Error::Design(format!("|{name}| = {rho} must be below 1")));
            }
        }
        if self.noise_var_z3_z6.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Design("noise variances must be finite and non-negative".into()));
        }
        if self.theta_star.iter().any(|v| !v.is_finite()) {
            return Err(Error::Design("theta_star must be finite".into()));
        }
        Ok(())
    }
}

/// Active/null partition of the feature indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruthLabels {
    pub m_star: Vec<usize>,
    pub null_set: Vec<usize>,
}

impl TruthLabels {
    pub fn new(p: usize, m_star: &[usize]) -> Result<Self> {
        let mut active = vec![false; p];
        for &j in m_star {
            if j >= p {
                return Err(Error::Design(format!("active index {j} out of range for p = {p}")));
            }
            active[j] = true;
        }
        Ok(TruthLabels {
            m_star: (0..p).filter(|&j| active[j]).collect(),
            null_set: (0..p).filter(|&j| !active[j]).collect(),
        })
    }

    /// Columns 1–14 are correlated with the response; 15–p are not.
    pub fn for_design(p: usize) -> Self {
        TruthLabels {
            m_star: (0..14.min(p)).collect(),
            null_set: (14.min(p)..p).collect(),
        }
    }
}

/// Independent generator for replicate `r` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

#[inline]
fn normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Power-correlated Gaussian columns `[start, end)` via the AR(1) recursion.
fn ar_block<R: rand::Rng + ?Sized>(
    x: &mut [f64],
    n: usize,
    start: usize,
    end: usize,
    rho: f64,
    rng: &mut R,
) {
    let innov = libm::sqrt(1.0 - rho * rho);
    for i in 0..n {
        x[start * n + i] = normal(rng);
    }
    for k in start + 1..end {
        for i in 0..n {
            x[k * n + i] = rho * x[(k - 1) * n + i] + innov * normal(rng);
        }
    }
}

/// Draws the `n × p` explanatory matrix (column-major).
pub fn gen_explanatory<R: rand::Rng + ?Sized>(
    design: &SimulationDesign,
    rng: &mut R,
) -> Result<Vec<f64>> {
    design.validate()?;
    let (n, p) = (design.n, design.p);
    let mut x = vec![0.0; n * p];
    let col = |k: usize| k * n..(k + 1) * n;

    ar_block(&mut x, n, 0, 5, design.rho_signal, rng);

    let bern = Bernoulli::new(0.35).expect("valid probability");
    for v in &mut x[col(5)] {
        *v = if bern.sample(rng) { 1.0 } else { 0.0 };
    }
    let chi2 = ChiSquared::new(2.0).expect("valid dof");
    for v in &mut x[col(6)] {
        *v = chi2.sample(rng);
    }
    let pois = Poisson::new(2.0).expect("valid rate");
    for i in 0..n {
        let z1: f64 = pois.sample(rng);
        x[7 * n + i] = x[i] * z1;
    }
    for i in 0..n {
        let z2 = 1.0 + normal(rng);
        x[8 * n + i] = x[n + i] * z2;
    }
    let t14 = StudentT::new(14.0).expect("valid dof");
    for v in &mut x[col(9)] {
        *v = t14.sample(rng);
    }

    // Z3..Z6 land in columns 15..18 and are added to X1, X3, X4, X5.
    for (offset, (&var, base)) in design.noise_var_z3_z6.iter().zip([0, 2, 3, 4]).enumerate() {
        let sd = libm::sqrt(var);
        let z_col = 14 + offset;
        for i in 0..n {
            let z = sd * normal(rng);
            x[z_col * n + i] = z;
            x[(10 + offset) * n + i] = x[base * n + i] + z;
        }
    }

    if p > STRUCTURED_COLUMNS {
        ar_block(&mut x, n, STRUCTURED_COLUMNS, p, design.rho_noise, rng);
    }
    Ok(x)
}

/// `θ₀ + Σ_{k=1}^{10} θ_k X_k` for row `i` of a column-major matrix.
pub fn linear_index(x: &[f64], n: usize, i: usize, theta: &[f64; 11]) -> f64 {
    theta[1..]
        .iter()
        .enumerate()
        .fold(theta[0], |acc, (k, t)| acc + t * x[k * n + i])
}

/// Continuous heteroscedastic response for one row given the linear index,
/// `X₅` and the centred χ²(3) noise draw.
pub fn continuous_response(linear: f64, x5: f64, eps: f64) -> f64 {
    libm::pow(libm::fabs(linear), 0.8) + x5 * eps / 3.0
}

/// Draws the response for an explanatory matrix from [`gen_explanatory`].
pub fn gen_response<R: rand::Rng + ?Sized>(
    x: &[f64],
    design: &SimulationDesign,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = design.n;
    if x.len() < 10 * n {
        return Err(Error::Design(format!(
            "response needs 10 explanatory columns, got {}",
            x.len() / n.max(1)
        )));
    }
    let theta = &design.theta_star;
    let y = match design.output_kind {
        OutputKind::ContinuousHetero => {
            let chi2 = ChiSquared::new(3.0).expect("valid dof");
            (0..n)
                .map(|i| {
                    let eps = chi2.sample(rng) - 3.0;
                    continuous_response(linear_index(x, n, i, theta), x[4 * n + i], eps)
                })
                .collect()
        }
        OutputKind::Poisson => (0..n)
            .map(|i| {
                let lambda = libm::fabs(linear_index(x, n, i, theta));
                if lambda == 0.0 {
                    Ok(0.0)
                } else {
                    Poisson::new(lambda)
                        .map(|d| d.sample(rng))
                        .map_err(|_| Error::domain("poisson intensity", lambda, "(0, 1.8e15]"))
                }
            })
            .collect::<Result<Vec<f64>>>()?,
    };
    Ok(y)
}

/// Data set of replicate `r`.
pub fn generate(design: &SimulationDesign, r: u64) -> Result<DataMatrix> {
    let mut rng = replicate_rng(design.seed, r);
    let x = gen_explanatory(design, &mut rng)?;
    let y = gen_response(&x, design, &mut rng)?;
    DataMatrix::from_columns(design.n, x, y)
}

/// Screening outcome of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub selected: Vec<usize>,
    pub tpr: f64,
    pub fpr: f64,
}

fn rates(selected: &[usize], truth_mask: &[bool], n_active: usize, n_null: usize) -> (f64, f64) {
    let tp = selected.iter().filter(|&&j| truth_mask[j]).count();
    let fp = selected.len() - tp;
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    (ratio(tp, n_active), ratio(fp, n_null))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloSummary {
    /// Fraction of replicates selecting each feature.
    pub selection_frequency: Vec<f64>,
    /// Mean over replicates of `|M̂ ∩ M*| / |M*|`.
    pub tpr: f64,
    /// Mean over replicates of `|M̂ ∩ M*ᶜ| / |M*ᶜ|`.
    pub fpr: f64,
    pub mean_selected: f64,
    pub n_replicates: usize,
    pub design: SimulationDesign,
    pub q: f64,
    pub gamma: f64,
}

/// Folds replicate outcomes in replicate order.
fn summarize(
    outcomes: &[ReplicateOutcome],
    p: usize,
    design: &SimulationDesign,
    config: &ScreeningConfig,
) -> MonteCarloSummary {
    let reps = outcomes.len() as f64;
    let mut counts = vec![0_u64; p];
    let (mut tpr, mut fpr, mut size) = (0.0, 0.0, 0.0);
    for o in outcomes {
        for &j in &o.selected {
            counts[j] += 1;
        }
        tpr += o.tpr;
        fpr += o.fpr;
        size += o.selected.len() as f64;
    }
    MonteCarloSummary {
        selection_frequency: counts.iter().map(|&c| c as f64 / reps).collect(),
        tpr: tpr / reps,
        fpr: fpr / reps,
        mean_selected: size / reps,
        n_replicates: outcomes.len(),
        design: design.clone(),
        q: config.q,
        gamma: config.gamma,
    }
}

#[cfg(feature = "parallel")]
fn run_indexed<T: Send, F>(count: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_indexed<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..count).map(f).collect()
}

/// Screens one replicate of `design`.
pub fn run_replicate(
    design: &SimulationDesign,
    config: &ScreeningConfig,
    truth: &TruthLabels,
    r: usize,
) -> Result<ReplicateOutcome> {
    let data = generate(design, r as u64)?;
    let result = screen(&fit_all(&data), config);
    let mut mask = vec![false; design.p];
    for &j in &truth.m_star {
        mask[j] = true;
    }
    let (tpr, fpr) = rates(&result.selected, &mask, truth.m_star.len(), truth.null_set.len());
    let mut selected = result.selected;
    selected.sort_unstable();
    Ok(ReplicateOutcome { selected, tpr, fpr })
}

/// Monte Carlo evaluation of the screening rule at false positive rate `q`
/// with the design's default truth labels.
pub fn run_monte_carlo(
    design: &SimulationDesign,
    q: f64,
    n_replicates: usize,
) -> Result<MonteCarloSummary> {
    run_monte_carlo_with(design, &ScreeningConfig::from_q(q)?, n_replicates)
}

/// [`run_monte_carlo`] with an explicit threshold configuration.
pub fn run_monte_carlo_with(
    design: &SimulationDesign,
    config: &ScreeningConfig,
    n_replicates: usize,
) -> Result<MonteCarloSummary> {
    design.validate()?;
    if n_replicates == 0 {
        return Err(Error::Design("at least one replicate is required".into()));
    }
    let truth = TruthLabels::for_design(design.p);
    let outcomes = run_indexed(n_replicates, |r| {
        run_replicate(design, config, &truth, r).map_err(|e| Error::Replicate {
            replicate: r,
            source: alloc::boxed::Box::new(e),
        })
    })?;
    Ok(summarize(&outcomes, design.p, design, config))
}

/// Empirical false positive rate when every feature and the response are
/// independent standard Gaussians: mean over replicates of `|M̂| / p`.
pub fn null_calibration(p: usize, n: usize, q: f64, n_replicates: usize, seed: u64) -> Result<f64> {
    if p == 0 || n < 3 {
        return Err(Error::Design(format!("null calibration needs p ≥ 1 and n ≥ 3, got p = {p}, n = {n}")));
    }
    if n_replicates == 0 {
        return Err(Error::Design("at least one replicate is required".into()));
    }
    let config = ScreeningConfig::from_q(q)?;
    let rates = run_indexed(n_replicates, |r| {
        let mut rng = replicate_rng(seed, r as u64);
        let x: Vec<f64> = (0..n * p).map(|_| normal(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| normal(&mut rng)).collect();
        let data = DataMatrix::from_columns(n, x, y)?;
        let result = screen(&fit_all(&data), &config);
        Ok(result.n_selected as f64 / p as f64)
    })?;
    Ok(rates.iter().sum::<f64>() / n_replicates as f64)
}
