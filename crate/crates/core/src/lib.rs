//! Model-free marginal screening.
//!
//! For every feature column `X^(j)` the crate fits the marginal slope of the
//! response on that single feature, studentizes it with a
//! heteroscedasticity-robust variance and keeps the features whose
//! `|score|` reaches the Gaussian threshold `Φ⁻¹(1 − q/2)`. No joint model
//! is ever fitted, so the cost is linear in `n · p` and columns are
//! processed independently.
//!
//! Alongside the screening rule the crate provides
//!
//! - [`bounds`]: the explicit non-asymptotic constants of the Berry–Esseen
//!   type inequality for the studentized slope, and the resulting sure
//!   screening and false positive rate guarantees, evaluated at plug-in
//!   moments;
//! - [`simgen`]: the simulation designs used to benchmark the procedure and
//!   a deterministic Monte Carlo harness.
//!
//! The crate is `no_std` (with `alloc`). The `parallel` feature enables
//! rayon-backed column and replicate parallelism; results are bitwise
//! identical with or without it.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod bounds;
pub mod data;
pub mod error;
pub mod fit;
pub mod moments;
pub mod normal;
pub mod screening;
pub mod simgen;
pub mod summary;

mod sum;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use data::DataMatrix;
pub use error::{Error, Result};
pub use fit::{fit_all, fit_marginal, MarginalFit};
pub use moments::{estimate_moments, MomentProfile};
pub use screening::{
    expected_selection_size, gamma_from_q, q_from_gamma, screen, ScoreRow, ScreeningConfig,
    ScreeningResult, Threshold,
};
