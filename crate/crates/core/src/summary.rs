//! Order-statistic summaries of score distributions.

use alloc::vec::Vec;

/// Quantile of sorted data with linear interpolation between order
/// statistics: position `h = (m − 1)·p`, value
/// `x[⌊h⌋] + (h − ⌊h⌋)(x[⌊h⌋+1] − x[⌊h⌋])`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Five-number summary plus the 90% quantile and the threshold in force.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistributionSummary {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub p90: f64,
    pub max: f64,
    pub threshold: f64,
}

impl DistributionSummary {
    /// Summary of the finite entries of `values`.
    pub fn new(values: impl IntoIterator<Item = f64>, threshold: f64) -> Self {
        let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
        v.sort_by(f64::total_cmp);
        DistributionSummary {
            count: v.len(),
            min: v.first().copied().unwrap_or(f64::NAN),
            q1: quantile_sorted(&v, 0.25),
            median: quantile_sorted(&v, 0.5),
            q3: quantile_sorted(&v, 0.75),
            p90: quantile_sorted(&v, 0.9),
            max: v.last().copied().unwrap_or(f64::NAN),
            threshold,
        }
    }
}
