//! Gaussian-quantile selection rule `|score_j| ≥ γ`, `γ = Φ⁻¹(1 − q/2)`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fit::MarginalFit;
use crate::normal;

/// `Φ⁻¹(1 − q/2)`.
pub fn gamma_from_q(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("q", q, "(0, 1)"));
    }
    Ok(normal::upper_quantile(0.5 * q))
}

/// `2(1 − Φ(γ))`, the two-sided tail mass beyond `γ`.
pub fn q_from_gamma(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) || gamma.is_infinite() {
        return Err(Error::domain("gamma", gamma, "[0, ∞)"));
    }
    Ok(normal::two_sided_tail(gamma))
}

/// Benchmark selection size `m* + q (p − m*)`: every active feature found
/// and nulls selected at rate `q`.
pub fn expected_selection_size(p: usize, m_star: usize, q: f64) -> f64 {
    m_star as f64 + q * (p.saturating_sub(m_star)) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Threshold {
    /// Target false positive rate.
    Q(f64),
    /// Explicit threshold on `|score|`.
    Gamma(f64),
}

/// Threshold specification with both parameterisations resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScreeningConfig {
    pub given: Threshold,
    pub q: f64,
    pub gamma: f64,
    pub two_sided: bool,
}

impl ScreeningConfig {
    pub fn from_q(q: f64) -> Result<Self> {
        Ok(ScreeningConfig {
            given: Threshold::Q(q),
            q,
            gamma: gamma_from_q(q)?,
            two_sided: true,
        })
    }

    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if gamma <= 0.0 {
            return Err(Error::domain("gamma", gamma, "(0, ∞)"));
        }
        Ok(ScreeningConfig {
            given: Threshold::Gamma(gamma),
            q: q_from_gamma(gamma)?,
            gamma,
            two_sided: true,
        })
    }

    pub fn new(threshold: Threshold) -> Result<Self> {
        match threshold {
            Threshold::Q(q) => Self::from_q(q),
            Threshold::Gamma(g) => Self::from_gamma(g),
        }
    }
}

/// One line of the ranked score table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreRow {
    pub index: usize,
    /// NaN for degenerate features.
    pub score: f64,
    pub abs_score: f64,
    pub selected: bool,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScreeningResult {
    pub config: ScreeningConfig,
    /// Selected feature indices, by descending `|score|` then ascending index.
    pub selected: Vec<usize>,
    /// All features in rank order; degenerate features last.
    pub rows: Vec<ScoreRow>,
    pub n_selected: usize,
}

impl ScreeningResult {
    pub fn is_selected(&self, index: usize) -> bool {
        self.selected.contains(&index)
    }

    /// Selection indicator per feature index.
    pub fn selection_mask(&self) -> Vec<bool> {
        let mut mask = alloc::vec![false; self.rows.len()];
        for &j in &self.selected {
            mask[j] = true;
        }
        mask
    }
}

fn rank_order(a: &ScoreRow, b: &ScoreRow) -> Ordering {
    match (a.degenerate, b.degenerate) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        (true, true) => a.index.cmp(&b.index),
        (false, false) => b
            .abs_score
            .total_cmp(&a.abs_score)
            .then(a.index.cmp(&b.index)),
    }
}

/// Applies the selection rule to a set of fits. A feature is kept iff it is
/// non-degenerate and `|score| ≥ γ` (ties are kept).
///
/// Row `index` values are taken from `MarginalFit::feature_index`.
pub fn screen(fits: &[MarginalFit], config: &ScreeningConfig) -> ScreeningResult {
    let gamma = config.gamma;
    let mut rows: Vec<ScoreRow> = fits
        .iter()
        .map(|f| {
            let abs_score = libm::fabs(f.score);
            ScoreRow {
                index: f.feature_index,
                score: f.score,
                abs_score,
                selected: !f.degenerate && abs_score >= gamma,
                degenerate: f.degenerate,
            }
        })
        .collect();
    rows.sort_by(rank_order);
    let selected: Vec<usize> = rows.iter().filter(|r| r.selected).map(|r| r.index).collect();
    ScreeningResult {
        config: *config,
        n_selected: selected.len(),
        selected,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn fit(j: usize, score: f64) -> MarginalFit {
        MarginalFit {
            feature_index: j,
            tau_hat: score,
            b_hat: 0.0,
            v_hat: 1.0,
            score,
            var_x_n: 1.0,
            degenerate: score.is_nan(),
        }
    }

    #[test]
    fn gamma_examples() {
        assert!(gamma_from_q(0.9999999).unwrap().abs() < 1e-6);
        assert!((gamma_from_q(0.10).unwrap() - 1.644_853_626_951_472_2).abs() < 1e-8);
        assert!((gamma_from_q(5e-5).unwrap() - 4.056).abs() < 5e-4);
        assert!(gamma_from_q(0.0).is_err());
        assert!(gamma_from_q(1.0).is_err());
        assert!(gamma_from_q(f64::NAN).is_err());
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_from_gamma(0.0).unwrap(), 1.0);
        let q = q_from_gamma(4.056).unwrap();
        assert!((q / 5e-5 - 1.0).abs() < 0.05, "{q}");
        let g = gamma_from_q(0.10).unwrap();
        assert!((q_from_gamma(g).unwrap() - 0.10).abs() < 1e-8);
        assert!(q_from_gamma(-0.1).is_err());
    }

    #[test]
    fn expected_size_examples() {
        assert!((expected_selection_size(2000, 14, 0.10) - 212.6).abs() < 1e-9);
        assert!((expected_selection_size(2000, 14, 0.15) - 311.9).abs() < 1e-9);
        assert_eq!(expected_selection_size(10, 0, 0.5), 5.0);
    }

    #[test]
    fn zero_scores_select_nothing() {
        let fits: Vec<_> = (0..5).map(|j| fit(j, 0.0)).collect();
        let r = screen(&fits, &ScreeningConfig::from_q(0.5).unwrap());
        assert!(r.selected.is_empty());
        assert_eq!(r.n_selected, 0);
    }

    #[test]
    fn selects_by_abs_score_in_rank_order() {
        let fits = vec![fit(0, 5.0), fit(1, -4.5), fit(2, 0.1), fit(3, f64::NAN)];
        let r = screen(&fits, &ScreeningConfig::from_q(0.10).unwrap());
        assert_eq!(r.selected, vec![0, 1]);
        assert_eq!(r.rows.last().unwrap().index, 3);
        assert!(!r.rows[3].selected);
    }

    #[test]
    fn boundary_is_inclusive_and_ties_by_index() {
        let fits = vec![fit(0, 2.0), fit(1, -2.0), fit(2, 1.999)];
        let r = screen(&fits, &ScreeningConfig::from_gamma(2.0).unwrap());
        assert_eq!(r.selected, vec![0, 1]);
    }
}
