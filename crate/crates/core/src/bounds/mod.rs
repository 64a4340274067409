//! Explicit constants of the non-asymptotic guarantees, evaluated at
//! plug-in moments.
//!
//! Every multi-term constant is built as a labelled term table
//! ([`Itemized`]) so each summand can be audited on its own. The
//! constants `c_BE` (Berry–Esseen) and `c_{1,R}`, `c_{2,R}` (Rosenthal) are
//! configuration; the defaults are placeholders, not sharp values.

mod constants;
mod guarantees;

pub use constants::{
    g1_terms, g2_terms, g3_terms, h1_terms, h2_terms, h3_terms, h4_terms, h5_terms, k1,
    k2_terms, k_constant, k_constant_ratios, lemma1_constants, lemma2_constants,
    prop1_constants, prop1_constants_with_k,
};
pub use guarantees::{
    be_bound, be_bound_from_h, fpr_deviation_bound, guarantee_report, ssp_lower_bound,
    FeatureGuarantee, GuaranteeReport, ItemizedConstants, SspBound,
};

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundConstantsConfig {
    pub c_be: f64,
    pub c_1r: f64,
    pub c_2r: f64,
}

impl Default for BoundConstantsConfig {
    fn default() -> Self {
        BoundConstantsConfig {
            c_be: 0.56,
            c_1r: 1.0,
            c_2r: 1.0,
        }
    }
}

impl BoundConstantsConfig {
    pub fn new(c_be: f64, c_1r: f64, c_2r: f64) -> Result<Self> {
        for (name, v) in [("c_be", c_be), ("c_1r", c_1r), ("c_2r", c_2r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, "(0, ∞)"));
            }
        }
        Ok(BoundConstantsConfig { c_be, c_1r, c_2r })
    }
}

/// One labelled summand (or ratio) of a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Term {
    pub label: &'static str,
    pub value: f64,
}

/// A constant with its term-by-term breakdown; `total` is the left-to-right
/// sum of `terms`, optionally times `factor`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Itemized {
    pub total: f64,
    pub factor: f64,
    pub terms: Vec<Term>,
}

impl Itemized {
    pub(crate) fn sum(terms: Vec<Term>) -> Self {
        Self::scaled(1.0, terms)
    }

    pub(crate) fn scaled(factor: f64, terms: Vec<Term>) -> Self {
        let sum: f64 = terms.iter().map(|t| t.value).sum();
        Itemized {
            total: factor * sum,
            factor,
            terms,
        }
    }
}
