use alloc::vec::Vec;

use super::constants::*;
use super::{BoundConstantsConfig, Itemized, Term};
use crate::error::{Error, Result};
use crate::moments::MomentProfile;

fn check_n(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("n", n as f64, "[2, ∞)"));
    }
    Ok(n as f64)
}

/// `(log n/√n)H₁ + H₂/√n + H₃/√(n log n) + H₄/n + H₅/n^{3/2}`.
pub fn be_bound_from_h(h: &[f64; 5], n: u64) -> Result<f64> {
    let nf = check_n(n)?;
    let ln = libm::log(nf);
    let rt = libm::sqrt(nf);
    Ok(ln / rt * h[0] + h[1] / rt + h[2] / libm::sqrt(nf * ln) + h[3] / nf + h[4] / (nf * rt))
}

/// Sup-distance bound between the law of the studentized slope and `Φ`.
pub fn be_bound(m: &MomentProfile, c: &BoundConstantsConfig, n: u64) -> Result<f64> {
    be_bound_from_h(&prop1_constants(m, c)?, n)
}

/// Lower bound on `P(M* ⊂ M̂)`; `vacuous` when it is negative or not finite.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SspBound {
    pub value: f64,
    pub vacuous: bool,
}

impl SspBound {
    fn new(value: f64) -> Self {
        SspBound {
            value,
            vacuous: !(value >= 0.0) || !value.is_finite(),
        }
    }
}

fn max_over<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, |a, b| {
        if b.is_nan() || a.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

/// Sure screening lower bound for the active set described by `profiles`
/// (one per active feature) and population slopes `taus`.
///
/// The Gaussian tail term of feature `j` is
/// `exp(−¼(√n σ²_X |τ_j| / (2√2 ‖X̃ε‖₂) − γ)²)` when the bracket is
/// non-negative and `1` otherwise.
pub fn ssp_lower_bound(
    profiles: &[MomentProfile],
    taus: &[f64],
    n: u64,
    gamma: f64,
    c: &BoundConstantsConfig,
) -> Result<SspBound> {
    if profiles.len() != taus.len() {
        return Err(Error::LengthMismatch {
            x_len: profiles.len(),
            y_len: taus.len(),
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::domain("gamma", gamma, "(0, ∞)"));
    }
    let nf = check_n(n)?;
    if profiles.is_empty() {
        return Ok(SspBound::new(1.0));
    }
    let rt = libm::sqrt(nf);
    let card = profiles.len() as f64;

    let mut tails = 0.0;
    let mut max_k1 = Vec::with_capacity(profiles.len());
    let mut max_root = Vec::with_capacity(profiles.len());
    let mut max_n = Vec::with_capacity(profiles.len());
    let mut max_n32 = Vec::with_capacity(profiles.len());
    for (j, (m, &tau)) in profiles.iter().zip(taus).enumerate() {
        let per = || -> Result<(f64, f64, f64, f64, f64)> {
            if tau == 0.0 || !tau.is_finite() {
                return Err(Error::domain("tau", tau, "non-zero"));
            }
            let (k1, k2) = lemma1_constants(m, c)?;
            let (g1, g2, g3) = lemma2_constants(m, c)?;
            let arg = rt * m.sigma_x * m.sigma_x * libm::fabs(tau)
                / (2.0 * core::f64::consts::SQRT_2 * m.xeps_l2)
                - gamma;
            let tail = if arg >= 0.0 {
                libm::exp(-0.25 * arg * arg)
            } else {
                1.0
            };
            let root =
                2.0 * k2 + 2.0 * m.x_l4 * m.x_l4 / (m.sigma_x * m.sigma_x) + g1;
            Ok((tail, 2.0 * k1, root, 4.0 * g2 + 2.0, g3))
        };
        let (tail, a, b, cc, d) = per().map_err(|e| e.at_feature(j))?;
        tails += tail;
        max_k1.push(a);
        max_root.push(b);
        max_n.push(cc);
        max_n32.push(d);
    }
    let value = 1.0
        - tails
        - libm::log(nf) / rt * card * max_over(max_k1)
        - card / rt * max_over(max_root)
        - card / nf * max_over(max_n)
        - card / (nf * rt) * max_over(max_n32);
    Ok(SspBound::new(value))
}

/// Bound on `|E[|M*ᶜ ∩ M̂| / |M*ᶜ|] − q|` from the profiles of the null
/// features. Zero for an empty null set.
pub fn fpr_deviation_bound(
    profiles: &[MomentProfile],
    n: u64,
    c: &BoundConstantsConfig,
) -> Result<f64> {
    let hs = profiles
        .iter()
        .enumerate()
        .map(|(j, m)| prop1_constants(m, c).map_err(|e| e.at_feature(j)))
        .collect::<Result<Vec<_>>>()?;
    fpr_deviation_from_h(&hs, n)
}

pub(crate) fn fpr_deviation_from_h(hs: &[[f64; 5]], n: u64) -> Result<f64> {
    check_n(n)?;
    if hs.is_empty() {
        return Ok(0.0);
    }
    let mut max2 = [0.0; 5];
    for (i, slot) in max2.iter_mut().enumerate() {
        *slot = 2.0 * max_over(hs.iter().map(|h| h[i]));
    }
    be_bound_from_h(&max2, n)
}

/// Term-by-term breakdown of every constant for one feature.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ItemizedConstants {
    pub k2: Itemized,
    pub g1: Itemized,
    pub g2: Itemized,
    pub g3: Itemized,
    pub k_ratios: Vec<Term>,
    pub h1: Itemized,
    pub h2: Itemized,
    pub h3: Itemized,
    pub h4: Itemized,
    pub h5: Itemized,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FeatureGuarantee {
    pub feature: usize,
    pub active: bool,
    pub k1: f64,
    pub k2: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub k_const: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h4: f64,
    pub h5: f64,
    pub be_bound: f64,
    pub profile: MomentProfile,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub itemized: Option<ItemizedConstants>,
}

impl FeatureGuarantee {
    fn compute(
        feature: usize,
        active: bool,
        m: &MomentProfile,
        c: &BoundConstantsConfig,
        n: u64,
        itemize: bool,
    ) -> Result<Self> {
        let k1 = k1(m)?;
        let k2 = k2_terms(m, c)?;
        let g1 = g1_terms(m)?;
        let g2 = g2_terms(m, c)?;
        let g3 = g3_terms(m, c)?;
        let k_ratios = k_constant_ratios(m)?;
        let k_const = k_constant(m)?;
        let h1 = h1_terms(m, k_const)?;
        let h2 = h2_terms(m, c)?;
        let h3 = h3_terms(m, k_const)?;
        let h4 = h4_terms(m, c)?;
        let h5 = h5_terms(m, c)?;
        let hs = [h1.total, h2.total, h3.total, h4.total, h5.total];
        Ok(FeatureGuarantee {
            feature,
            active,
            k1,
            k2: k2.total,
            g1: g1.total,
            g2: g2.total,
            g3: g3.total,
            k_const,
            h1: hs[0],
            h2: hs[1],
            h3: hs[2],
            h4: hs[3],
            h5: hs[4],
            be_bound: be_bound_from_h(&hs, n)?,
            profile: *m,
            itemized: itemize.then(|| ItemizedConstants {
                k2,
                g1,
                g2,
                g3,
                k_ratios,
                h1,
                h2,
                h3,
                h4,
                h5,
            }),
        })
    }

    pub fn h(&self) -> [f64; 5] {
        [self.h1, self.h2, self.h3, self.h4, self.h5]
    }
}

/// All guarantee diagnostics for a screening run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GuaranteeReport {
    pub n: u64,
    pub gamma: f64,
    pub constants: BoundConstantsConfig,
    pub active_set: Vec<usize>,
    pub features: Vec<FeatureGuarantee>,
    pub ssp_lower_bound: f64,
    pub ssp_vacuous: bool,
    pub fpr_deviation_bound: f64,
}

/// Builds the report from one profile per feature (`profiles[j]` belongs
/// to feature `j`) and the declared active set. Active features are
/// itemized term by term; the plug-in `τ` of each profile stands in for the
/// population slope.
pub fn guarantee_report(
    profiles: &[MomentProfile],
    active: &[usize],
    n: u64,
    gamma: f64,
    c: &BoundConstantsConfig,
) -> Result<GuaranteeReport> {
    let mut is_active = alloc::vec![false; profiles.len()];
    for &j in active {
        if j >= profiles.len() {
            return Err(Error::Shape(alloc::format!(
                "active feature {j} out of range for {} features",
                profiles.len()
            )));
        }
        is_active[j] = true;
    }
    let features = profiles
        .iter()
        .enumerate()
        .map(|(j, m)| {
            FeatureGuarantee::compute(j, is_active[j], m, c, n, is_active[j])
                .map_err(|e| e.at_feature(j))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut active_set: Vec<usize> = (0..profiles.len()).filter(|&j| is_active[j]).collect();
    active_set.dedup();
    let act: Vec<MomentProfile> = active_set.iter().map(|&j| profiles[j]).collect();
    let taus: Vec<f64> = act.iter().map(|m| m.tau).collect();
    let ssp = ssp_lower_bound(&act, &taus, n, gamma, c).map_err(|e| match e {
        Error::Feature { feature, source } => Error::Feature {
            feature: active_set[feature],
            source,
        },
        other => other,
    })?;
    let null_h: Vec<[f64; 5]> = features.iter().filter(|f| !f.active).map(|f| f.h()).collect();
    Ok(GuaranteeReport {
        n,
        gamma,
        constants: *c,
        fpr_deviation_bound: fpr_deviation_from_h(&null_h, n)?,
        active_set,
        features,
        ssp_lower_bound: ssp.value,
        ssp_vacuous: ssp.vacuous,
    })
}
