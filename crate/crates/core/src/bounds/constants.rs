use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use super::{BoundConstantsConfig, Itemized, Term};
use crate::error::{Error, Result};
use crate::moments::MomentProfile;

#[inline]
fn sq(v: f64) -> f64 {
    v * v
}

#[inline]
fn cube(v: f64) -> f64 {
    v * v * v
}

fn sqrt_2pi() -> f64 {
    libm::sqrt(2.0 * PI)
}

fn require(checks: &[(&'static str, f64)]) -> Result<()> {
    for &(name, v) in checks {
        if !(v > 0.0) {
            return Err(Error::DegenerateProfile(name));
        }
    }
    Ok(())
}

macro_rules! terms {
    ($($label:expr => $value:expr),+ $(,)?) => {
        vec![$(Term { label: $label, value: $value }),+]
    };
}

/// `K₁ = σ_ε σ_X / (√(2π) ‖X̃ε‖₂)`.
pub fn k1(m: &MomentProfile) -> Result<f64> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_eps", m.sigma_eps),
        ("sigma_x", m.sigma_x),
    ])?;
    Ok(m.sigma_eps * m.sigma_x / (sqrt_2pi() * m.xeps_l2))
}

/// `K₂ = 2 + c_BE [‖X̃ε‖₃³/‖X̃ε‖₂³ + 2‖ε‖₃³/σ_ε³ + 2‖X̃‖₃³/σ_X³]`.
pub fn k2_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_eps", m.sigma_eps),
        ("sigma_x", m.sigma_x),
    ])?;
    Ok(Itemized::sum(terms![
        "2" => 2.0,
        "c_be*||X eps||_3^3/||X eps||_2^3" => c.c_be * cube(m.xeps_l3) / cube(m.xeps_l2),
        "c_be*2*||eps||_3^3/sigma_eps^3" => c.c_be * 2.0 * cube(m.eps_l3) / cube(m.sigma_eps),
        "c_be*2*||X||_3^3/sigma_x^3" => c.c_be * 2.0 * cube(m.x_l3) / cube(m.sigma_x),
    ]))
}

pub fn lemma1_constants(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<(f64, f64)> {
    Ok((k1(m)?, k2_terms(m, c)?.total))
}

fn lemma2_denominators(m: &MomentProfile) -> Result<()> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_x", m.sigma_x),
        ("sigma_y", m.sigma_y),
        ("x_l3", m.x_l3),
        ("x_l4", m.x_l4),
        ("x2y_l1", m.x2y_l1),
        ("y2x_l1", m.y2x_l1),
        ("x3y_l1", m.x3y_l1),
    ])
}

/// The twenty summands of `G₁`.
pub fn g1_terms(m: &MomentProfile) -> Result<Itemized> {
    lemma2_denominators(m)?;
    let (sx, sy, tau) = (m.sigma_x, m.sigma_y, libm::fabs(m.tau));
    let b2 = sq(m.xeps_l2);
    Ok(Itemized::sum(terms![
        "64*||Y^2 X||_1*sigma_x/||X eps||_2^2" => 64.0 * m.y2x_l1 * sx / b2,
        "1120*||X||_3^3*sigma_y^2/(||X eps||_2^2*sigma_x)" => 1120.0 * cube(m.x_l3) * sq(sy) / (b2 * sx),
        "64*sqrt(2)*||X eps||_3^3/||X eps||_2^3" => 64.0 * SQRT_2 * cube(m.xeps_l3) / cube(m.xeps_l2),
        "288*sigma_y*||X^2 Y||_1/||X eps||_2^2" => 288.0 * sy * m.x2y_l1 / b2,
        "432*|tau|*||X||_3^3*sigma_y/||X eps||_2^2" => 432.0 * tau * cube(m.x_l3) * sy / b2,
        "1152*||X^3 Y||_1/(sigma_x^2*||X eps||_2)" => 1152.0 * m.x3y_l1 / (sq(sx) * m.xeps_l2),
        "1152*||X||_4^4*sigma_y/(sigma_x^3*||X eps||_2)" => 1152.0 * sq(sq(m.x_l4)) * sy / (cube(sx) * m.xeps_l2),
        "576*|tau|*||X||_4^4/(sigma_x^2*||X eps||_2)" => 576.0 * tau * sq(sq(m.x_l4)) / (sq(sx) * m.xeps_l2),
        "576*||X^2 Y||_1*sigma_y/(||X eps||_2^2*sigma_x)" => 576.0 * m.x2y_l1 * sy / (b2 * sx),
        "2*||X^2 Y||_2/||X^2 Y||_1" => 2.0 * m.x2y_l2 / m.x2y_l1,
        "(2*||Y^2 X||_2 + sigma_x*||Y||_4^2 + 4*sigma_y*||X Y||_2)/(2*||Y^2 X||_1)" =>
            (2.0 * m.y2x_l2 + sx * sq(m.y_l4) + 4.0 * sy * m.xy_l2) / (2.0 * m.y2x_l1),
        "sigma_y*||X||_4^2/||X^2 Y||_1" => sy * sq(m.x_l4) / m.x2y_l1,
        "13*sigma_x*||X||_4^2/(4*||X||_3^3)" => 13.0 * sx * sq(m.x_l4) / (4.0 * cube(m.x_l3)),
        "9*||X||_6^3/(2*||X||_3^3)" => 9.0 * cube(m.x_l6) / (2.0 * cube(m.x_l3)),
        "6*||Y||_4^2/sigma_y^2" => 6.0 * sq(m.y_l4) / sq(sy),
        "16*||X||_4^2/sigma_x^2" => 16.0 * sq(m.x_l4) / sq(sx),
        "2^(7/2)*||X^3 Y||_(3/2)^(3/2)/||X^3 Y||_1^(3/2)" =>
            8.0 * SQRT_2 * libm::pow(m.x3y_l3_2, 1.5) / libm::pow(m.x3y_l1, 1.5),
        "sigma_y*||X||_6^3/(2*||X^3 Y||_1)" => sy * cube(m.x_l6) / (2.0 * m.x3y_l1),
        "8*||X||_6^6/||X||_4^6" => 8.0 * sq(cube(m.x_l6)) / sq(cube(m.x_l4)),
        "sigma_x*||X||_6^3/(2*||X||_4^4)" => sx * cube(m.x_l6) / (2.0 * sq(sq(m.x_l4))),
    ]))
}

pub fn g2_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    lemma2_denominators(m)?;
    let (sx, sy, se, tau) = (m.sigma_x, m.sigma_y, m.sigma_eps, libm::fabs(m.tau));
    let b2 = sq(m.xeps_l2);
    let x4 = sq(sq(m.x_l4));
    let c1 = sq(c.c_1r);
    Ok(Itemized::sum(terms![
        "4" => 4.0,
        "288*||X^3 Y||_1*sigma_eps/(sigma_x*||X eps||_2^2)" => 288.0 * m.x3y_l1 * se / (sx * b2),
        "288*sigma_y*sigma_eps*||X||_4^4/(||X eps||_2^2*sigma_x^2)" => 288.0 * sy * se * x4 / (b2 * sq(sx)),
        "144*|tau|*sigma_eps*||X||_4^4/(sigma_x*||X eps||_2^2)" => 144.0 * tau * se * x4 / (sx * b2),
        "c_1r^2*sigma_x^3/||X||_3^3" => c1 * cube(sx) / cube(m.x_l3),
        "2*c_1r^2*sigma_x*sigma_y^2/||Y^2 X||_1" => 2.0 * c1 * sx * sq(sy) / m.y2x_l1,
    ]))
}

pub fn g3_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    lemma2_denominators(m)?;
    Ok(Itemized::scaled(
        16.0 * sq(c.c_2r),
        terms![
            "sigma_x*||X||_4^2/||X||_3^3" => m.sigma_x * sq(m.x_l4) / cube(m.x_l3),
            "2*sigma_x*||Y||_4^2/||Y^2 X||_1" => 2.0 * m.sigma_x * sq(m.y_l4) / m.y2x_l1,
        ],
    ))
}

pub fn lemma2_constants(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<(f64, f64, f64)> {
    Ok((
        g1_terms(m)?.total,
        g2_terms(m, c)?.total,
        g3_terms(m, c)?.total,
    ))
}

/// The nine ratios inside the minimum defining `K`. Ratios with `|τ|` in
/// the denominator are `+∞` when `τ = 0`.
pub fn k_constant_ratios(m: &MomentProfile) -> Result<Vec<Term>> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_x", m.sigma_x),
        ("sigma_y", m.sigma_y),
        ("x_l3", m.x_l3),
        ("x_l4", m.x_l4),
        ("xeps_l4", m.xeps_l4),
        ("x2y_l1", m.x2y_l1),
        ("y2x_l1", m.y2x_l1),
        ("x3y_l1", m.x3y_l1),
    ])?;
    let (sx, sy, b) = (m.sigma_x, m.sigma_y, m.xeps_l2);
    let tau = libm::fabs(m.tau);
    let x3 = cube(m.x_l3);
    let x4 = sq(sq(m.x_l4));
    let over_tau = |v: f64| if tau == 0.0 { f64::INFINITY } else { v };
    Ok(terms![
        "||X eps||_2/(36*||X^2 Y||_1*sigma_y)" => b / (36.0 * m.x2y_l1 * sy),
        "||X eps||_2*sigma_x/(72*||X^2 Y||_1*sigma_y)" => b * sx / (72.0 * m.x2y_l1 * sy),
        "||X eps||_2*sigma_x/(72*||X||_3^3*sigma_y^2)" => b * sx / (72.0 * x3 * sq(sy)),
        "||X eps||_2/(36*|tau|*||X||_3^3*sigma_y)" => over_tau(b / (36.0 * tau * x3 * sy)),
        "sigma_x^2/(288*||X^3 Y||_1)" => sq(sx) / (288.0 * m.x3y_l1),
        "sigma_x^3/(288*||X||_4^4*sigma_y)" => cube(sx) / (288.0 * x4 * sy),
        "sigma_x^2/(72*|tau|*||X||_4^4)" => over_tau(sq(sx) / (72.0 * tau * x4)),
        "||X eps||_2/||X eps||_4^2" => b / sq(m.xeps_l4),
        "||X eps||_2/(8*||Y^2 X||_1*sigma_x)" => b / (8.0 * m.y2x_l1 * sx),
    ])
}

/// `K = (‖X̃ε‖₂/4) · min(ratios)`.
pub fn k_constant(m: &MomentProfile) -> Result<f64> {
    let min = k_constant_ratios(m)?
        .iter()
        .map(|t| t.value)
        .fold(f64::INFINITY, f64::min);
    Ok(m.xeps_l2 / 4.0 * min)
}

pub fn h1_terms(m: &MomentProfile, k: f64) -> Result<Itemized> {
    require(&[("xeps_l2", m.xeps_l2), ("K", k)])?;
    Ok(Itemized::sum(terms![
        "3*sigma_eps*sigma_x/(sqrt(2 pi)*||X eps||_2)" => 3.0 * m.sigma_eps * m.sigma_x / (sqrt_2pi() * m.xeps_l2),
        "1/(sqrt(2 pi)*K)" => 1.0 / (sqrt_2pi() * k),
    ]))
}

pub fn h2_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_x", m.sigma_x),
        ("sigma_y", m.sigma_y),
        ("sigma_eps", m.sigma_eps),
        ("x_l3", m.x_l3),
        ("x_l4", m.x_l4),
        ("x2y_l1", m.x2y_l1),
        ("y2x_l1", m.y2x_l1),
        ("x3y_l1", m.x3y_l1),
        ("var_x2eps2", m.var_x2eps2),
    ])?;
    let (sx, sy, se, tau) = (m.sigma_x, m.sigma_y, m.sigma_eps, libm::fabs(m.tau));
    let cbe = c.c_be;
    let b2 = sq(m.xeps_l2);
    let x3 = cube(m.x_l3);
    let x4 = sq(sq(m.x_l4));
    Ok(Itemized::sum(terms![
        "19" => 19.0,
        "(2*||Y^2 X||_2 + sigma_x*||Y||_4^2 + 4*sigma_y*||X Y||_2)/||Y^2 X||_1" =>
            (2.0 * m.y2x_l2 + sx * sq(m.y_l4) + 4.0 * sy * m.xy_l2) / m.y2x_l1,
        "9*c_be*||X eps||_3^3/||X eps||_2^3" => 9.0 * cbe * cube(m.xeps_l3) / cube(m.xeps_l2),
        "6*c_be*||eps||_3^3/sigma_eps^3" => 6.0 * cbe * cube(m.eps_l3) / cube(se),
        "16*c_be*||X||_3^3/sigma_x^3" => 16.0 * cbe * x3 / cube(sx),
        "2*c_be*||X eps||_6^6/Var(X^2 eps^2)^(3/2)" =>
            2.0 * cbe * sq(cube(m.xeps_l6)) / libm::pow(m.var_x2eps2, 1.5),
        "6*c_be*||Y||_3^3/sigma_y^3" => 6.0 * cbe * cube(m.y_l3) / cube(sy),
        "4*||X^2 Y||_2/||X^2 Y||_1" => 4.0 * m.x2y_l2 / m.x2y_l1,
        "2*sigma_y*||X||_4^2/||X^2 Y||_1" => 2.0 * sy * sq(m.x_l4) / m.x2y_l1,
        "(13/2)*sigma_x*||X||_4^2/||X||_3^3" => 6.5 * sx * sq(m.x_l4) / x3,
        "9*||X||_6^3/||X||_3^3" => 9.0 * cube(m.x_l6) / x3,
        "12*||Y||_4^2/sigma_y^2" => 12.0 * sq(m.y_l4) / sq(sy),
        "32*||X||_4^2/sigma_x^2" => 32.0 * sq(m.x_l4) / sq(sx),
        "2^(11/2)*||X^3 Y||_(3/2)^(3/2)/||X^3 Y||_1^(3/2)" =>
            32.0 * SQRT_2 * libm::pow(m.x3y_l3_2, 1.5) / libm::pow(m.x3y_l1, 1.5),
        "(3/4)*sigma_y*||X||_6^3/||X^3 Y||_1" => 0.75 * sy * cube(m.x_l6) / m.x3y_l1,
        "16*||X||_6^6/||X||_4^6" => 16.0 * sq(cube(m.x_l6)) / sq(cube(m.x_l4)),
        "sigma_x*||X||_6^3/||X||_4^4" => sx * cube(m.x_l6) / x4,
        "64*||Y^2 X||_1*sigma_x/||X eps||_2^2" => 64.0 * m.y2x_l1 * sx / b2,
        "1120*||X||_3^3*sigma_y^2/(||X eps||_2^2*sigma_x)" => 1120.0 * x3 * sq(sy) / (b2 * sx),
        "64*sqrt(2)*||X eps||_3^3/||X eps||_2^3" => 64.0 * SQRT_2 * cube(m.xeps_l3) / cube(m.xeps_l2),
        "288*sigma_y*||X^2 Y||_1/||X eps||_2^2" => 288.0 * sy * m.x2y_l1 / b2,
        "432*|tau|*||X||_3^3*sigma_y/||X eps||_2^2" => 432.0 * tau * x3 * sy / b2,
        "1152*||X^3 Y||_1/(sigma_x^2*||X eps||_2)" => 1152.0 * m.x3y_l1 / (sq(sx) * m.xeps_l2),
        "1152*||X||_4^4*sigma_y/(sigma_x^3*||X eps||_2)" => 1152.0 * x4 * sy / (cube(sx) * m.xeps_l2),
        "576*|tau|*||X||_4^4/(sigma_x^2*||X eps||_2)" => 576.0 * tau * x4 / (sq(sx) * m.xeps_l2),
        "576*||X^2 Y||_1*sigma_y/(||X eps||_2^2*sigma_x)" => 576.0 * m.x2y_l1 * sy / (b2 * sx),
    ]))
}

pub fn h3_terms(m: &MomentProfile, k: f64) -> Result<Itemized> {
    require(&[("xeps_l2", m.xeps_l2), ("sigma_x", m.sigma_x)])?;
    let x4 = sq(sq(m.x_l4));
    Ok(Itemized::scaled(
        288.0 * k * m.sigma_eps / (sq(m.xeps_l2) * m.sigma_x),
        terms![
            "4*||X^3 Y||_1" => 4.0 * m.x3y_l1,
            "4*sigma_y*||X||_4^4/sigma_x" => 4.0 * m.sigma_y * x4 / m.sigma_x,
            "|tau|*||X||_4^4" => libm::fabs(m.tau) * x4,
        ],
    ))
}

pub fn h4_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    require(&[
        ("xeps_l2", m.xeps_l2),
        ("sigma_x", m.sigma_x),
        ("x_l3", m.x_l3),
        ("y2x_l1", m.y2x_l1),
    ])?;
    let (sx, sy, se, tau) = (m.sigma_x, m.sigma_y, m.sigma_eps, libm::fabs(m.tau));
    let b2 = sq(m.xeps_l2);
    let x4 = sq(sq(m.x_l4));
    let c1 = sq(c.c_1r);
    Ok(Itemized::scaled(
        8.0,
        terms![
            "4" => 4.0,
            "144*||X^3 Y||_1*sigma_eps/(sigma_x*||X eps||_2^2)" => 144.0 * m.x3y_l1 * se / (sx * b2),
            "144*sigma_y*sigma_eps*||X||_4^4/(||X eps||_2^2*sigma_x^2)" => 144.0 * sy * se * x4 / (b2 * sq(sx)),
            "72*|tau|*sigma_eps*||X||_4^4/(sigma_x*||X eps||_2^2)" => 72.0 * tau * se * x4 / (sx * b2),
            "c_1r^2*sigma_x^3/||X||_3^3" => c1 * cube(sx) / cube(m.x_l3),
            "2*c_1r^2*sigma_x*sigma_y^2/||Y^2 X||_1" => 2.0 * c1 * sx * sq(sy) / m.y2x_l1,
        ],
    ))
}

pub fn h5_terms(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<Itemized> {
    require(&[("x_l3", m.x_l3), ("y2x_l1", m.y2x_l1)])?;
    Ok(Itemized::scaled(
        32.0 * sq(c.c_2r),
        terms![
            "sigma_x*||X||_4^2/||X||_3^3" => m.sigma_x * sq(m.x_l4) / cube(m.x_l3),
            "2*sigma_x*||Y||_4^2/||Y^2 X||_1" => 2.0 * m.sigma_x * sq(m.y_l4) / m.y2x_l1,
        ],
    ))
}

/// `(H₁, …, H₅)` with `K` supplied by the caller.
pub fn prop1_constants_with_k(
    m: &MomentProfile,
    c: &BoundConstantsConfig,
    k: f64,
) -> Result<[f64; 5]> {
    Ok([
        h1_terms(m, k)?.total,
        h2_terms(m, c)?.total,
        h3_terms(m, k)?.total,
        h4_terms(m, c)?.total,
        h5_terms(m, c)?.total,
    ])
}

/// `(H₁, …, H₅)` with `K` from [`k_constant`].
pub fn prop1_constants(m: &MomentProfile, c: &BoundConstantsConfig) -> Result<[f64; 5]> {
    prop1_constants_with_k(m, c, k_constant(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT_C: BoundConstantsConfig = BoundConstantsConfig {
        c_be: 0.56,
        c_1r: 1.0,
        c_2r: 1.0,
    };

    #[test]
    fn lemma1_at_unit_plugins() {
        let m = MomentProfile::unit();
        let (k1, k2) = lemma1_constants(&m, &UNIT_C).unwrap();
        assert!((k1 - 1.0 / libm::sqrt(2.0 * PI)).abs() < 1e-15);
        assert!((k2 - 4.8).abs() < 1e-12);
    }

    #[test]
    fn lemma2_at_unit_plugins() {
        let (_, g2, g3) = lemma2_constants(&MomentProfile::unit(), &UNIT_C).unwrap();
        assert_eq!(g2, 583.0);
        assert_eq!(g3, 48.0);
        assert_eq!(g1_terms(&MomentProfile::unit()).unwrap().terms.len(), 20);
    }

    #[test]
    fn k_at_unit_plugins() {
        let k = k_constant(&MomentProfile::unit()).unwrap();
        assert!((k - 1.0 / 1152.0).abs() < 1e-18);
    }

    #[test]
    fn k_is_homogeneous_in_xeps_norm() {
        // with every other moment fixed the binding ratio is sigma_x^3/(288 ||X||_4^4 sigma_y)
        let mut m = MomentProfile::unit();
        m.tau = 0.3;
        let base = k_constant(&m).unwrap();
        m.xeps_l2 *= 2.5;
        m.xeps_l4 *= libm::sqrt(2.5);
        assert!((k_constant(&m).unwrap() - 2.5 * base).abs() < 1e-15);
    }

    #[test]
    fn prop1_at_unit_plugins() {
        let h = prop1_constants_with_k(&MomentProfile::unit(), &UNIT_C, 1.0).unwrap();
        assert!((h[0] - 4.0 / libm::sqrt(2.0 * PI)).abs() < 1e-14);
        assert_eq!(h[2], 2304.0);
        assert_eq!(h[4], 96.0);
        assert_eq!(h2_terms(&MomentProfile::unit(), &UNIT_C).unwrap().terms.len(), 26);
    }

    #[test]
    fn vanishing_denominator_is_named() {
        let mut m = MomentProfile::unit();
        m.xeps_l2 = 0.0;
        assert_eq!(k1(&m), Err(Error::DegenerateProfile("xeps_l2")));
        let mut m = MomentProfile::unit();
        m.y2x_l1 = 0.0;
        assert_eq!(
            lemma2_constants(&m, &UNIT_C),
            Err(Error::DegenerateProfile("y2x_l1"))
        );
        let mut m = MomentProfile::unit();
        m.var_x2eps2 = 0.0;
        assert_eq!(
            prop1_constants(&m, &UNIT_C),
            Err(Error::DegenerateProfile("var_x2eps2"))
        );
    }
}
