//! Second, straight-line transcription of every bound constant, written
//! without looking at the library code.

use rand::Rng;
use robscreen_core::bounds::BoundConstantsConfig;
use robscreen_core::MomentProfile;
pub const PI2: f64 = 2.0 * std::f64::consts::PI;

pub fn c3(v: f64) -> f64 {
    v * v * v
}

pub fn t_k1(m: &MomentProfile) -> f64 {
    m.sigma_eps * m.sigma_x / (PI2.sqrt() * m.xeps_l2)
}

pub fn t_k2(m: &MomentProfile, cbe: f64) -> f64 {
    2.0 + cbe
        * (c3(m.xeps_l3) / c3(m.xeps_l2)
            + 2.0 * c3(m.eps_l3) / c3(m.sigma_eps)
            + 2.0 * c3(m.x_l3) / c3(m.sigma_x))
}

pub fn t_g1(m: &MomentProfile) -> f64 {
    let (sx, sy, t) = (m.sigma_x, m.sigma_y, m.tau.abs());
    let e2 = m.xeps_l2;
    let x3 = c3(m.x_l3);
    let x4sq = m.x_l4 * m.x_l4;
    let x44 = x4sq * x4sq;
    let x63 = c3(m.x_l6);
    let y4sq = m.y_l4 * m.y_l4;
    let mut g = 0.0;
    g += 64.0 * m.y2x_l1 * sx / (e2 * e2);
    g += 1120.0 * x3 * sy * sy / (e2 * e2 * sx);
    g += 64.0 * 2f64.sqrt() * c3(m.xeps_l3) / c3(e2);
    g += 288.0 * sy * m.x2y_l1 / (e2 * e2);
    g += 432.0 * t * x3 * sy / (e2 * e2);
    g += 1152.0 * m.x3y_l1 / (sx * sx * e2);
    g += 1152.0 * x44 * sy / (c3(sx) * e2);
    g += 576.0 * t * x44 / (sx * sx * e2);
    g += 576.0 * m.x2y_l1 * sy / (e2 * e2 * sx);
    g += 2.0 * m.x2y_l2 / m.x2y_l1;
    g += (2.0 * m.y2x_l2 + sx * y4sq + 4.0 * sy * m.xy_l2) / (2.0 * m.y2x_l1);
    g += sy * x4sq / m.x2y_l1;
    g += 13.0 * sx * x4sq / (4.0 * x3);
    g += 9.0 * x63 / (2.0 * x3);
    g += 6.0 * y4sq / (sy * sy);
    g += 16.0 * x4sq / (sx * sx);
    g += 2f64.powf(3.5) * m.x3y_l3_2.powf(1.5) / m.x3y_l1.powf(1.5);
    g += sy * x63 / (2.0 * m.x3y_l1);
    g += 8.0 * x63 * x63 / (x44 * x4sq);
    g += sx * x63 / (2.0 * x44);
    g
}

pub fn t_g2(m: &MomentProfile, c1: f64) -> f64 {
    let (sx, sy, se, t) = (m.sigma_x, m.sigma_y, m.sigma_eps, m.tau.abs());
    let e22 = m.xeps_l2 * m.xeps_l2;
    let x44 = m.x_l4.powi(4);
    4.0 + 288.0 * m.x3y_l1 * se / (sx * e22)
        + 288.0 * sy * se * x44 / (e22 * sx * sx)
        + 144.0 * t * se * x44 / (sx * e22)
        + c1 * c1 * c3(sx) / c3(m.x_l3)
        + 2.0 * c1 * c1 * sx * sy * sy / m.y2x_l1
}

pub fn t_g3(m: &MomentProfile, c2: f64) -> f64 {
    16.0 * c2 * c2
        * (m.sigma_x * m.x_l4 * m.x_l4 / c3(m.x_l3)
            + 2.0 * m.sigma_x * m.y_l4 * m.y_l4 / m.y2x_l1)
}

pub fn t_k(m: &MomentProfile) -> f64 {
    let (sx, sy, t) = (m.sigma_x, m.sigma_y, m.tau.abs());
    let e2 = m.xeps_l2;
    let x3 = c3(m.x_l3);
    let x44 = m.x_l4.powi(4);
    let inf = f64::INFINITY;
    let r = [
        e2 / (36.0 * m.x2y_l1 * sy),
        e2 * sx / (72.0 * m.x2y_l1 * sy),
        e2 * sx / (72.0 * x3 * sy * sy),
        if t == 0.0 { inf } else { e2 / (36.0 * t * x3 * sy) },
        sx * sx / (288.0 * m.x3y_l1),
        c3(sx) / (288.0 * x44 * sy),
        if t == 0.0 { inf } else { sx * sx / (72.0 * t * x44) },
        e2 / (m.xeps_l4 * m.xeps_l4),
        e2 / (8.0 * m.y2x_l1 * sx),
    ];
    e2 / 4.0 * r.iter().cloned().fold(inf, f64::min)
}

pub fn t_h1(m: &MomentProfile, k: f64) -> f64 {
    3.0 * m.sigma_eps * m.sigma_x / (PI2.sqrt() * m.xeps_l2) + 1.0 / (PI2.sqrt() * k)
}

pub fn t_h2(m: &MomentProfile, cbe: f64) -> f64 {
    let (sx, sy, se, t) = (m.sigma_x, m.sigma_y, m.sigma_eps, m.tau.abs());
    let e2 = m.xeps_l2;
    let x3 = c3(m.x_l3);
    let x4sq = m.x_l4 * m.x_l4;
    let x44 = x4sq * x4sq;
    let x63 = c3(m.x_l6);
    let y4sq = m.y_l4 * m.y_l4;
    let mut h = 19.0;
    h += (2.0 * m.y2x_l2 + sx * y4sq + 4.0 * sy * m.xy_l2) / m.y2x_l1;
    h += 9.0 * cbe * c3(m.xeps_l3) / c3(e2);
    h += 6.0 * cbe * c3(m.eps_l3) / c3(se);
    h += 16.0 * cbe * x3 / c3(sx);
    h += 2.0 * cbe * m.xeps_l6.powi(6) / m.var_x2eps2.powf(1.5);
    h += 6.0 * cbe * c3(m.y_l3) / c3(sy);
    h += 4.0 * m.x2y_l2 / m.x2y_l1;
    h += 2.0 * sy * x4sq / m.x2y_l1;
    h += 6.5 * sx * x4sq / x3;
    h += 9.0 * x63 / x3;
    h += 12.0 * y4sq / (sy * sy);
    h += 32.0 * x4sq / (sx * sx);
    h += 2f64.powf(5.5) * m.x3y_l3_2.powf(1.5) / m.x3y_l1.powf(1.5);
    h += 0.75 * sy * x63 / m.x3y_l1;
    h += 16.0 * x63 * x63 / (x44 * x4sq);
    h += sx * x63 / x44;
    h += 64.0 * m.y2x_l1 * sx / (e2 * e2);
    h += 1120.0 * x3 * sy * sy / (e2 * e2 * sx);
    h += 64.0 * 2f64.sqrt() * c3(m.xeps_l3) / c3(e2);
    h += 288.0 * sy * m.x2y_l1 / (e2 * e2);
    h += 432.0 * t * x3 * sy / (e2 * e2);
    h += 1152.0 * m.x3y_l1 / (sx * sx * e2);
    h += 1152.0 * x44 * sy / (c3(sx) * e2);
    h += 576.0 * t * x44 / (sx * sx * e2);
    h += 576.0 * m.x2y_l1 * sy / (e2 * e2 * sx);
    h
}

pub fn t_h3(m: &MomentProfile, k: f64) -> f64 {
    let (sx, sy, se, t) = (m.sigma_x, m.sigma_y, m.sigma_eps, m.tau.abs());
    let x44 = m.x_l4.powi(4);
    288.0 * k * se / (m.xeps_l2 * m.xeps_l2 * sx)
        * (4.0 * m.x3y_l1 + 4.0 * sy * x44 / sx + t * x44)
}

pub fn t_h4(m: &MomentProfile, c1: f64) -> f64 {
    let (sx, sy, se, t) = (m.sigma_x, m.sigma_y, m.sigma_eps, m.tau.abs());
    let e22 = m.xeps_l2 * m.xeps_l2;
    let x44 = m.x_l4.powi(4);
    8.0 * (4.0
        + 144.0 * m.x3y_l1 * se / (sx * e22)
        + 144.0 * sy * se * x44 / (e22 * sx * sx)
        + 72.0 * t * se * x44 / (sx * e22)
        + c1 * c1 * c3(sx) / c3(m.x_l3)
        + 2.0 * c1 * c1 * sx * sy * sy / m.y2x_l1)
}

pub fn t_h5(m: &MomentProfile, c2: f64) -> f64 {
    2.0 * t_g3(m, c2)
}

pub fn t_rate(h: [f64; 5], n: f64) -> f64 {
    n.ln() / n.sqrt() * h[0] + h[1] / n.sqrt() + h[2] / (n * n.ln()).sqrt() + h[3] / n + h[4] / n.powf(1.5)
}

pub fn t_hs(m: &MomentProfile, c: &BoundConstantsConfig) -> [f64; 5] {
    let k = t_k(m);
    [t_h1(m, k), t_h2(m, c.c_be), t_h3(m, k), t_h4(m, c.c_1r), t_h5(m, c.c_2r)]
}

pub fn random_profile(rng: &mut impl Rng) -> MomentProfile {
    let mut u = || rng.random_range(0.2..5.0);
    let mut m = MomentProfile::unit();
    m.sigma_x = u();
    m.sigma_y = u();
    m.sigma_eps = u();
    m.x_l3 = u();
    m.x_l4 = u();
    m.x_l6 = u();
    m.y_l3 = u();
    m.y_l4 = u();
    m.eps_l3 = u();
    m.xeps_l2 = u();
    m.xeps_l3 = u();
    m.xeps_l4 = u();
    m.xeps_l6 = u();
    m.xy_l2 = u();
    m.x2y_l1 = u();
    m.x2y_l2 = u();
    m.y2x_l1 = u();
    m.y2x_l2 = u();
    m.x3y_l1 = u();
    m.x3y_l3_2 = u();
    m.var_x2eps2 = u();
    m.tau = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(-3.0..3.0) };
    m
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}
