#![allow(dead_code)]

pub mod transcription;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

/// Textbook two-pass regression: means, then slope, then residuals computed
/// literally as `Yᵢ − b̂ − τ̂Xᵢ`.
pub struct NaiveFit {
    pub tau: f64,
    pub b: f64,
    pub v: f64,
    pub residuals: Vec<f64>,
}

pub fn naive_fit(x: &[f64], y: &[f64]) -> NaiveFit {
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - xm) * (y[i] - ym);
        sxx += (x[i] - xm) * (x[i] - xm);
    }
    let tau = sxy / sxx;
    let b = ym - tau * xm;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| yi - b - tau * xi).collect();
    let mut num = 0.0;
    for i in 0..x.len() {
        num += (x[i] - xm).powi(2) * residuals[i].powi(2);
    }
    let den = (sxx / n).powi(2);
    NaiveFit {
        tau,
        b,
        v: (num / n) / den,
        residuals,
    }
}

/// Random instance with heteroscedastic noise at a random scale and offset.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let sx = 10f64.powf(rng.random_range(-3.0..3.0));
    let sy = 10f64.powf(rng.random_range(-3.0..3.0));
    let ox = rng.random_range(-5.0..5.0) * sx;
    let oy = rng.random_range(-5.0..5.0) * sy;
    let slope = rng.random_range(-2.0..2.0);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let z: f64 = StandardNormal.sample(rng);
        let e: f64 = StandardNormal.sample(rng);
        x.push(ox + sx * z);
        y.push(oy + sy * (slope * z + (1.0 + z.abs()) * e));
    }
    (x, y)
}

/// Relative error against a natural scale for each quantity.
pub fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(b.abs())
}

pub fn sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn corr(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for i in 0..a.len() {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma).powi(2);
        sbb += (b[i] - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}
