mod common;

use common::*;
use proptest::prelude::*;
use robscreen_core::normal::ks_distance;
use robscreen_core::{fit_all, fit_marginal, DataMatrix};

fn check_against_oracle(x: &[f64], y: &[f64]) {
    let f = fit_marginal(x, y).unwrap();
    let o = naive_fit(x, y);
    let tau_scale = sd(y) / sd(x);
    let b_scale = y.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    assert!(rel(f.tau_hat, o.tau, tau_scale) < 1e-12, "tau {} vs {}", f.tau_hat, o.tau);
    assert!(rel(f.b_hat, o.b, b_scale) < 1e-12, "b {} vs {}", f.b_hat, o.b);
    assert!(rel(f.v_hat, o.v, tau_scale * tau_scale) < 1e-12, "v {} vs {}", f.v_hat, o.v);
}

#[test]
fn matches_naive_oracle_on_random_instances() {
    use rand::Rng;
    let mut rng = rng(1);
    for _ in 0..1000 {
        let n = rng.random_range(3..=200);
        let (x, y) = random_instance(&mut rng, n);
        check_against_oracle(&x, &y);
    }
}

#[test]
fn fit_all_matches_column_loop() {
    let mut rng = rng(2);
    let (n, p) = (200, 50);
    let x = normals(&mut rng, n * p);
    let y = normals(&mut rng, n);
    let data = DataMatrix::from_columns(n, x, y.clone()).unwrap();
    let fits = fit_all(&data);
    assert_eq!(fits.len(), p);
    for (j, f) in fits.iter().enumerate() {
        assert_eq!(f.feature_index, j);
        let single = fit_marginal(data.column(j), &y).unwrap();
        assert_eq!(f.tau_hat.to_bits(), single.tau_hat.to_bits());
        assert_eq!(f.v_hat.to_bits(), single.v_hat.to_bits());
        assert_eq!(f.score.to_bits(), single.score.to_bits());
        let o = naive_fit(data.column(j), &y);
        assert!(rel(f.tau_hat, o.tau, 1.0) < 1e-12);
        assert!(rel(f.v_hat, o.v, 1.0) < 1e-12);
    }
}

#[test]
fn long_columns_use_compensated_sums() {
    // shifted data where raw moments would cancel catastrophically
    let mut rng = rng(3);
    let n = 20_000;
    let z = normals(&mut rng, n);
    let e = normals(&mut rng, n);
    let x: Vec<f64> = z.iter().map(|v| 1e6 + v).collect();
    let y: Vec<f64> = z.iter().zip(&e).map(|(a, b)| 1e6 + 0.5 * a + b).collect();
    let shifted = fit_marginal(&x, &y).unwrap();
    let centred = fit_marginal(&z, &y.iter().map(|v| v - 1e6).collect::<Vec<_>>()).unwrap();
    assert!((shifted.score - centred.score).abs() < 1e-6 * centred.score.abs());
}

#[test]
fn score_is_asymptotically_standard_normal() {
    let mut rng = rng(4);
    let n = 2000;
    let scores: Vec<f64> = (0..2000)
        .map(|_| {
            let x = normals(&mut rng, n);
            let y = normals(&mut rng, n);
            fit_marginal(&x, &y).unwrap().score
        })
        .collect();
    let d = ks_distance(&scores);
    assert!(d < 0.05, "KS distance {d}");
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (5usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec(-100.0..100.0f64, n),
            prop::collection::vec(-100.0..100.0f64, n),
        )
    })
}

fn non_degenerate(x: &[f64], y: &[f64]) -> bool {
    sd(x) > 1e-3 && fit_marginal(x, y).map(|f| !f.degenerate).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn score_is_affine_invariant(
        (x, y) in instance(),
        a in prop_oneof![-10.0..-0.1f64, 0.1..10.0f64],
        b in -50.0..50.0f64,
        c in prop_oneof![-10.0..-0.1f64, 0.1..10.0f64],
        d in -50.0..50.0f64,
    ) {
        prop_assume!(non_degenerate(&x, &y));
        let base = fit_marginal(&x, &y).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let ys: Vec<f64> = y.iter().map(|v| c * v + d).collect();
        let fx = fit_marginal(&xs, &y).unwrap();
        let fy = fit_marginal(&x, &ys).unwrap();
        let tol = 1e-10 * base.score.abs().max(1.0);
        prop_assert!((fx.score - a.signum() * base.score).abs() <= tol);
        prop_assert!((fy.score - c.signum() * base.score).abs() <= tol);
        prop_assert!((fx.tau_hat - base.tau_hat / a).abs() <= 1e-10 * (base.tau_hat / a).abs().max(1e-6));
        prop_assert!((fy.v_hat - c * c * base.v_hat).abs() <= 1e-10 * c * c * base.v_hat);
    }

    #[test]
    fn residuals_are_orthogonal((x, y) in instance()) {
        prop_assume!(sd(&x) > 1e-3);
        let f = fit_marginal(&x, &y).unwrap();
        let n = x.len() as f64;
        let xm = x.iter().sum::<f64>() / n;
        let scale = x.iter().chain(&y).fold(1.0_f64, |a, v| a.max(v.abs()));
        let res: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| yi - f.b_hat - f.tau_hat * xi).collect();
        let s0: f64 = res.iter().sum();
        let s1: f64 = x.iter().zip(&res).map(|(xi, r)| (xi - xm) * r).sum();
        let bound = 1e-9 * n * scale * scale;
        prop_assert!(s0.abs() <= bound, "{}", s0);
        prop_assert!(s1.abs() <= bound, "{}", s1);
    }

    #[test]
    fn row_permutation_invariance((x, y) in instance(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.shuffle(&mut rng(seed));
        let xp: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
        let yp: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
        let a = fit_marginal(&x, &y).unwrap();
        let b = fit_marginal(&xp, &yp).unwrap();
        prop_assert_eq!(a.degenerate, b.degenerate);
        if !a.degenerate {
            let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * u.abs().max(v.abs()).max(1e-300) + 1e-12;
            prop_assert!(close(a.tau_hat, b.tau_hat));
            prop_assert!(close(a.b_hat, b.b_hat));
            prop_assert!(close(a.v_hat, b.v_hat) || (a.v_hat - b.v_hat).abs() <= 1e-12 * a.v_hat);
            prop_assert!((a.score - b.score).abs() <= 1e-10 * a.score.abs().max(1.0));
        }
    }

    #[test]
    fn v_hat_is_nonnegative_and_score_consistent((x, y) in instance()) {
        let f = fit_marginal(&x, &y).unwrap();
        prop_assert!(f.v_hat >= 0.0);
        prop_assert_eq!(f.degenerate, f.var_x_n == 0.0 || f.v_hat == 0.0);
        if !f.degenerate {
            let n = x.len() as f64;
            prop_assert_eq!(f.score, n.sqrt() * f.tau_hat / f.v_hat.sqrt());
        }
    }
}
