//! Numerical values checked against references computed independently here.

use serconv::numeric::geometric_grid;
use serconv::pointwise::{point_value, PointValue};
use serconv::rational::{int, ratio, to_f64};
use serconv::*;

const EXAMPLE: &str = "(sqrt(n+1)*root(3,n-7)+2)/(n^(2/5)-17)";

/// The worked example written directly with libm calls.
fn example_direct(n: f64) -> f64 {
    ((n + 1.0).sqrt() * (n - 7.0).cbrt() + 2.0) / (n.powf(0.4) - 17.0)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

#[test]
fn example_values_match_direct_formula() {
    let e = parse(EXAMPLE).unwrap();
    for n in [2u64, 3, 7, 100, 1191, 1192, 5000, 1_000_000] {
        let got = eval_at(&e, n).unwrap();
        // the denominator nearly cancels around n = 1192
        let x = n as f64;
        let cond = 1.0 + 17.0 / (x.powf(0.4) - 17.0).abs();
        assert!(close(got, example_direct(x), 1e-13 * cond), "n = {n}: {got}");
    }
    // cube root of a negative number below n = 7
    let at2 = eval_at(&e, 2).unwrap();
    assert!((at2 - 0.061335).abs() < 1e-6, "{at2}");
}

#[test]
fn example_sign_change_matches_direct_formula() {
    let e = parse(EXAMPLE).unwrap();
    let first_positive = (2..5000u64).find(|&n| example_direct(n as f64) > 0.0 && n > 7).unwrap();
    let r = find_domain(&e, 1, 10_000_000, 64).unwrap();
    assert_eq!(r.n_defined, 1);
    assert_eq!(r.n_sign_stable, first_positive);
    assert_eq!(r.sign, Sign::Positive);
    // 17^(5/2) lies between 1191 and 1192
    assert!(17f64.powf(2.5) > 1191.0 && 17f64.powf(2.5) < 1192.0);
}

/// Ordinary least squares slope, written out independently.
fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn example_slope_matches_direct_regression() {
    let e = parse(EXAMPLE).unwrap();
    let (slope, _) = estimate_degree(&e, 10_000, 10_000_000, 16).unwrap();
    let grid = geometric_grid(10_000, 10_000_000, 16);
    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = grid.iter().map(|&n| example_direct(n as f64).abs().ln()).collect();
    let want = ols_slope(&xs, &ys);
    assert!((slope - want).abs() < 1e-9, "{slope} vs {want}");
    // subdominant terms decay only like n^(-2/5) here, so the fit sits
    // within the loose small-gap tolerance of the exact degree
    assert_eq!(min_degree_gap(&e), Some(ratio(2, 5)));
    assert!((slope - 13.0 / 30.0).abs() <= 0.2);
}

#[test]
fn pure_power_slopes() {
    let (s, res) = estimate_degree(&parse("1/n^2").unwrap(), 1000, 1_000_000, 8).unwrap();
    assert!((s + 2.0).abs() < 1e-12 && res < 1e-9);
    let (s, _) = estimate_degree(&parse("5").unwrap(), 10, 1000, 8).unwrap();
    assert!(s.abs() < 1e-12);
}

#[test]
fn example_coefficient_ratio() {
    let e = parse(EXAMPLE).unwrap();
    let got = estimate_leading_coefficient(&e, &ratio(13, 30), 100_000_000).unwrap();
    let n = 1e8f64;
    let want = example_direct(n) / n.powf(13.0 / 30.0);
    assert!(close(got, want, 1e-12));
    assert!(close(got, 1.0, 0.05));
}

/// `sum_{n=1}^{N} 1/n^2` via `pi^2/6` minus the Euler-Maclaurin tail.
fn basel_partial(n: f64) -> f64 {
    let tail = 1.0 / n - 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n.powi(3)) - 1.0 / (30.0 * n.powi(5));
    std::f64::consts::PI.powi(2) / 6.0 - tail
}

#[test]
fn compensated_sum_accuracy() {
    let got = partial_sum(&parse("1/n^2").unwrap(), 1, 1_000_000).unwrap();
    let want = basel_partial(1e6);
    assert!(close(got, want, 1e-9), "{got} vs {want}");
}

#[test]
fn short_sums_match_exact_rationals() {
    let exact: Rational = (1..=10).map(|k| ratio(1, k * k)).sum();
    let got = partial_sum(&parse("1/n^2").unwrap(), 1, 10).unwrap();
    assert!(close(got, to_f64(&exact), 1e-15));
    assert!((got - 1.5497677).abs() < 1e-7);
    assert_eq!(partial_sum(&parse("n").unwrap(), 1, 1).unwrap(), 1.0);
    let err = partial_sum(&parse("1/(n-10)").unwrap(), 1, 20).unwrap_err();
    assert!(matches!(err, NumericError::Domain { n: 10, .. }));
}

#[test]
fn harmonic_decades() {
    let r = convergence_probe(&parse("1/n").unwrap(), 1, &[1000, 10_000, 100_000]).unwrap();
    assert_eq!(r.verdict_hint, VerdictHint::ConsistentDivergent);
    // H_b - H_a from H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + ...
    let h = |n: f64| n.ln() + 1.0 / (2.0 * n) - 1.0 / (12.0 * n * n);
    assert!(close(r.deltas[0], h(1e4) - h(1e3), 1e-10));
    assert!(close(r.deltas[1], h(1e5) - h(1e4), 1e-10));
    assert!(close(r.deltas[0], 10f64.ln(), 0.02));
}

#[test]
fn probe_examples() {
    let r = convergence_probe(&parse("1/n^2").unwrap(), 1, &[1000, 10_000, 100_000]).unwrap();
    assert_eq!(r.verdict_hint, VerdictHint::ConsistentConvergent);
    let e = parse(EXAMPLE).unwrap();
    let start = find_domain(&e, 1, 10_000_000, 64).unwrap().n_sign_stable;
    let r = convergence_probe(&e, start, &[10_000, 100_000, 1_000_000]).unwrap();
    assert_eq!(r.verdict_hint, VerdictHint::ConsistentDivergent);
}

#[test]
fn pointwise_signs_agree_with_plain_floats() {
    for seed in 0..300 {
        let e = generate_member(&GenConfig::with_seed(seed)).unwrap();
        for n in (1..400).step_by(7) {
            let Ok(v) = eval_at(&e, n) else { continue };
            let got = point_value(&e, n);
            if got == PointValue::Undefined {
                // an exact pole shows up in floats as rounding noise divided out
                assert!(v.is_nan() || v.abs() >= 1e12, "seed {seed}, n = {n}: {v}");
                continue;
            }
            if !v.is_finite() || v.abs() < 1e-6 || v.abs() > 1e12 {
                continue;
            }
            let want = if v > 0.0 { PointValue::Positive } else { PointValue::Negative };
            assert_eq!(got, want, "seed {seed}, n = {n}: {v}");
        }
    }
}

#[test]
fn monomial_coefficients() {
    let got = estimate_leading_coefficient(&parse("3*n^2").unwrap(), &int(2), 1_000_000).unwrap();
    assert!(close(got, 3.0, 1e-12));
    let got = estimate_leading_coefficient(&parse("1/n").unwrap(), &int(-1), 1000).unwrap();
    assert!(close(got, 1.0, 1e-12));
}
