use paultrap::special::{glaguerre, hermite, hermite_normalized, log_factorial};
use proptest::prelude::*;

/// Adaptive Simpson quadrature on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn go(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = rule(fa, flm, fm, a, m);
        let right = rule(fm, frm, fb, m, b);
        if depth == 0 || (depth < 34 && (left + right - whole).abs() <= 15.0 * tol) {
            return left + right + (left + right - whole) / 15.0;
        }
        go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    go(f, a, b, fa, fm, fb, rule(fa, fm, fb, a, b), tol, 40)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Explicit sum `Σ (-1)^i C(k+α, k-i) x^i / i!`, with the sum of the
/// absolute terms as a cancellation scale.
fn laguerre_sum(k: usize, alpha: usize, x: f64) -> (f64, f64) {
    let mut fact = 1.0;
    let (mut sum, mut scale) = (0.0, 0.0);
    for i in 0..=k {
        if i > 0 {
            fact *= i as f64;
        }
        let term = binomial(k + alpha, k - i) * x.powi(i as i32) / fact;
        sum += if i % 2 == 0 { term } else { -term };
        scale += term;
    }
    (sum, scale)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[test]
fn laguerre_orthogonality() {
    for alpha in 0..=3 {
        for j in 0..=5 {
            for k in 0..=5 {
                let f = |x: f64| x.powi(alpha as i32) * (-x).exp() * glaguerre(j, alpha, x) * glaguerre(k, alpha, x);
                let got = simpson(&f, 0.0, 80.0, 1e-12);
                let want = if j == k { factorial(k + alpha) / factorial(k) } else { 0.0 };
                assert!((got - want).abs() < 1e-8 * want.max(1.0), "α={alpha} j={j} k={k}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn hermite_functions_orthonormal() {
    let norm = std::f64::consts::PI.powf(-0.25);
    for j in 0..=8 {
        for k in 0..=8 {
            let f = |x: f64| norm * norm * hermite_normalized(j, x) * hermite_normalized(k, x) * (-x * x).exp();
            let got = simpson(&f, -14.0, 14.0, 1e-13);
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((got - want).abs() < 1e-9, "j={j} k={k}: {got}");
        }
    }
}

#[test]
fn large_order_stays_finite() {
    for n in [60, 120, 170] {
        let v = hermite_normalized(n, 3.0_f64);
        assert!(v.is_finite());
    }
    assert!(glaguerre(60, 5, 40.0_f64).is_finite());
    assert!((log_factorial::<f64>(170) - factorial(170).ln()).abs() < 1e-9);
}

#[test]
fn single_precision_tracks_double() {
    for n in 0..=6 {
        let (a, b) = (hermite(n, 0.7_f32) as f64, hermite(n, 0.7_f64));
        assert!((a - b).abs() < 1e-4 * b.abs().max(1.0));
    }
}

proptest! {
    #[test]
    fn laguerre_matches_explicit_sum(k in 0usize..=12, alpha in 0usize..=6, x in 0.0f64..20.0) {
        let (want, scale) = laguerre_sum(k, alpha, x);
        let got = glaguerre(k, alpha, x);
        prop_assert!((got - want).abs() <= 1e-13 * scale.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn normalized_hermite_matches_scaled(n in 0usize..=20, x in -6.0f64..6.0) {
        let want = hermite(n, x) / (2f64.powi(n as i32) * factorial(n)).sqrt();
        let got = hermite_normalized(n, x);
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }
}
