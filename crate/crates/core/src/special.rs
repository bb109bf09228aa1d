//! Hermite and generalized Laguerre polynomials plus log-factorials.

use std::sync::OnceLock;

use crate::scalar::Real;

const LOG_FACT_TABLE: usize = 1024;

/// Degree and (Laguerre) order of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyOrder {
    pub degree: usize,
    pub alpha: usize,
}

impl PolyOrder {
    pub fn hermite(degree: usize) -> Self {
        Self { degree, alpha: 0 }
    }

    pub fn laguerre(degree: usize, alpha: usize) -> Self {
        Self { degree, alpha }
    }
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite<T: Real>(n: usize, x: T) -> T {
    let two = T::lit(2.0);
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = two * x;
    for k in 1..n {
        let next = two * x * cur - two * T::of(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_n(x) / sqrt(2ⁿ n!)`, evaluated by the scaled recurrence so that no
/// intermediate overflows for large `n`.
pub fn hermite_normalized<T: Real>(n: usize, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let two = T::lit(2.0);
    let mut cur = two.sqrt() * x;
    for k in 1..n {
        let kp1 = T::of(k + 1);
        let next = (two / kp1).sqrt() * x * cur - (T::of(k) / kp1).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^(α)(x)` for integer `α ≥ 0`.
pub fn glaguerre<T: Real>(k: usize, alpha: usize, x: T) -> T {
    let mut prev = T::one();
    if k == 0 {
        return prev;
    }
    let a = T::of(alpha);
    let mut cur = T::one() + a - x;
    for j in 1..k {
        let jf = T::of(j);
        let next = ((T::lit(2.0) * jf + T::one() + a - x) * cur - (jf + a) * prev) / (jf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

fn log_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACT_TABLE + 1);
        t.push(0.0);
        let mut acc = 0.0f64;
        for k in 1..=LOG_FACT_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`.
pub fn log_factorial<T: Real>(n: usize) -> T {
    let v = match log_fact_table().get(n) {
        Some(&v) => v,
        None => {
            // Stirling series; relative error far below f64 epsilon for n > 1024.
            let x = n as f64 + 1.0;
            (x - 0.5) * x.ln() - x + 0.5 * (std::f64::consts::TAU).ln() + 1.0 / (12.0 * x)
                - 1.0 / (360.0 * x.powi(3))
        }
    };
    T::lit(v)
}
