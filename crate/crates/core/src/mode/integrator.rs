//! Dormand–Prince 5(4) with adaptive step control.
//!
//! Steps never cross a requested sample time, so every sample is a step
//! endpoint carrying full integration accuracy (no dense-output polynomial
//! in between).

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug)]
pub struct StepControl<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for StepControl<T> {
    fn default() -> Self {
        Self { rtol: T::lit(1e-12), atol: T::lit(1e-13), max_steps: 5_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights minus embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn err_norm<T: Real, const N: usize>(err: &[T; N], y0: &[T; N], y1: &[T; N], ctl: &StepControl<T>) -> T {
    let mut acc = T::zero();
    for i in 0..N {
        let sc = ctl.atol + ctl.rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / T::of(N)).sqrt()
}

fn rms<T: Real, const N: usize>(v: &[T; N]) -> T {
    (v.iter().fold(T::zero(), |a, &x| a + x * x) / T::of(N)).sqrt()
}

fn initial_step<T: Real, const N: usize, F>(f: &F, t0: T, y0: &[T; N], f0: &[T; N], ctl: &StepControl<T>) -> T
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    let scale: [T; N] = std::array::from_fn(|i| ctl.atol + ctl.rtol * y0[i].abs());
    let d0 = rms::<T, N>(&std::array::from_fn(|i| y0[i] / scale[i]));
    let d1 = rms::<T, N>(&std::array::from_fn(|i| f0[i] / scale[i]));
    let tiny = T::lit(1e-5);
    let h0 = if d0 < tiny || d1 < tiny { T::lit(1e-6) } else { T::lit(0.01) * d0 / d1 };
    let y1: [T; N] = std::array::from_fn(|i| y0[i] + h0 * f0[i]);
    let f1 = f(t0 + h0, &y1);
    let d2 = rms::<T, N>(&std::array::from_fn(|i| (f1[i] - f0[i]) / scale[i])) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / dm).powf(T::lit(0.2))
    };
    (T::lit(100.0) * h0).min(h1)
}

/// Integrates `y' = f(t, y)` from `samples[0]` with state `y0`, calling
/// `on_sample(index, t, y)` at every entry of the strictly increasing
/// `samples` (including the initial one). The callback may abort the run
/// by returning an error.
pub fn integrate<T, const N: usize, F, S>(
    f: F,
    y0: [T; N],
    samples: &[T],
    ctl: &StepControl<T>,
    mut on_sample: S,
) -> Result<StepStats>
where
    T: Real,
    F: Fn(T, &[T; N]) -> [T; N],
    S: FnMut(usize, T, &[T; N]) -> Result<()>,
{
    let mut stats = StepStats::default();
    let Some(&t_start) = samples.first() else {
        return Ok(stats);
    };
    if samples.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Integration { t: t_start.as_f64(), reason: "sample times must increase strictly".into() });
    }

    let mut t = t_start;
    let mut y = y0;
    on_sample(0, t, &y)?;
    if samples.len() == 1 {
        return Ok(stats);
    }

    let mut k: [[T; N]; 7] = [[T::zero(); N]; 7];
    k[0] = f(t, &y);
    stats.evals += 1;
    let mut h = initial_step(&f, t, &y, &k[0], ctl);
    stats.evals += 1;
    let mut last_rejected = false;

    for (idx, &target) in samples.iter().enumerate().skip(1) {
        loop {
            let remaining = target - t;
            if remaining <= T::zero() {
                break;
            }
            if stats.accepted + stats.rejected >= ctl.max_steps {
                return Err(Error::Integration { t: t.as_f64(), reason: "maximum step count exceeded".into() });
            }
            // Land exactly on the sample; absorb a sliver rather than leave one.
            let (step, lands) = if h >= remaining * T::lit(0.999) { (remaining, true) } else { (h, false) };
            if step <= t.abs().max(T::one()) * T::epsilon() * T::lit(16.0) {
                return Err(Error::Integration { t: t.as_f64(), reason: "step size underflow".into() });
            }

            for s in 1..7 {
                let ys: [T; N] = std::array::from_fn(|i| {
                    let mut acc = y[i];
                    for j in 0..s {
                        acc += step * T::lit(A[s][j]) * k[j][i];
                    }
                    acc
                });
                k[s] = f(t + T::lit(C[s]) * step, &ys);
            }
            stats.evals += 6;
            // Row 6 of A holds the 5th-order weights, so the stage-7 input is y_new.
            let y_new: [T; N] = std::array::from_fn(|i| {
                let mut acc = y[i];
                for j in 0..6 {
                    acc += step * T::lit(A[6][j]) * k[j][i];
                }
                acc
            });
            let err: [T; N] = std::array::from_fn(|i| {
                let mut acc = T::zero();
                for j in 0..7 {
                    acc += T::lit(E[j]) * k[j][i];
                }
                step * acc
            });
            let en = err_norm(&err, &y, &y_new, ctl);
            if !en.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if y.iter().any(|v| v.abs() > T::max_value().sqrt()) {
                    return Err(Error::Integration { t: t.as_f64(), reason: "solution overflow".into() });
                }
                h = step * T::lit(0.2);
                stats.rejected += 1;
                last_rejected = true;
                continue;
            }

            let fac = if en == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * en.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            };
            if en <= T::one() {
                stats.accepted += 1;
                t = if lands { target } else { t + step };
                y = y_new;
                k[0] = k[6];
                let grow = if last_rejected { fac.min(T::one()) } else { fac };
                // A clamped landing step should not shrink the natural step size.
                h = if lands { h.max(step * grow) } else { step * grow };
                last_rejected = false;
            } else {
                stats.rejected += 1;
                h = step * fac.min(T::one());
                last_rejected = true;
            }
        }
        on_sample(idx, t, &y)?;
    }
    Ok(stats)
}
