//! 4th-order central differences on closures.

use crate::scalar::{Cx, Real};

fn shift<T: Real, const D: usize>(p: [T; D], axis: usize, dx: T) -> [T; D] {
    let mut q = p;
    q[axis] += dx;
    q
}

/// `∂f/∂p[axis]` with spacing `h`.
pub(crate) fn d1<T: Real, const D: usize>(f: &impl Fn([T; D]) -> Cx<T>, p: [T; D], axis: usize, h: T) -> Cx<T> {
    let l = T::lit;
    let fm2 = f(shift(p, axis, -l(2.0) * h));
    let fm1 = f(shift(p, axis, -h));
    let fp1 = f(shift(p, axis, h));
    let fp2 = f(shift(p, axis, l(2.0) * h));
    (fm2 - fp2 + (fp1 - fm1) * l(8.0)) / (l(12.0) * h)
}

/// `∂²f/∂p[axis]²` with spacing `h`; `f0 = f(p)`.
pub(crate) fn d2<T: Real, const D: usize>(
    f: &impl Fn([T; D]) -> Cx<T>,
    p: [T; D],
    f0: Cx<T>,
    axis: usize,
    h: T,
) -> Cx<T> {
    let l = T::lit;
    let fm2 = f(shift(p, axis, -l(2.0) * h));
    let fm1 = f(shift(p, axis, -h));
    let fp1 = f(shift(p, axis, h));
    let fp2 = f(shift(p, axis, l(2.0) * h));
    ((fm1 + fp1) * l(16.0) - fm2 - fp2 - f0 * l(30.0)) / (l(12.0) * h * h)
}

/// Time derivative from `[f(t-δ), f(t-δ/2), f(t+δ/2), f(t+δ)]`: central
/// differences at `δ` and `δ/2` combined by Richardson extrapolation.
pub(crate) fn time_derivative<T: Real>(v: [Cx<T>; 4], delta: T) -> Cx<T> {
    let coarse = (v[3] - v[0]) / (T::lit(2.0) * delta);
    let fine = (v[2] - v[1]) / delta;
    (fine * T::lit(4.0) - coarse) / T::lit(3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(p: [f64; 2]) -> Cx<f64> {
        Cx::new(p[0].sin() * p[1], (p[0] * p[1]).cos())
    }

    #[test]
    fn first_derivative_fourth_order() {
        let p = [0.7, 1.3];
        let exact = Cx::new(0.7f64.cos() * 1.3, -1.3 * (0.91f64).sin());
        let e1 = (d1(&sample, p, 0, 0.1) - exact).norm();
        let e2 = (d1(&sample, p, 0, 0.05) - exact).norm();
        assert!(e1 < 5e-5);
        let ratio = e1 / e2;
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn second_derivative_fourth_order() {
        let p = [0.7, 1.3];
        let exact = Cx::new(0.0, -0.49 * 0.91f64.cos());
        let e1 = (d2(&sample, p, sample(p), 1, 0.1) - exact).norm();
        let e2 = (d2(&sample, p, sample(p), 1, 0.05) - exact).norm();
        let ratio = e1 / e2;
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn richardson_time_derivative() {
        let f = |t: f64| Cx::from_polar(1.0, 3.0 * t);
        let (t, d) = (0.4, 1e-3);
        let got = time_derivative([f(t - d), f(t - d / 2.0), f(t + d / 2.0), f(t + d)], d);
        assert!((got - f(t) * Cx::new(0.0, 3.0)).norm() < 1e-11);
    }
}
