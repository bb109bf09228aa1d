//! Complex mode functions of `γ̈ + 2g(t)γ = 0` normalized to Wronskian `-i`,
//! the width function `φ = 2|ξ|²`, and the unwrapped phase of `ξ`.
//!
//! A [`ModeSolution`] stores `ξ`, `ξ̇` and `ξ̈ = -2gξ` on a uniform sample
//! grid. Between samples, [`ModeSolution::mode_at`] uses quintic Hermite
//! interpolation of `ξ` (value, slope and curvature at both knots) and
//! differentiates the interpolant for `ξ̇`.

pub mod floquet;
pub mod integrator;

use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

pub use floquet::{
    floquet_stability, radial_q_boundary, stability_scan, FloquetResult, StabilityChart, Sweep, SweepKind, SweepRange,
};
pub use integrator::{StepControl, StepStats};

/// Which coupling generated a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeAxis {
    /// `x`/`y` family, coupling `g`.
    Radial,
    /// `z`, coupling `g₃`.
    Axial,
}

/// Mode data at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModePoint<T> {
    pub t: T,
    pub xi: Cx<T>,
    pub xi_dot: Cx<T>,
    pub phi: T,
    pub phi_dot: T,
    /// Continuous branch of `arg ξ`.
    pub theta: T,
}

impl<T: Real> ModePoint<T> {
    fn from_pair(t: T, xi: Cx<T>, xi_dot: Cx<T>, theta: T) -> Self {
        Self {
            t,
            xi,
            xi_dot,
            phi: T::lit(2.0) * xi.norm_sqr(),
            phi_dot: T::lit(4.0) * (xi.conj() * xi_dot).re,
            theta,
        }
    }

    /// `W = ξ ξ̄̇ - ξ̇ ξ̄`.
    pub fn wronskian(&self) -> Cx<T> {
        wronskian(self.xi, self.xi_dot)
    }

    /// `(ξ̄/ξ)^s` on the continuous branch, `exp(-2i s θ)`.
    pub fn conj_ratio_pow(&self, s: T) -> Cx<T> {
        Cx::from_polar(T::one(), -T::lit(2.0) * s * self.theta)
    }
}

/// `W(ξ, ξ̄) = ξ ξ̄̇ - ξ̇ ξ̄`.
pub fn wronskian<T: Real>(xi: Cx<T>, xi_dot: Cx<T>) -> Cx<T> {
    xi * xi_dot.conj() - xi_dot * xi.conj()
}

/// Sampled mode function. Immutable once built.
#[derive(Clone, Debug)]
pub struct ModeSolution<T> {
    axis: ModeAxis,
    times: Vec<T>,
    xi: Vec<Cx<T>>,
    xi_dot: Vec<Cx<T>>,
    xi_ddot: Vec<Cx<T>>,
    phi: Vec<T>,
    phi_dot: Vec<T>,
    theta: Vec<T>,
    wronskian_drift: T,
}

/// Integration settings for [`integrate_mode`].
#[derive(Clone, Copy, Debug)]
pub struct ModeOptions<T> {
    pub step: StepControl<T>,
    /// Number of stored samples over the span (≥ 2).
    pub samples: usize,
    /// Maximum tolerated `|W + i|`.
    pub wronskian_tol: T,
}

impl<T: Real> Default for ModeOptions<T> {
    fn default() -> Self {
        Self { step: StepControl::default(), samples: 2001, wronskian_tol: T::lit(1e-9) }
    }
}

impl<T: Real> ModeOptions<T> {
    /// Chooses the sample count so that consecutive samples are at most `dt` apart.
    pub fn with_cadence(mut self, span: T, dt: T) -> Self {
        let n = (span / dt).ceil().to_usize().unwrap_or(1).max(1);
        self.samples = n + 1;
        self
    }
}

fn wrap_angle<T: Real>(a: T) -> T {
    let pi = T::PI();
    let tau = T::TAU();
    let mut w = a % tau;
    if w > pi {
        w -= tau;
    } else if w <= -pi {
        w += tau;
    }
    w
}

impl<T: Real> ModeSolution<T> {
    /// Builds a solution from raw samples, deriving `φ`, `φ̇` and the
    /// unwrapped phase. Fails if the phase advances by π/2 or more between
    /// consecutive samples.
    pub fn from_samples(
        axis: ModeAxis,
        times: Vec<T>,
        xi: Vec<Cx<T>>,
        xi_dot: Vec<Cx<T>>,
        xi_ddot: Vec<Cx<T>>,
    ) -> Result<Self> {
        let n = times.len();
        if n < 2 || xi.len() != n || xi_dot.len() != n || xi_ddot.len() != n {
            return Err(Error::Grid("mode needs at least two consistent samples".into()));
        }
        let mut theta = Vec::with_capacity(n);
        theta.push(xi[0].arg());
        for i in 1..n {
            let step = wrap_angle(xi[i].arg() - xi[i - 1].arg());
            if step.abs() >= T::FRAC_PI_2() {
                return Err(Error::PhaseAliasing { t: times[i].as_f64(), advance: step.as_f64() });
            }
            theta.push(theta[i - 1] + step);
        }
        Ok(Self::assemble(axis, times, xi, xi_dot, xi_ddot, theta))
    }

    fn assemble(
        axis: ModeAxis,
        times: Vec<T>,
        xi: Vec<Cx<T>>,
        xi_dot: Vec<Cx<T>>,
        xi_ddot: Vec<Cx<T>>,
        theta: Vec<T>,
    ) -> Self {
        let mut phi = Vec::with_capacity(times.len());
        let mut phi_dot = Vec::with_capacity(times.len());
        let mut drift = T::zero();
        for i in 0..times.len() {
            let p = ModePoint::from_pair(times[i], xi[i], xi_dot[i], theta[i]);
            phi.push(p.phi);
            phi_dot.push(p.phi_dot);
            drift = drift.max((p.wronskian() + Cx::i()).norm());
        }
        Self { axis, times, xi, xi_dot, xi_ddot, phi, phi_dot, theta, wronskian_drift: drift }
    }

    pub fn axis(&self) -> ModeAxis {
        self.axis
    }
    pub fn times(&self) -> &[T] {
        &self.times
    }
    pub fn xi(&self) -> &[Cx<T>] {
        &self.xi
    }
    pub fn xi_dot(&self) -> &[Cx<T>] {
        &self.xi_dot
    }
    pub fn phi(&self) -> &[T] {
        &self.phi
    }
    pub fn phi_dot(&self) -> &[T] {
        &self.phi_dot
    }
    pub fn theta(&self) -> &[T] {
        &self.theta
    }
    /// `max |W(t) + i|` over the samples.
    pub fn wronskian_drift(&self) -> T {
        self.wronskian_drift
    }
    pub fn span(&self) -> (T, T) {
        (self.times[0], self.times[self.times.len() - 1])
    }
    pub fn len(&self) -> usize {
        self.times.len()
    }
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Stored sample `i`.
    pub fn sample(&self, i: usize) -> ModePoint<T> {
        ModePoint {
            t: self.times[i],
            xi: self.xi[i],
            xi_dot: self.xi_dot[i],
            phi: self.phi[i],
            phi_dot: self.phi_dot[i],
            theta: self.theta[i],
        }
    }

    /// Mode data at an arbitrary time inside the span.
    pub fn mode_at(&self, t: T) -> Result<ModePoint<T>> {
        let (start, end) = self.span();
        if !(t >= start && t <= end) {
            return Err(Error::OutOfSpan { t: t.as_f64(), start: start.as_f64(), end: end.as_f64() });
        }
        // index of the left knot
        let i = match self.times.binary_search_by(|p| p.partial_cmp(&t).expect("finite times")) {
            Ok(i) => return Ok(self.sample(i)),
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        let s5 = s4 * s;
        let l = T::lit;

        let b = [
            T::one() - l(10.0) * s3 + l(15.0) * s4 - l(6.0) * s5,
            s - l(6.0) * s3 + l(8.0) * s4 - l(3.0) * s5,
            l(0.5) * s2 - l(1.5) * s3 + l(1.5) * s4 - l(0.5) * s5,
            l(10.0) * s3 - l(15.0) * s4 + l(6.0) * s5,
            -l(4.0) * s3 + l(7.0) * s4 - l(3.0) * s5,
            l(0.5) * s3 - s4 + l(0.5) * s5,
        ];
        let db = [
            -l(30.0) * s2 + l(60.0) * s3 - l(30.0) * s4,
            T::one() - l(18.0) * s2 + l(32.0) * s3 - l(15.0) * s4,
            s - l(4.5) * s2 + l(6.0) * s3 - l(2.5) * s4,
            l(30.0) * s2 - l(60.0) * s3 + l(30.0) * s4,
            -l(12.0) * s2 + l(28.0) * s3 - l(15.0) * s4,
            l(1.5) * s2 - l(4.0) * s3 + l(2.5) * s4,
        ];
        let data = [
            self.xi[i],
            self.xi_dot[i] * h,
            self.xi_ddot[i] * h * h,
            self.xi[i + 1],
            self.xi_dot[i + 1] * h,
            self.xi_ddot[i + 1] * h * h,
        ];
        let mut xi = Cx::new(T::zero(), T::zero());
        let mut dxi = Cx::new(T::zero(), T::zero());
        for k in 0..6 {
            xi += data[k] * b[k];
            dxi += data[k] * db[k];
        }
        let xi_dot = dxi / h;
        let theta = self.theta[i] + wrap_angle(xi.arg() - self.xi[i].arg());
        Ok(ModePoint::from_pair(t, xi, xi_dot, theta))
    }
}

/// Closed-form static-oscillator mode `ξ = (2ω)^(-1/2) e^{iωt}`.
pub fn sho_mode<T: Real>(axis: ModeAxis, omega: T, times: &[T]) -> Result<ModeSolution<T>> {
    if !(omega > T::zero()) {
        return Err(Error::Config("reference frequency must be positive".into()));
    }
    if times.len() < 2 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("sample times must increase strictly".into()));
    }
    let amp = (T::lit(2.0) * omega).sqrt().recip();
    let xi: Vec<Cx<T>> = times.iter().map(|&t| Cx::from_polar(amp, omega * t)).collect();
    let xi_dot: Vec<Cx<T>> = xi.iter().map(|&x| x * Cx::new(T::zero(), omega)).collect();
    let xi_ddot: Vec<Cx<T>> = xi.iter().map(|&x| x * (-omega * omega)).collect();
    let theta: Vec<T> = times.iter().map(|&t| omega * t).collect();
    Ok(ModeSolution::assemble(axis, times.to_vec(), xi, xi_dot, xi_ddot, theta))
}

/// Uniform sample times over `[start, end]`.
pub fn uniform_times<T: Real>(start: T, end: T, samples: usize) -> Vec<T> {
    let n = samples.max(2);
    let dt = (end - start) / T::of(n - 1);
    (0..n).map(|i| if i == n - 1 { end } else { start + dt * T::of(i) }).collect()
}

/// Default initial data: the static-oscillator mode for the local
/// frequency `sqrt(2g(t_start))`, or frequency 1 if `g(t_start) ≤ 0`.
pub fn default_ic<T: Real, G: Fn(T) -> T>(coupling: G, t_start: T) -> (Cx<T>, Cx<T>) {
    let g = coupling(t_start);
    let w = if g > T::zero() { (T::lit(2.0) * g).sqrt() } else { T::one() };
    let xi0 = Cx::new((T::lit(2.0) * w).sqrt().recip(), T::zero());
    (xi0, xi0 * Cx::new(T::zero(), w))
}

fn run<T, G>(
    axis: ModeAxis,
    coupling: G,
    ic: (Cx<T>, Cx<T>),
    span: (T, T),
    opts: &ModeOptions<T>,
    drift_guard: bool,
) -> Result<ModeSolution<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    let (t_start, t_end) = span;
    if !(t_end > t_start) {
        return Err(Error::Config("t_end must exceed t_start".into()));
    }
    let times = uniform_times(t_start, t_end, opts.samples);
    let n = times.len();
    let mut xi: Vec<Cx<T>> = Vec::with_capacity(n);
    let mut xi_dot = Vec::with_capacity(n);
    let mut xi_ddot = Vec::with_capacity(n);
    let mut theta: Vec<T> = Vec::with_capacity(n);
    let two = T::lit(2.0);

    let rhs = |t: T, y: &[T; 4]| {
        let k = -two * coupling(t);
        [y[2], y[3], k * y[0], k * y[1]]
    };
    integrator::integrate(rhs, [ic.0.re, ic.0.im, ic.1.re, ic.1.im], &times, &opts.step, |i, t, y| {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration { t: t.as_f64(), reason: "non-finite mode value".into() });
        }
        let x = Cx::new(y[0], y[1]);
        let xd = Cx::new(y[2], y[3]);
        if drift_guard {
            let drift = (wronskian(x, xd) + Cx::i()).norm();
            if !(drift <= opts.wronskian_tol) {
                return Err(Error::WronskianDrift {
                    t: t.as_f64(),
                    drift: drift.as_f64(),
                    tol: opts.wronskian_tol.as_f64(),
                });
            }
        }
        let th = match (theta.last(), xi.last()) {
            (Some(&prev), Some(px)) => {
                let step = wrap_angle(x.arg() - px.arg());
                if drift_guard && step.abs() >= T::FRAC_PI_2() {
                    return Err(Error::PhaseAliasing { t: t.as_f64(), advance: step.as_f64() });
                }
                prev + step
            }
            _ => x.arg(),
        };
        debug_assert_eq!(i, xi.len());
        xi.push(x);
        xi_dot.push(xd);
        xi_ddot.push(x * (-two * coupling(t)));
        theta.push(th);
        Ok(())
    })?;
    Ok(ModeSolution::assemble(axis, times, xi, xi_dot, xi_ddot, theta))
}

/// Integrates the mode equation from Wronskian-normalized initial data.
///
/// Fails if the initial Wronskian differs from `-i` by more than 1e-12, or
/// if `|W + i|` exceeds `opts.wronskian_tol` at any sample.
pub fn integrate_mode<T, G>(
    axis: ModeAxis,
    coupling: G,
    ic: (Cx<T>, Cx<T>),
    span: (T, T),
    opts: &ModeOptions<T>,
) -> Result<ModeSolution<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    let w = wronskian(ic.0, ic.1);
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if !((w + Cx::i()).norm() <= tol) {
        return Err(Error::WronskianPrecondition { re: w.re.as_f64(), im: w.im.as_f64() });
    }
    run(axis, coupling, ic, span, opts, true)
}

/// Same as [`integrate_mode`] without the Wronskian pre- and post-checks or
/// the phase-aliasing guard; for arbitrary (e.g. real fundamental) initial
/// data, whose `θ` is only meaningful while `ξ` stays away from zero.
pub fn integrate_mode_unchecked<T, G>(
    axis: ModeAxis,
    coupling: G,
    ic: (Cx<T>, Cx<T>),
    span: (T, T),
    opts: &ModeOptions<T>,
) -> Result<ModeSolution<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    run(axis, coupling, ic, span, opts, false)
}
