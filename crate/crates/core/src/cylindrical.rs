//! Polar states `Ω_{n,m}(r, θ, t)`, their cylindrical relabeling
//! `R_{n_r,ℓ}(r, t) Θ_{ℓ_z}(θ)`, and the `(n, m) ↔ (n_r, ℓ_z)` lattice.
//!
//! With `ρ = r/√φ`, `ℓ = |m - n|` and `k = min(n, m)`:
//!
//! ```text
//! Ω_{n,m} = e^{i(m-n)θ}/√(2π) · (-1)^k k!/√(n! m!) · (2/φ)^(1/2) · (ξ̄/ξ)^((n+m+1)/2)
//!           · ρ^ℓ L_k^(ℓ)(ρ²) · exp{-(ρ²/2)(1 - iφ̇/2)}
//! ```
//!
//! The `(-1)^k` sign convention is kept; textbook two-dimensional oscillator
//! states differ from these by that sign.

use serde::{Deserialize, Serialize};

use crate::cartesian::{NumberState, TrapModes, DEFAULT_N_MAX};
use crate::error::{Error, Result};
use crate::mode::{ModePoint, ModeSolution};
use crate::scalar::{Cx, Real};
use crate::special::{glaguerre, log_factorial};

/// Eigenvalue labels of the two oscillator subalgebras.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarQN {
    pub n: usize,
    pub m: usize,
}

impl PolarQN {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    /// Angular momentum `ℓ_z = m - n`.
    pub fn l_z(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    /// Radial degree `k = min(n, m)`.
    pub fn k(&self) -> usize {
        self.n.min(self.m)
    }

    /// `ℓ = |m - n|`.
    pub fn l(&self) -> usize {
        self.n.abs_diff(self.m)
    }
}

/// Cylindrical labels `(n_r, ℓ_z)`. Physical only when `n_r - |ℓ_z|` is
/// even and non-negative; use [`CylindricalQN::new`] or [`cyl_to_polar`] to
/// enforce that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylindricalQN {
    pub n_r: usize,
    pub l_z: i64,
}

impl CylindricalQN {
    pub fn new(n_r: usize, l_z: i64) -> Result<Self> {
        let qn = Self { n_r, l_z };
        qn.check()?;
        Ok(qn)
    }

    fn check(&self) -> Result<()> {
        let l = self.l_z.unsigned_abs() as usize;
        if l > self.n_r || !(self.n_r - l).is_multiple_of(2) {
            return Err(Error::SelectionRule { n_r: self.n_r, l_z: self.l_z });
        }
        Ok(())
    }

    pub fn l(&self) -> usize {
        self.l_z.unsigned_abs() as usize
    }

    /// `(n_r - ℓ)/2`; meaningful once the selection rule holds.
    pub fn k(&self) -> usize {
        self.n_r.saturating_sub(self.l()) / 2
    }
}

pub fn polar_to_cyl(qn: PolarQN) -> CylindricalQN {
    CylindricalQN { n_r: qn.n + qn.m, l_z: qn.l_z() }
}

pub fn cyl_to_polar(qn: CylindricalQN) -> Result<PolarQN> {
    qn.check()?;
    let n_r = qn.n_r as i64;
    Ok(PolarQN { n: ((n_r - qn.l_z) / 2) as usize, m: ((n_r + qn.l_z) / 2) as usize })
}

/// `Θ_{ℓ_z}(θ) = e^{iℓ_zθ}/√(2π)`.
pub fn theta_factor<T: Real>(l_z: i64, theta: T) -> Cx<T> {
    Cx::from_polar(T::TAU().sqrt().recip(), T::from_i64(l_z).expect("l_z representable") * theta)
}

/// Radial profile `ρ^ℓ L_k^(ℓ)(ρ²) exp{-(ρ²/2)(1 - iφ̇/2)}` with the
/// power folded into the exponent.
#[derive(Clone, Copy, Debug)]
struct RadialProfile<T> {
    k: usize,
    l: usize,
    inv_sqrt_phi: T,
    chirp: T,
}

impl<T: Real> RadialProfile<T> {
    fn new(point: &ModePoint<T>, k: usize, l: usize) -> Self {
        Self { k, l, inv_sqrt_phi: point.phi.sqrt().recip(), chirp: point.phi_dot / T::lit(4.0) }
    }

    fn eval(&self, r: T) -> Cx<T> {
        let rho = r * self.inv_sqrt_phi;
        let rho2 = rho * rho;
        let mag = if self.l == 0 {
            (-rho2 / T::lit(2.0)).exp()
        } else if rho == T::zero() {
            T::zero()
        } else {
            (T::of(self.l) * rho.ln() - rho2 / T::lit(2.0)).exp()
        };
        Cx::from_polar(mag, self.chirp * rho2) * glaguerre(self.k, self.l, rho2)
    }
}

/// `(-1)^k sqrt(k!/(k+ℓ)!)`, evaluated in log space.
fn signed_ratio<T: Real>(k: usize, l: usize) -> T {
    let mag = (T::lit(0.5) * (log_factorial::<T>(k) - log_factorial::<T>(k + l))).exp();
    if k.is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

/// `Ω_{n,m}(·, ·, t)` frozen at a time slice.
#[derive(Clone, Copy, Debug)]
pub struct PolarState<T> {
    qn: PolarQN,
    coef: Cx<T>,
    profile: RadialProfile<T>,
}

impl<T: Real> PolarState<T> {
    pub fn new(point: &ModePoint<T>, qn: PolarQN) -> Self {
        let (k, l) = (qn.k(), qn.l());
        let half = T::lit(0.5);
        let amp = T::TAU().sqrt().recip() * (T::lit(2.0) / point.phi).sqrt() * signed_ratio::<T>(k, l);
        let phase = point.conj_ratio_pow(half * T::of(qn.n + qn.m + 1));
        Self { qn, coef: phase * amp, profile: RadialProfile::new(point, k, l) }
    }

    pub fn qn(&self) -> PolarQN {
        self.qn
    }

    /// Value at polar coordinates; `r` is assumed non-negative.
    pub fn eval(&self, r: T, theta: T) -> Cx<T> {
        let angular = Cx::from_polar(T::one(), T::from_i64(self.qn.l_z()).expect("l_z") * theta);
        self.coef * angular * self.profile.eval(r)
    }

    /// Value at Cartesian `(x, y)` with `θ = atan2(y, x)`.
    pub fn eval_xy(&self, x: T, y: T) -> Cx<T> {
        self.eval(x.hypot(y), y.atan2(x))
    }
}

/// `R_{n_r,ℓ}(·, t)` frozen at a time slice.
#[derive(Clone, Copy, Debug)]
pub struct RadialState<T> {
    coef: Cx<T>,
    profile: RadialProfile<T>,
}

impl<T: Real> RadialState<T> {
    pub fn new(point: &ModePoint<T>, qn: CylindricalQN) -> Result<Self> {
        qn.check()?;
        let (k, l) = (qn.k(), qn.l());
        let amp = (T::lit(2.0) / point.phi).sqrt() * signed_ratio::<T>(k, l);
        // (n + m + 1)/2 == (n_r + 1)/2
        let phase = point.conj_ratio_pow(T::lit(0.5) * T::of(qn.n_r + 1));
        Ok(Self { coef: phase * amp, profile: RadialProfile::new(point, k, l) })
    }

    pub fn eval(&self, r: T) -> Cx<T> {
        self.coef * self.profile.eval(r)
    }
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r < T::zero() {
        return Err(Error::NegativeRadius(r.as_f64()));
    }
    Ok(())
}

/// `Ω_{n,m}(r, θ, t)` on the radial mode.
pub fn omega_state<T: Real>(mode: &ModeSolution<T>, qn: PolarQN, r: T, theta: T, t: T) -> Result<Cx<T>> {
    check_radius(r)?;
    Ok(PolarState::new(&mode.mode_at(t)?, qn).eval(r, theta))
}

/// `R_{n_r,ℓ}(r, t)` on the radial mode.
pub fn radial_state<T: Real>(mode: &ModeSolution<T>, qn: CylindricalQN, r: T, t: T) -> Result<Cx<T>> {
    check_radius(r)?;
    Ok(RadialState::new(&mode.mode_at(t)?, qn)?.eval(r))
}

/// Full `Φ_{n_r,ℓ_z,n_z} = R Θ Z` frozen at one time.
#[derive(Clone, Copy, Debug)]
pub struct CylindricalState<T> {
    pub radial: RadialState<T>,
    pub l_z: i64,
    pub z: NumberState<T>,
}

impl<T: Real> CylindricalState<T> {
    pub fn at(modes: &TrapModes<T>, qn: CylindricalQN, n_z: usize, t: T) -> Result<Self> {
        Ok(Self {
            radial: RadialState::new(&modes.radial.mode_at(t)?, qn)?,
            l_z: qn.l_z,
            z: NumberState::new(&modes.axial.mode_at(t)?, n_z, DEFAULT_N_MAX)?,
        })
    }

    pub fn eval(&self, r: T, theta: T, z: T) -> Cx<T> {
        self.radial.eval(r) * theta_factor(self.l_z, theta) * self.z.eval(z)
    }
}

/// `Φ(r, θ, z, t)` for `point = [r, θ, z, t]`.
pub fn phi_cylindrical<T: Real>(modes: &TrapModes<T>, qn: CylindricalQN, n_z: usize, point: [T; 4]) -> Result<Cx<T>> {
    let [r, theta, z, t] = point;
    check_radius(r)?;
    Ok(CylindricalState::at(modes, qn, n_z, t)?.eval(r, theta, z))
}

/// States sharing `n + m = N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub count: usize,
    pub polar: Vec<PolarQN>,
    pub cylindrical: Vec<CylindricalQN>,
}

/// Degeneracy of `K = n + m + 1`, ordered by increasing `ℓ_z`.
pub fn level_degeneracy(level: usize) -> Level {
    let polar: Vec<PolarQN> = (0..=level).map(|m| PolarQN::new(level - m, m)).collect();
    let cylindrical = polar.iter().map(|&q| polar_to_cyl(q)).collect();
    Level { count: polar.len(), polar, cylindrical }
}

/// Every allowed lattice point with `n + m ≤ max_level`.
pub fn lattice(max_level: usize) -> Vec<(PolarQN, CylindricalQN)> {
    (0..=max_level)
        .flat_map(|n_sum| level_degeneracy(n_sum).polar)
        .map(|q| (q, polar_to_cyl(q)))
        .collect()
}
