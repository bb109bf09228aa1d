//! Cartesian number states `X_{n_x}(x,t) Y_{n_y}(y,t) Z_{n_z}(z,t)`.
//!
//! Each factor is
//!
//! ```text
//! (2ⁿ n!)^(-1/2) (πφ)^(-1/4) (ξ̄/ξ)^((n + 1/2)/2) H_n(s) exp{-(s²/2)(1 - iφ̇/2)},   s = q/√φ
//! ```
//!
//! where the power of `ξ̄/ξ` is taken on the continuous branch
//! `exp(-i(n + 1/2)θ)` with `θ` the unwrapped phase of `ξ`. The `x` and `y`
//! factors use the radial mode, the `z` factor the axial one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::{default_ic, integrate_mode, sho_mode, ModeAxis, ModeOptions, ModePoint, ModeSolution};
use crate::scalar::{Cx, Real};
use crate::special::hermite_normalized;
use crate::trap::TrapConfig;

/// Largest number-state index accepted by default.
pub const DEFAULT_N_MAX: usize = 60;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartesianQN {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl CartesianQN {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Self {
        Self { nx, ny, nz }
    }
}

/// Width-scaled coordinates `(x/√φ, y/√φ, z/√φ₃, t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledCoords<T> {
    pub sx: T,
    pub sy: T,
    pub sz: T,
    pub st: T,
}

/// Radial (`x`, `y`) and axial (`z`) mode pair of one trap.
#[derive(Clone, Debug)]
pub struct TrapModes<T> {
    pub radial: ModeSolution<T>,
    pub axial: ModeSolution<T>,
}

impl<T: Real> TrapModes<T> {
    /// Integrates both modes of `cfg` over `span` from [`default_ic`].
    pub fn integrate(cfg: &TrapConfig<T>, span: (T, T), opts: &ModeOptions<T>) -> Result<Self> {
        let ic_r = default_ic(cfg.radial_coupling(), span.0);
        let ic_z = default_ic(cfg.axial_coupling(), span.0);
        Self::integrate_from(cfg, ic_r, ic_z, span, opts)
    }

    /// Integrates both modes from explicit `(ξ, ξ̇)` initial data.
    pub fn integrate_from(
        cfg: &TrapConfig<T>,
        ic_radial: (Cx<T>, Cx<T>),
        ic_axial: (Cx<T>, Cx<T>),
        span: (T, T),
        opts: &ModeOptions<T>,
    ) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            radial: integrate_mode(ModeAxis::Radial, cfg.radial_coupling(), ic_radial, span, opts)?,
            axial: integrate_mode(ModeAxis::Axial, cfg.axial_coupling(), ic_axial, span, opts)?,
        })
    }

    /// Closed-form static-oscillator pair sampled at `times`.
    pub fn sho(omega_radial: T, omega_axial: T, times: &[T]) -> Result<Self> {
        Ok(Self {
            radial: sho_mode(ModeAxis::Radial, omega_radial, times)?,
            axial: sho_mode(ModeAxis::Axial, omega_axial, times)?,
        })
    }
}

pub fn scale_coords<T: Real>(modes: &TrapModes<T>, point: [T; 4]) -> Result<ScaledCoords<T>> {
    let [x, y, z, t] = point;
    let r = modes.radial.mode_at(t)?;
    let a = modes.axial.mode_at(t)?;
    let sr = r.phi.sqrt();
    Ok(ScaledCoords { sx: x / sr, sy: y / sr, sz: z / a.phi.sqrt(), st: t })
}

/// One Cartesian factor `Z_n(·, t)` frozen at a time slice; mode data is
/// resolved once and reused for every coordinate.
#[derive(Clone, Copy, Debug)]
pub struct NumberState<T> {
    n: usize,
    inv_sqrt_phi: T,
    prefactor: Cx<T>,
    gauss: Cx<T>,
}

impl<T: Real> NumberState<T> {
    pub fn new(point: &ModePoint<T>, n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::OrderTooLarge { n, max: n_max });
        }
        let half = T::lit(0.5);
        let amp = (T::PI() * point.phi).powf(-T::lit(0.25));
        let phase = point.conj_ratio_pow(half * (T::of(n) + half));
        Ok(Self {
            n,
            inv_sqrt_phi: point.phi.sqrt().recip(),
            prefactor: phase * amp,
            gauss: Cx::new(-half, point.phi_dot / T::lit(4.0)),
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Value at coordinate `q` (`x`, `y` or `z`).
    pub fn eval(&self, q: T) -> Cx<T> {
        let s = q * self.inv_sqrt_phi;
        (self.gauss * (s * s)).exp() * self.prefactor * hermite_normalized(self.n, s)
    }
}

/// Extremal state `Z₀(z, t)`.
pub fn z_extremal<T: Real>(mode: &ModeSolution<T>, z: T, t: T) -> Result<Cx<T>> {
    z_state(mode, 0, z, t)
}

/// Number state `Z_n(z, t)` on the axial mode.
pub fn z_state<T: Real>(mode: &ModeSolution<T>, n: usize, z: T, t: T) -> Result<Cx<T>> {
    Ok(NumberState::new(&mode.mode_at(t)?, n, DEFAULT_N_MAX)?.eval(z))
}

/// Number state `X_n(x, t)` (or `Y_n`) on the radial mode; the same formula
/// as [`z_state`] with the radial mode substituted.
pub fn xy_state<T: Real>(mode: &ModeSolution<T>, n: usize, coord: T, t: T) -> Result<Cx<T>> {
    z_state(mode, n, coord, t)
}

/// Product state `Ψ_{n_x,n_y,n_z}` frozen at one time.
#[derive(Clone, Copy, Debug)]
pub struct CartesianState<T> {
    pub x: NumberState<T>,
    pub y: NumberState<T>,
    pub z: NumberState<T>,
}

impl<T: Real> CartesianState<T> {
    pub fn at(modes: &TrapModes<T>, qn: CartesianQN, t: T) -> Result<Self> {
        let r = modes.radial.mode_at(t)?;
        let a = modes.axial.mode_at(t)?;
        Ok(Self {
            x: NumberState::new(&r, qn.nx, DEFAULT_N_MAX)?,
            y: NumberState::new(&r, qn.ny, DEFAULT_N_MAX)?,
            z: NumberState::new(&a, qn.nz, DEFAULT_N_MAX)?,
        })
    }

    pub fn eval(&self, x: T, y: T, z: T) -> Cx<T> {
        self.x.eval(x) * self.y.eval(y) * self.z.eval(z)
    }
}

/// `Ψ_{n_x,n_y,n_z}(x, y, z, t)` for `point = [x, y, z, t]`.
pub fn psi_cartesian<T: Real>(modes: &TrapModes<T>, qn: CartesianQN, point: [T; 4]) -> Result<Cx<T>> {
    let [x, y, z, t] = point;
    Ok(CartesianState::at(modes, qn, t)?.eval(x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{sho_mode, uniform_times, ModeAxis};
    use std::f64::consts::PI;

    fn sho_modes() -> TrapModes<f64> {
        let times = uniform_times(0.0, 10.0, 2001);
        TrapModes {
            radial: sho_mode(ModeAxis::Radial, 1.0, &times).unwrap(),
            axial: sho_mode(ModeAxis::Axial, 1.0, &times).unwrap(),
        }
    }

    #[test]
    fn extremal_values() {
        let m = sho_modes();
        let z0 = z_extremal(&m.axial, 0.0, 0.0).unwrap();
        assert!((z0.re - 0.751_125_544_464_942_5).abs() < 1e-15 && z0.im == 0.0);
        for t in [0.3, 1.7, 4.25, 9.0] {
            let z0 = z_extremal(&m.axial, 0.0, t).unwrap();
            let expect = Cx::from_polar(PI.powf(-0.25), -t / 2.0);
            assert!((z0 - expect).norm() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn first_excited_value_and_parity() {
        let m = sho_modes();
        let z1 = z_state(&m.axial, 1, 1.0, 0.0).unwrap();
        assert!((z1.re - 0.644_288_365_113_475_2).abs() < 1e-15);
        for &(z, t) in &[(0.4, 0.2), (1.3, 3.3), (2.2, 7.1)] {
            let a = z_state(&m.axial, 1, z, t).unwrap();
            let b = z_state(&m.axial, 1, -z, t).unwrap();
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn n_zero_reduces_to_extremal_and_order_bound() {
        let m = sho_modes();
        for &(z, t) in &[(0.1, 0.5), (-2.0, 6.0)] {
            assert_eq!(z_state(&m.axial, 0, z, t).unwrap(), z_extremal(&m.axial, z, t).unwrap());
        }
        assert!(matches!(z_state(&m.axial, 61, 0.0, 0.0), Err(Error::OrderTooLarge { .. })));
        assert!(z_state(&m.axial, 60, 3.0, 1.0).unwrap().is_finite());
        assert!(matches!(z_state(&m.axial, 0, 0.0, 11.0), Err(Error::OutOfSpan { .. })));
    }

    #[test]
    fn product_and_scaling() {
        let m = sho_modes();
        let psi = psi_cartesian(&m, CartesianQN::new(0, 0, 0), [0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((psi.re - PI.powf(-0.75)).abs() < 1e-15);
        let p = [0.3, -0.7, 1.1, 2.5];
        let qn = CartesianQN::new(2, 1, 3);
        let direct = xy_state(&m.radial, 2, p[0], p[3]).unwrap()
            * xy_state(&m.radial, 1, p[1], p[3]).unwrap()
            * z_state(&m.axial, 3, p[2], p[3]).unwrap();
        assert_eq!(psi_cartesian(&m, qn, p).unwrap(), direct);

        let s = scale_coords(&m, [0.5, 0.0, -2.0, 1.0]).unwrap();
        assert!((s.sx - 0.5).abs() < 1e-14 && s.sy == 0.0 && (s.sz + 2.0).abs() < 1e-14);
        let times = uniform_times(0.0, 10.0, 2001);
        let wide = TrapModes {
            radial: sho_mode(ModeAxis::Radial, 0.5, &times).unwrap(),
            axial: sho_mode(ModeAxis::Axial, 1.0, &times).unwrap(),
        };
        // φ = 1/ω doubles, so sx shrinks by √2
        let s2 = scale_coords(&wide, [0.5, 0.0, 0.0, 1.0]).unwrap();
        assert!((s2.sx * 2f64.sqrt() - s.sx).abs() < 1e-14);
    }
}
