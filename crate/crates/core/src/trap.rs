//! Paul-trap drive, the couplings it induces and the standard Mathieu reduction.
//!
//! Units follow ħ = m = 1. The quadrupole potential is
//! `g(t)(x² + y²) + g₃(t) z²` with `g = e V(t) / 2r₀²`, `g₃ = -e V(t) / r₀²`
//! and drive `V(t) = V_dc - V_ac cos ω(t - t₀)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical drive parameters of the trap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Real + Deserialize<'de>", serialize = "T: Real + Serialize"))]
pub struct TrapConfig<T> {
    /// Particle charge.
    pub e: T,
    /// Characteristic trap radius.
    pub r0: T,
    /// Static (dc) voltage between ring and end caps.
    pub vdc: T,
    /// Amplitude of the ac voltage.
    pub vac: T,
    /// Drive angular frequency.
    pub omega: T,
    /// Phase reference of the drive.
    #[serde(default)]
    pub t0: T,
}

/// Dimensionless Mathieu parameters for the radial and axial equations
/// `x''(τ) + (a - 2q cos 2τ) x = 0`, `τ = ω(t - t₀)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MathieuParams<T> {
    pub a_r: T,
    pub q_r: T,
    pub a_z: T,
    pub q_z: T,
}

impl<T: Real> TrapConfig<T> {
    pub fn new(e: T, r0: T, vdc: T, vac: T, omega: T, t0: T) -> Result<Self> {
        let cfg = Self { e, r0, vdc, vac, omega, t0 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds the drive that realizes radial Mathieu parameters `(a_r, q_r)`
    /// for the given charge, radius and frequency.
    pub fn from_mathieu(e: T, r0: T, omega: T, a_r: T, q_r: T) -> Result<Self> {
        if !(omega > T::zero()) || e == T::zero() {
            return Err(Error::Config("omega must be positive and e non-zero".into()));
        }
        let s = r0 * r0 * omega * omega / e;
        Self::new(e, r0, a_r * s / T::lit(4.0), q_r * s / T::lit(2.0), omega, T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("e", self.e),
            ("r0", self.r0),
            ("vdc", self.vdc),
            ("vac", self.vac),
            ("omega", self.omega),
            ("t0", self.t0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if !(self.r0 > T::zero()) {
            return Err(Error::Config("r0 must be positive".into()));
        }
        if !(self.omega > T::zero()) {
            return Err(Error::Config("omega must be positive".into()));
        }
        if self.vac < T::zero() {
            return Err(Error::Config("vac must be non-negative".into()));
        }
        Ok(())
    }

    /// Applied potential `V(t) = V_dc - V_ac cos ω(t - t₀)`.
    pub fn drive_voltage(&self, t: T) -> T {
        self.vdc - self.vac * (self.omega * (t - self.t0)).cos()
    }

    /// Returns `(g, g₃)` at time `t`.
    pub fn coupling(&self, t: T) -> (T, T) {
        let v = self.drive_voltage(t);
        let k = self.e / (self.r0 * self.r0);
        (k * v / T::lit(2.0), -k * v)
    }

    pub fn radial_coupling(&self) -> impl Fn(T) -> T + Send + Sync + Copy {
        let cfg = *self;
        move |t| cfg.coupling(t).0
    }

    pub fn axial_coupling(&self) -> impl Fn(T) -> T + Send + Sync + Copy {
        let cfg = *self;
        move |t| cfg.coupling(t).1
    }

    /// Drive period `2π/ω`.
    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }

    pub fn mathieu_params(&self) -> Result<MathieuParams<T>> {
        if !(self.omega > T::zero()) {
            return Err(Error::Config("omega must be positive".into()));
        }
        let s = self.e / (self.r0 * self.r0 * self.omega * self.omega);
        let a_r = T::lit(4.0) * self.vdc * s;
        let q_r = T::lit(2.0) * self.vac * s;
        Ok(MathieuParams { a_r, q_r, a_z: -T::lit(2.0) * a_r, q_z: -T::lit(2.0) * q_r })
    }
}

impl TrapConfig<f64> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(e: f64, r0: f64, vdc: f64, vac: f64, omega: f64) -> TrapConfig<f64> {
        TrapConfig::new(e, r0, vdc, vac, omega, 0.0).unwrap()
    }

    #[test]
    fn drive_voltage_examples() {
        assert_eq!(cfg(1.0, 1.0, 1.0, 0.0, 2.0).drive_voltage(0.37), 1.0);
        assert_eq!(cfg(1.0, 1.0, 0.0, 1.0, 2.0 * PI).drive_voltage(0.0), -1.0);
        let v = cfg(1.0, 1.0, 2.0, 1.0, 2.0 * PI).drive_voltage(0.25);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(cfg(1.0, 1.0, 1.0, 0.0, 1.0).coupling(3.0), (0.5, -1.0));
        assert_eq!(cfg(2.0, 2.0, 2.0, 0.0, 1.0).coupling(-1.0), (0.5, -1.0));
    }

    #[test]
    fn mathieu_examples() {
        let m = cfg(1.0, 1.0, 0.0, 0.0, 1.0).mathieu_params().unwrap();
        assert_eq!((m.a_r, m.q_r, m.a_z, m.q_z), (0.0, 0.0, 0.0, 0.0));
        let m = cfg(1.0, 1.0, 1.0, 1.0, 2.0).mathieu_params().unwrap();
        assert_eq!((m.a_r, m.q_r, m.a_z, m.q_z), (1.0, 0.5, -2.0, -1.0));
        let m = cfg(1.0, 1.0, 0.0, 2.0, 2.0).mathieu_params().unwrap();
        assert_eq!((m.a_r, m.q_r, m.a_z, m.q_z), (0.0, 1.0, 0.0, -2.0));
    }

    #[test]
    fn from_mathieu_round_trips() {
        let c = TrapConfig::<f64>::from_mathieu(1.0, 1.0, 2.0, 0.02, 0.3).unwrap();
        let m = c.mathieu_params().unwrap();
        assert!((m.a_r - 0.02).abs() < 1e-15 && (m.q_r - 0.3).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(TrapConfig::new(1.0, 0.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, 1.0, -1.0, 1.0, 0.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, f64::NAN, 0.0, 1.0, 0.0).is_err());
        let raw = TrapConfig { e: 1.0, r0: 1.0, vdc: 0.0, vac: 0.0, omega: -1.0, t0: 0.0 };
        assert!(raw.mathieu_params().is_err());
    }

    #[test]
    fn json_loading() {
        let c = TrapConfig::from_json_str(r#"{"e":1,"r0":1,"vdc":0.5,"vac":2,"omega":3}"#).unwrap();
        assert_eq!(c.t0, 0.0);
        assert_eq!(c.vac, 2.0);
        assert!(TrapConfig::from_json_str(r#"{"e":1,"r0":1,"vdc":0.5,"vac":2}"#).is_err());
        assert!(TrapConfig::from_json_str(r#"{"e":1,"r0":1,"vdc":0,"vac":0,"omega":1,"x":2}"#).is_err());
    }

    #[test]
    fn single_precision_matches() {
        let c = TrapConfig::<f32>::new(1.0, 1.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(c.coupling(0.0), (0.5, -1.0));
    }
}
