//! One-period monodromy of `γ̈ + 2g(t)γ = 0` and stability charts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrator::{self, StepControl};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::trap::TrapConfig;

/// Monodromy summary for a periodic coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloquetResult<T> {
    /// Roots of `λ² - Tλ + 1 = 0`.
    pub multipliers: [Cx<T>; 2],
    /// Trace `T` of the monodromy matrix.
    pub trace: T,
    /// Determinant of the monodromy matrix; 1 up to integration error.
    pub determinant: T,
    /// `|T| < 2` and not marginal.
    pub stable: bool,
    /// `|T|` within the marginal band around 2.
    pub marginal: bool,
}

/// Width of the band `||T| - 2| ≤ MARGINAL_BAND` classified as marginal.
pub const MARGINAL_BAND: f64 = 1e-9;

/// Integrates the two real fundamental solutions over one period starting
/// at `t_start` and classifies the motion.
pub fn floquet_stability<T, G>(coupling: G, t_start: T, period: T, step: &StepControl<T>) -> Result<FloquetResult<T>>
where
    T: Real,
    G: Fn(T) -> T,
{
    if !(period > T::zero()) {
        return Err(Error::Config("period must be positive".into()));
    }
    let two = T::lit(2.0);
    // columns: (γ₁, γ̇₁) from (1, 0) and (γ₂, γ̇₂) from (0, 1)
    let rhs = |t: T, y: &[T; 4]| {
        let k = -two * coupling(t);
        [y[2], y[3], k * y[0], k * y[1]]
    };
    let mut end = [T::zero(); 4];
    integrator::integrate(rhs, [T::one(), T::zero(), T::zero(), T::one()], &[t_start, t_start + period], step, |i, _, y| {
        if i == 1 {
            end = *y;
        }
        Ok(())
    })?;
    let [g1, g2, d1, d2] = end;
    let trace = g1 + d2;
    let determinant = g1 * d2 - g2 * d1;
    let half = Cx::new(trace / two, T::zero());
    let root = (half * half - Cx::new(T::one(), T::zero())).sqrt();
    let marginal = (trace.abs() - two).abs() <= T::lit(MARGINAL_BAND);
    Ok(FloquetResult {
        multipliers: [half + root, half - root],
        trace,
        determinant,
        stable: trace.abs() < two && !marginal,
        marginal,
    })
}

/// Parameter pair swept by a stability chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    /// `p1 = a_r`, `p2 = q_r`; charge, radius and frequency from the template.
    Mathieu,
    /// `p1 = V_dc`, `p2 = V_ac`.
    Voltage,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRange<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> SweepRange<T> {
    pub fn values(&self) -> Vec<T> {
        let step = (self.max - self.min) / T::of(self.count - 1);
        (0..self.count).map(|i| if i + 1 == self.count { self.max } else { self.min + step * T::of(i) }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep<T> {
    pub kind: SweepKind,
    pub p1: SweepRange<T>,
    pub p2: SweepRange<T>,
}

impl<T: Real> Sweep<T> {
    fn validate(&self) -> Result<()> {
        for (name, r) in [("p1", &self.p1), ("p2", &self.p2)] {
            if r.count < 2 {
                return Err(Error::Config(format!("{name} count must be at least 2")));
            }
            if !(r.min.is_finite() && r.max.is_finite()) || !(r.max > r.min) {
                return Err(Error::Config(format!("{name} range must be finite with max > min")));
            }
        }
        if self.p2.min < T::zero() {
            return Err(Error::Config("p2 (ac drive) must be non-negative".into()));
        }
        Ok(())
    }

    fn config(&self, template: &TrapConfig<T>, p1: T, p2: T) -> Result<TrapConfig<T>> {
        match self.kind {
            SweepKind::Mathieu => {
                let mut c = TrapConfig::from_mathieu(template.e, template.r0, template.omega, p1, p2)?;
                c.t0 = template.t0;
                Ok(c)
            }
            SweepKind::Voltage => TrapConfig::new(template.e, template.r0, p1, p2, template.omega, template.t0),
        }
    }
}

/// Stability classification over a two-parameter sweep. Cells are stored
/// with `p1` as the slow index.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityChart<T> {
    pub kind: SweepKind,
    pub p1: Vec<T>,
    pub p2: Vec<T>,
    pub trace_radial: Vec<T>,
    pub trace_axial: Vec<T>,
    pub stable_radial: Vec<bool>,
    pub stable_axial: Vec<bool>,
    pub stable_trap: Vec<bool>,
}

impl<T: Real> StabilityChart<T> {
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.p2.len() + i2
    }

    pub fn cells(&self) -> usize {
        self.p1.len() * self.p2.len()
    }
}

/// Runs [`floquet_stability`] for the radial and axial couplings of every
/// cell (in parallel) over one drive period.
pub fn stability_scan<T: Real>(
    template: &TrapConfig<T>,
    sweep: &Sweep<T>,
    step: &StepControl<T>,
) -> Result<StabilityChart<T>> {
    sweep.validate()?;
    let p1 = sweep.p1.values();
    let p2 = sweep.p2.values();
    let cells: Vec<(T, T)> = p1.iter().flat_map(|&a| p2.iter().map(move |&b| (a, b))).collect();
    let results: Vec<(FloquetResult<T>, FloquetResult<T>)> = cells
        .par_iter()
        .map(|&(a, b)| {
            let cfg = sweep.config(template, a, b)?;
            let r = floquet_stability(cfg.radial_coupling(), cfg.t0, cfg.period(), step)?;
            let z = floquet_stability(cfg.axial_coupling(), cfg.t0, cfg.period(), step)?;
            Ok((r, z))
        })
        .collect::<Result<_>>()?;
    let stable_radial: Vec<bool> = results.iter().map(|r| r.0.stable).collect();
    let stable_axial: Vec<bool> = results.iter().map(|r| r.1.stable).collect();
    Ok(StabilityChart {
        kind: sweep.kind,
        trace_radial: results.iter().map(|r| r.0.trace).collect(),
        trace_axial: results.iter().map(|r| r.1.trace).collect(),
        stable_trap: stable_radial.iter().zip(&stable_axial).map(|(a, b)| *a && *b).collect(),
        stable_radial,
        stable_axial,
        p1,
        p2,
    })
}

/// Bisects for the radial stability edge along fixed `a_r`, given `q_lo`
/// stable and `q_hi` unstable. Returns the midpoint of the final bracket.
pub fn radial_q_boundary<T: Real>(a_r: T, q_lo: T, q_hi: T, tol: T, step: &StepControl<T>) -> Result<T> {
    let stable_at = |q: T| -> Result<bool> {
        let cfg = TrapConfig::from_mathieu(T::one(), T::one(), T::lit(2.0), a_r, q)?;
        Ok(floquet_stability(cfg.radial_coupling(), cfg.t0, cfg.period(), step)?.stable)
    };
    if !stable_at(q_lo)? || stable_at(q_hi)? {
        return Err(Error::Config("bracket must be stable at q_lo and unstable at q_hi".into()));
    }
    let (mut lo, mut hi) = (q_lo, q_hi);
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if stable_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn ctl() -> StepControl<f64> {
        StepControl::default()
    }

    #[test]
    fn constant_positive_coupling_is_stable() {
        let r = floquet_stability(|_| 0.1, 0.0, TAU, &ctl()).unwrap();
        let expected = 2.0 * (0.2f64.sqrt() * TAU).cos();
        assert!((r.trace - expected).abs() < 1e-10);
        assert!(r.stable && !r.marginal);
        assert!((r.determinant - 1.0).abs() < 1e-9);
        for m in r.multipliers {
            assert!((m.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_negative_coupling_is_unstable() {
        let r = floquet_stability(|_| -0.1, 0.0, TAU, &ctl()).unwrap();
        let expected = 2.0 * (0.2f64.sqrt() * TAU).cosh();
        assert!((r.trace - expected).abs() < 1e-8);
        assert!(!r.stable);
        let prod = r.multipliers[0] * r.multipliers[1];
        assert!((prod.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_coupling_is_marginal() {
        let r = floquet_stability(|_| 0.0, 0.0, 1.0, &ctl()).unwrap();
        assert!(r.marginal && !r.stable);
    }

    #[test]
    fn mathieu_points_either_side_of_edge() {
        for (q, stable) in [(0.85, true), (0.95, false)] {
            let cfg = TrapConfig::from_mathieu(1.0, 1.0, 2.0, 0.0, q).unwrap();
            let r = floquet_stability(cfg.radial_coupling(), 0.0, cfg.period(), &ctl()).unwrap();
            assert_eq!(r.stable, stable, "q={q}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(floquet_stability(|_| 0.1, 0.0, 0.0, &ctl()).is_err());
        let tpl = TrapConfig::new(1.0, 1.0, 0.0, 0.0, 2.0, 0.0).unwrap();
        let bad = Sweep {
            kind: SweepKind::Mathieu,
            p1: SweepRange { min: 0.0, max: 1.0, count: 1 },
            p2: SweepRange { min: 0.0, max: 1.0, count: 3 },
        };
        assert!(stability_scan(&tpl, &bad, &ctl()).is_err());
        let bad = Sweep { p1: SweepRange { min: 1.0, max: 0.0, count: 3 }, ..bad };
        assert!(stability_scan(&tpl, &bad, &ctl()).is_err());
    }

    #[test]
    fn static_sweeps_never_trap() {
        let tpl = TrapConfig::new(1.0, 1.0, 0.0, 0.0, 2.0, 0.0).unwrap();
        let sweep = Sweep {
            kind: SweepKind::Voltage,
            p1: SweepRange { min: 0.1, max: 2.0, count: 4 },
            p2: SweepRange { min: 0.0, max: 1e-3, count: 2 },
        };
        let chart = stability_scan(&tpl, &sweep, &ctl()).unwrap();
        for i1 in 0..chart.p1.len() {
            let i = chart.index(i1, 0);
            assert!(chart.stable_radial[i] && !chart.stable_axial[i] && !chart.stable_trap[i]);
        }
        let sweep = Sweep { p1: SweepRange { min: -1.9, max: -0.1, count: 4 }, ..sweep };
        let chart = stability_scan(&tpl, &sweep, &ctl()).unwrap();
        for i1 in 0..chart.p1.len() {
            let i = chart.index(i1, 0);
            assert!(!chart.stable_radial[i] && chart.stable_axial[i] && !chart.stable_trap[i]);
        }
    }
}
