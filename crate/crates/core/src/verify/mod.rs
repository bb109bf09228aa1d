//! Finite-difference checks of the exact states and their operator algebra.
//!
//! Every check samples states on a [`GridSpec`], applies an operator with
//! 4th-order central stencils and returns a [`ResidualReport`]; nothing here
//! asserts. Time derivatives use symmetric probes at `t ± δ/2`, `t ± δ`
//! combined by one Richardson step.
//!
//! State samplers are closures `t -> Result<S>` returning the state frozen at
//! one time slice, `S: Fn([T; D]) -> Cx<T>`, so per-slice mode data is
//! resolved once.

mod controls;
mod ladder;
mod norm;
mod residual;
mod stencil;
mod suite;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use controls::{unphased_extremal, wrong_width_gaussian};
pub use ladder::{commutator_check, eigen_check, ladder_check_z, polar_ladder_check, LadderOps, TestFn};
pub use norm::{norm_conservation, norm_conservation_adaptive, overlap, Measure};
pub use residual::{schrodinger_residual_1d, schrodinger_residual_3d_cartesian, schrodinger_residual_polar};
pub use suite::{run_suite, Suite, SuiteSettings, CONTROL_SEPARATION};

/// Default temporal probe offset.
pub const DT_PROBE: f64 = 1e-5;

/// Fewest points per axis accepted by a grid.
pub const MIN_AXIS_POINTS: usize = 9;

/// One uniform grid axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis<T> {
    pub min: T,
    pub max: T,
    pub count: usize,
    /// Points cover `[min, max)` and stencils wrap around.
    pub periodic: bool,
    /// Finite-difference spacing; the grid spacing when `None`.
    pub stencil: Option<T>,
}

impl<T: Real> Axis<T> {
    pub fn new(min: T, max: T, count: usize) -> Self {
        Self { min, max, count, periodic: false, stencil: None }
    }

    pub fn periodic(min: T, max: T, count: usize) -> Self {
        Self { periodic: true, ..Self::new(min, max, count) }
    }

    /// Symmetric axis `[-half_width, half_width]`.
    pub fn centered(half_width: T, count: usize) -> Self {
        Self::new(-half_width, half_width, count)
    }

    /// Evaluates derivatives with spacing `h` around every grid point.
    pub fn with_stencil(mut self, h: T) -> Self {
        self.stencil = Some(h);
        self
    }

    pub fn spacing(&self) -> T {
        let cells = if self.periodic { self.count } else { self.count.saturating_sub(1).max(1) };
        (self.max - self.min) / T::of(cells)
    }

    pub fn stencil_spacing(&self) -> T {
        self.stencil.unwrap_or_else(|| self.spacing())
    }

    pub fn points(&self) -> Vec<T> {
        let h = self.spacing();
        (0..self.count)
            .map(|i| if !self.periodic && i + 1 == self.count { self.max } else { self.min + h * T::of(i) })
            .collect()
    }

    fn validate(&self, index: usize) -> Result<()> {
        if self.count < MIN_AXIS_POINTS {
            return Err(Error::Grid(format!("axis {index} has {} points, need at least {MIN_AXIS_POINTS}", self.count)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || !(self.max > self.min) {
            return Err(Error::Grid(format!("axis {index} needs finite bounds with max > min")));
        }
        if let Some(h) = self.stencil {
            if !(h > T::zero() && h.is_finite()) {
                return Err(Error::Grid(format!("axis {index} stencil spacing must be positive")));
            }
        }
        Ok(())
    }

    /// Whether a stencil of half-width `2h` centred at `x` stays in range.
    fn stencil_fits(&self, x: T) -> bool {
        if self.periodic {
            return true;
        }
        let reach = T::lit(2.0) * self.stencil_spacing();
        let slack = self.spacing() * T::lit(1e-9);
        x - reach >= self.min - slack && x + reach <= self.max + slack
    }
}

/// Tensor grid of spatial axes plus the time slices to check.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub axes: Vec<Axis<T>>,
    pub times: Vec<T>,
    pub dt_probe: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(axes: Vec<Axis<T>>, times: Vec<T>) -> Self {
        Self { axes, times, dt_probe: T::lit(DT_PROBE) }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.axes.len() != dim {
            return Err(Error::Grid(format!("expected {dim} axes, got {}", self.axes.len())));
        }
        for (i, a) in self.axes.iter().enumerate() {
            a.validate(i)?;
        }
        if self.times.is_empty() || self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::Grid("at least one finite time slice is required".into()));
        }
        if !(self.dt_probe > T::zero() && self.dt_probe.is_finite()) {
            return Err(Error::Grid("dt_probe must be positive".into()));
        }
        Ok(())
    }

    /// Human-readable summary, e.g. `x[-6,6]/121 h=0.01; 3 times`.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                s.push_str(" x ");
            }
            let _ = write!(s, "[{},{}]/{}", a.min.as_f64(), a.max.as_f64(), a.count);
            if a.periodic {
                s.push_str(" periodic");
            }
            if let Some(h) = a.stencil {
                let _ = write!(s, " h={}", h.as_f64());
            }
        }
        let _ = write!(s, "; {} times", self.times.len());
        s
    }

    /// Grid points whose stencils fit, with their cell volumes. `keep`
    /// filters further (e.g. the polar axis guard). Axis 0 varies fastest.
    fn centers<const D: usize>(&self, keep: impl Fn(&[T; D]) -> bool) -> Result<(Vec<[T; D]>, Vec<T>)> {
        self.validate(D)?;
        let per_axis: Vec<Vec<T>> = self
            .axes
            .iter()
            .map(|a| a.points().into_iter().filter(|&x| a.stencil_fits(x)).collect())
            .collect();
        let cell: T = self.axes.iter().fold(T::one(), |acc, a| acc * a.spacing());
        let total: usize = per_axis.iter().map(Vec::len).product();
        let mut points = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let p: [T; D] = std::array::from_fn(|d| {
                let n = per_axis[d].len();
                let v = per_axis[d][rem % n];
                rem /= n;
                v
            });
            if keep(&p) {
                points.push(p);
            }
        }
        if points.is_empty() {
            return Err(Error::Grid("no interior points".into()));
        }
        let weights = vec![cell; points.len()];
        Ok((points, weights))
    }

    fn stencils<const D: usize>(&self) -> [T; D] {
        std::array::from_fn(|d| self.axes[d].stencil_spacing())
    }
}

/// Metric a report is gated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    /// Pointwise maximum of `|residual|`.
    MaxAbs,
    /// Discrete L² norm weighted by the coordinate measure (worst time slice).
    GridNorm,
    /// Negative control: passes when `max_abs` reaches at least `tol`.
    Floor,
}

/// Outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub params: String,
    pub grid: String,
    pub max_abs: f64,
    pub rms: f64,
    pub grid_norm: f64,
    pub points: usize,
    pub tol: f64,
    pub gate: Gate,
    pub pass: bool,
}

impl ResidualReport {
    /// Combines reports of one check evaluated on separate slices (e.g. one
    /// grid per time). Passes only if every part passes.
    pub fn merge(parts: &[ResidualReport]) -> Option<ResidualReport> {
        let first = parts.first()?;
        let points: usize = parts.iter().map(|r| r.points).sum();
        let sum_sq: f64 = parts.iter().map(|r| r.rms * r.rms * r.points as f64).sum();
        let worst = |f: fn(&ResidualReport) -> f64| {
            parts.iter().map(f).fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
        };
        let grid = if parts.iter().all(|r| r.grid == first.grid) {
            first.grid.clone()
        } else {
            format!("{} slices, first {}", parts.len(), first.grid)
        };
        Some(ResidualReport {
            check: first.check.clone(),
            params: first.params.clone(),
            grid,
            max_abs: worst(|r| r.max_abs),
            rms: if points == 0 { 0.0 } else { (sum_sq / points as f64).sqrt() },
            grid_norm: worst(|r| r.grid_norm),
            points,
            tol: first.tol,
            gate: first.gate,
            pass: parts.iter().all(|r| r.pass),
        })
    }

    /// The gated metric.
    pub fn value(&self) -> f64 {
        match self.gate {
            Gate::MaxAbs | Gate::Floor => self.max_abs,
            Gate::GridNorm => self.grid_norm,
        }
    }
}

/// Running residual statistics over all slices of a check.
#[derive(Clone, Copy, Debug, Default)]
struct Accum {
    max_abs: f64,
    sum_sq: f64,
    grid_norm: f64,
    points: usize,
    non_finite: bool,
}

impl Accum {
    /// Folds one time slice of residuals with their quadrature weights.
    fn slice<T: Real>(&mut self, residuals: &[(T, T)]) {
        let mut weighted = 0.0;
        for &(abs, w) in residuals {
            let a = abs.as_f64();
            if !a.is_finite() {
                self.non_finite = true;
            }
            self.max_abs = self.max_abs.max(a);
            self.sum_sq += a * a;
            weighted += a * a * w.as_f64();
        }
        self.points += residuals.len();
        self.grid_norm = self.grid_norm.max(weighted.sqrt());
    }

    fn report(self, check: &str, params: String, grid: String, tol: f64, gate: Gate) -> ResidualReport {
        let (max_abs, grid_norm) = if self.non_finite { (f64::NAN, f64::NAN) } else { (self.max_abs, self.grid_norm) };
        let rms = if self.points == 0 { 0.0 } else { (self.sum_sq / self.points as f64).sqrt() };
        let pass = match gate {
            Gate::MaxAbs => max_abs <= tol,
            Gate::GridNorm => grid_norm <= tol,
            Gate::Floor => max_abs >= tol,
        };
        ResidualReport {
            check: check.into(),
            params,
            grid,
            max_abs,
            rms,
            grid_norm,
            points: self.points,
            tol,
            gate,
            pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_geometry() {
        let a = Axis::new(-1.0_f64, 1.0, 11);
        assert!((a.spacing() - 0.2).abs() < 1e-15);
        let p = a.points();
        assert_eq!(p.len(), 11);
        assert_eq!((p[0], p[10]), (-1.0, 1.0));
        let w = Axis::periodic(0.0, 4.0, 16);
        assert_eq!(w.spacing(), 0.25);
        assert_eq!(*w.points().last().unwrap(), 3.75);
        assert_eq!(a.with_stencil(0.01).stencil_spacing(), 0.01);
    }

    #[test]
    fn centers_skip_stencil_edges() {
        let g = GridSpec::new(vec![Axis::new(0.0_f64, 1.0, 11)], vec![0.0]);
        let (c, w) = g.centers::<1>(|_| true).unwrap();
        assert_eq!(c.len(), 7);
        assert!((c[0][0] - 0.2).abs() < 1e-12 && (c[6][0] - 0.8).abs() < 1e-12);
        assert!((w[0] - 0.1).abs() < 1e-15);
        let fine = GridSpec::new(vec![Axis::new(0.0, 1.0, 11).with_stencil(1e-3)], vec![0.0]);
        assert_eq!(fine.centers::<1>(|_| true).unwrap().0.len(), 9);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(vec![Axis::new(0.0, 1.0, 8)], vec![0.0]).validate(1).is_err());
        assert!(GridSpec::new(vec![Axis::new(1.0, 0.0, 9)], vec![0.0]).validate(1).is_err());
        assert!(GridSpec::new(vec![Axis::new(0.0, 1.0, 9)], vec![]).validate(1).is_err());
        assert!(GridSpec::new(vec![Axis::new(0.0, 1.0, 9)], vec![0.0]).validate(2).is_err());
        assert!(GridSpec::new(vec![Axis::new(0.0, 1.0, 9).with_stencil(0.0)], vec![0.0]).validate(1).is_err());
        let mut g = GridSpec::new(vec![Axis::new(0.0, 1.0, 9)], vec![0.0]);
        g.dt_probe = -1.0;
        assert!(g.validate(1).is_err());
    }

    #[test]
    fn report_gating() {
        let mut acc = Accum::default();
        acc.slice(&[(1e-3, 0.5), (2e-3, 0.5)]);
        let r = acc.report("x", String::new(), String::new(), 1.5e-3, Gate::MaxAbs);
        assert!(!r.pass && r.max_abs == 2e-3 && r.points == 2);
        let r = acc.report("x", String::new(), String::new(), 1.6e-3, Gate::GridNorm);
        assert!(r.pass && (r.grid_norm - (2.5e-6f64).sqrt()).abs() < 1e-15);
        let mut bad = Accum::default();
        bad.slice(&[(f64::NAN, 1.0)]);
        assert!(!bad.report("x", String::new(), String::new(), 1.0, Gate::MaxAbs).pass);
    }
}
