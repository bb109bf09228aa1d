//! Named bundles of checks run against one trap.

use std::str::FromStr;

use super::controls::wrong_width_gaussian;
use super::ladder::{commutator_check, TestFn, eigen_check, ladder_check_z, polar_ladder_check};
use super::norm::{norm_conservation_adaptive, overlap, Measure};
use super::residual::{schrodinger_residual_1d, schrodinger_residual_3d_cartesian, schrodinger_residual_polar};
use super::{Accum, Axis, Gate, GridSpec, ResidualReport};
use crate::cartesian::{CartesianQN, CartesianState, NumberState, TrapModes, DEFAULT_N_MAX};
use crate::cylindrical::{PolarQN, PolarState};
use crate::error::{Error, Result};
use crate::mode::ModeSolution;
use crate::scalar::{Cx, Real};
use crate::special::hermite_normalized;
use crate::trap::TrapConfig;

/// Check bundles selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Every bundle below except `InjectedFault`.
    Full,
    Residual,
    Ladder,
    Eigen,
    Norm,
    /// `Ω₀,₀ = X₀Y₀` pointwise.
    Identity,
    /// `Residual` plus the wrong-width Gaussian gated as if it were a solution.
    InjectedFault,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["full", "residual", "ladder", "eigen", "norm", "identity", "injected-fault"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" => Suite::Full,
            "residual" => Suite::Residual,
            "ladder" => Suite::Ladder,
            "eigen" => Suite::Eigen,
            "norm" => Suite::Norm,
            "identity" => Suite::Identity,
            "injected-fault" => Suite::InjectedFault,
            _ => return Err(Error::Config(format!("unknown suite {s:?}; expected one of {:?}", Suite::NAMES))),
        })
    }
}

/// Resolution and tolerances of a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSettings<T> {
    /// Time slices; every slice ± the probe offset must lie in the mode spans.
    pub times: Vec<T>,
    /// Finite-difference spacing of the Schrödinger residuals.
    pub stencil: T,
    /// Finite-difference spacing of the ladder and eigen checks.
    pub ladder_stencil: T,
    pub residual_tol: T,
    pub ladder_tol: T,
    pub eigen_tol: T,
    pub norm_tol: T,
    pub identity_tol: T,
    /// Highest `Z_n` order checked.
    pub max_z_order: usize,
    /// Highest `n_x`, `n_y`, `n_z` of `Ψ` checked.
    pub max_cartesian: usize,
    /// Highest `n`, `m` of `Ω_{n,m}` checked.
    pub max_polar: usize,
}

impl<T: Real> SuiteSettings<T> {
    pub fn new(times: Vec<T>) -> Self {
        Self {
            times,
            stencil: T::lit(0.01),
            ladder_stencil: T::lit(0.0025),
            residual_tol: T::lit(1e-4),
            ladder_tol: T::lit(1e-6),
            eigen_tol: T::lit(1e-5),
            norm_tol: T::lit(1e-6),
            identity_tol: T::lit(1e-10),
            max_z_order: 5,
            max_cartesian: 2,
            max_polar: 3,
        }
    }
}

/// Separation demanded between a negative control and the residual tolerance.
pub const CONTROL_SEPARATION: f64 = 1e3;

/// Runs `f` on each time slice separately and merges the reports
/// position by position.
fn over_times<T: Real>(
    times: &[T],
    mut f: impl FnMut(T) -> Result<Vec<ResidualReport>>,
) -> Result<Vec<ResidualReport>> {
    let mut parts: Vec<Vec<ResidualReport>> = Vec::new();
    for &t in times {
        for (i, r) in f(t)?.into_iter().enumerate() {
            if parts.len() <= i {
                parts.push(Vec::new());
            }
            parts[i].push(r);
        }
    }
    Ok(parts.iter().filter_map(|p| ResidualReport::merge(p)).collect())
}

/// `√φ(t)`, the width scale of the states built on `mode`.
fn width<T: Real>(mode: &ModeSolution<T>, t: T) -> Result<T> {
    Ok(mode.mode_at(t)?.phi.sqrt())
}

fn fd_axis<T: Real>(half: T, count: usize, h: T) -> Axis<T> {
    Axis::centered(half, count).with_stencil(h)
}

/// Runs `suite` on the modes of `cfg`. Every check uses grids scaled to the
/// state width at each time slice.
pub fn run_suite<T: Real>(
    cfg: &TrapConfig<T>,
    modes: &TrapModes<T>,
    suite: Suite,
    settings: &SuiteSettings<T>,
) -> Result<Vec<ResidualReport>> {
    if settings.times.is_empty() {
        return Err(Error::Grid("suite needs at least one time slice".into()));
    }
    let mut out = Vec::new();
    let all = suite == Suite::Full;
    if all || suite == Suite::Residual || suite == Suite::InjectedFault {
        residuals(cfg, modes, settings, &mut out)?;
    }
    if suite == Suite::InjectedFault {
        let mut r = over_times(&settings.times, |t| {
            let fault = |t: T| Ok(wrong_width_gaussian(&modes.axial.mode_at(t)?));
            Ok(vec![schrodinger_residual_1d(fault, cfg.axial_coupling(), &z_grid(modes, settings, t)?, settings.residual_tol)?])
        })?;
        r[0].check = "injected_wrong_width".into();
        out.append(&mut r);
    }
    if all || suite == Suite::Ladder {
        ladders(modes, settings, &mut out)?;
    }
    if all || suite == Suite::Eigen {
        eigens(modes, settings, &mut out)?;
    }
    if all || suite == Suite::Norm {
        norms(modes, settings, &mut out)?;
    }
    if all || suite == Suite::Identity {
        out.push(identity(modes, settings)?);
    }
    Ok(out)
}

fn z_grid<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>, t: T) -> Result<GridSpec<T>> {
    let half = T::lit(8.0) * width(&modes.axial, t)?;
    Ok(GridSpec::new(vec![fd_axis(half, 81, s.stencil)], vec![t]))
}

fn residuals<T: Real>(
    cfg: &TrapConfig<T>,
    modes: &TrapModes<T>,
    s: &SuiteSettings<T>,
    out: &mut Vec<ResidualReport>,
) -> Result<()> {
    for n in 0..=s.max_z_order {
        let state = |t: T| {
            let st = NumberState::new(&modes.axial.mode_at(t)?, n, DEFAULT_N_MAX)?;
            Ok(move |[z]: [T; 1]| st.eval(z))
        };
        let mut r = over_times(&s.times, |t| {
            Ok(vec![schrodinger_residual_1d(state, cfg.axial_coupling(), &z_grid(modes, s, t)?, s.residual_tol)?])
        })?;
        r[0].params = format!("Z n={n}");
        out.append(&mut r);
    }

    let control = |t: T| Ok(wrong_width_gaussian(&modes.axial.mode_at(t)?));
    let mut r = over_times(&s.times, |t| {
        let mut r = schrodinger_residual_1d(control, cfg.axial_coupling(), &z_grid(modes, s, t)?, s.residual_tol)?;
        r.tol = s.residual_tol.as_f64() * CONTROL_SEPARATION;
        r.gate = Gate::Floor;
        r.pass = r.max_abs >= r.tol;
        Ok(vec![r])
    })?;
    r[0].check = "negative_control".into();
    r[0].params = "wrong width".into();
    out.append(&mut r);

    let c = s.max_cartesian;
    let triples = (0..=c).flat_map(|nz| (0..=c).flat_map(move |ny| (0..=c).map(move |nx| CartesianQN::new(nx, ny, nz))));
    for qn in triples {
        let state = |t: T| {
            let st = CartesianState::at(modes, qn, t)?;
            Ok(move |[x, y, z]: [T; 3]| st.eval(x, y, z))
        };
        let mut r = over_times(&s.times, |t| {
            let (wr, wz) = (T::lit(6.0) * width(&modes.radial, t)?, T::lit(6.0) * width(&modes.axial, t)?);
            let grid = GridSpec::new(
                vec![fd_axis(wr, 13, s.stencil), fd_axis(wr, 13, s.stencil), fd_axis(wz, 13, s.stencil)],
                vec![t],
            );
            Ok(vec![schrodinger_residual_3d_cartesian(state, |t| cfg.coupling(t), &grid, s.residual_tol)?])
        })?;
        r[0].params = format!("Psi {},{},{}", qn.nx, qn.ny, qn.nz);
        out.append(&mut r);
    }

    let h = s.stencil;
    for n in 0..=s.max_polar {
        for m in 0..=s.max_polar {
            let qn = PolarQN::new(n, m);
            let state = |t: T| {
                let st = PolarState::new(&modes.radial.mode_at(t)?, qn);
                Ok(move |[r, th]: [T; 2]| st.eval(r, th))
            };
            let mut r = over_times(&s.times, |t| {
                let grid = GridSpec::new(
                    vec![
                        Axis::new(T::lit(2.0) * h, T::lit(7.0) * width(&modes.radial, t)?, 41).with_stencil(h),
                        Axis::periodic(T::zero(), T::TAU(), 32).with_stencil(h),
                    ],
                    vec![t],
                );
                Ok(vec![schrodinger_residual_polar(state, cfg.radial_coupling(), &grid, s.residual_tol)?])
            })?;
            r[0].params = format!("Omega n={n},m={m}");
            out.append(&mut r);
        }
    }
    Ok(())
}

fn xy_grid<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>, t: T) -> Result<GridSpec<T>> {
    let half = T::lit(5.0) * width(&modes.radial, t)?;
    Ok(GridSpec::new(vec![fd_axis(half, 25, s.ladder_stencil), fd_axis(half, 25, s.ladder_stencil)], vec![t]))
}

fn ladders<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>, out: &mut Vec<ResidualReport>) -> Result<()> {
    for n in 0..=s.max_z_order {
        out.extend(over_times(&s.times, |t| {
            let half = T::lit(8.0) * width(&modes.axial, t)?;
            let grid = GridSpec::new(vec![fd_axis(half, 81, s.ladder_stencil)], vec![t]);
            ladder_check_z(&modes.axial, n, &grid, s.ladder_tol)
        })?);
    }
    let gauss = |[z]: [T; 1]| Cx::new((-z * z / T::lit(2.0)).exp(), T::zero());
    let hermite = |[z]: [T; 1]| Cx::new(hermite_normalized(3, z) * (-z * z / T::lit(2.0)).exp(), z);
    let tests: [TestFn<T>; 2] = [("gaussian", &gauss), ("hermite-gaussian", &hermite)];
    let narrow = GridSpec::new(vec![fd_axis(T::lit(6.0), 61, s.ladder_stencil)], s.times.clone());
    out.extend(commutator_check(&modes.axial, &tests, &narrow, s.ladder_tol)?);

    for n in 0..=s.max_polar {
        for m in 0..=s.max_polar {
            let qn = PolarQN::new(n, m);
            out.extend(over_times(&s.times, |t| polar_ladder_check(&modes.radial, qn, &xy_grid(modes, s, t)?, s.ladder_tol))?);
        }
    }
    Ok(())
}

fn eigens<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>, out: &mut Vec<ResidualReport>) -> Result<()> {
    for n in 0..=s.max_polar {
        for m in 0..=s.max_polar {
            let qn = PolarQN::new(n, m);
            out.extend(over_times(&s.times, |t| eigen_check(&modes.radial, qn, &xy_grid(modes, s, t)?, s.eigen_tol))?);
        }
    }
    Ok(())
}

fn norms<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>, out: &mut Vec<ResidualReport>) -> Result<()> {
    let z_axis = |t: T| -> Result<Axis<T>> { Ok(Axis::centered(T::lit(12.0) * width(&modes.axial, t)?, 241)) };
    for n in 0..=s.max_z_order {
        let state = |t: T| {
            let st = NumberState::new(&modes.axial.mode_at(t)?, n, DEFAULT_N_MAX)?;
            Ok(move |[z]: [T; 1]| st.eval(z))
        };
        let mut r = norm_conservation_adaptive(state, Measure::Cartesian, |t| Ok(vec![z_axis(t)?]), &s.times, s.norm_tol)?;
        r.params = format!("Z n={n}");
        out.push(r);
    }

    let orders = s.max_z_order + 1;
    let mut acc = Accum::default();
    let mut grid = String::new();
    for &t in &s.times {
        let pt = modes.axial.mode_at(t)?;
        let axis = z_axis(t)?;
        if grid.is_empty() {
            grid = GridSpec::new(vec![axis], s.times.clone()).summary();
        }
        let states: Vec<NumberState<T>> =
            (0..=orders).map(|n| NumberState::new(&pt, n, DEFAULT_N_MAX)).collect::<Result<_>>()?;
        let mut dev = Vec::new();
        for j in 0..=orders {
            for k in 0..=orders {
                let (a, b) = (states[j], states[k]);
                let ip = overlap(move |[z]: [T; 1]| a.eval(z), move |[z]: [T; 1]| b.eval(z), Measure::Cartesian, &[axis])?;
                let delta = if j == k { T::one() } else { T::zero() };
                dev.push(((ip - Cx::new(delta, T::zero())).norm(), T::one()));
            }
        }
        acc.slice(&dev);
    }
    out.push(acc.report("orthogonality", format!("Z j,k<={orders}"), grid, s.norm_tol.as_f64(), Gate::MaxAbs));

    let qn = CartesianQN::new(1, 1, 1);
    let state = |t: T| {
        let st = CartesianState::at(modes, qn, t)?;
        Ok(move |[x, y, z]: [T; 3]| st.eval(x, y, z))
    };
    let axes3 = |t: T| -> Result<Vec<Axis<T>>> {
        let xy = Axis::centered(T::lit(10.0) * width(&modes.radial, t)?, 61);
        Ok(vec![xy, xy, Axis::centered(T::lit(10.0) * width(&modes.axial, t)?, 61)])
    };
    let mut r = norm_conservation_adaptive(state, Measure::Cartesian, axes3, &s.times, s.norm_tol)?;
    r.params = "Psi 1,1,1".into();
    out.push(r);

    let polar = |t: T| -> Result<Vec<Axis<T>>> {
        Ok(vec![
            Axis::new(T::zero(), T::lit(12.0) * width(&modes.radial, t)?, 801),
            Axis::periodic(T::zero(), T::TAU(), 16),
        ])
    };
    for n in 0..=s.max_polar {
        for m in 0..=s.max_polar {
            let qn = PolarQN::new(n, m);
            let state = |t: T| {
                let st = PolarState::new(&modes.radial.mode_at(t)?, qn);
                Ok(move |[r, th]: [T; 2]| st.eval(r, th))
            };
            let mut r = norm_conservation_adaptive(state, Measure::Cylindrical, polar, &s.times, s.norm_tol)?;
            r.params = format!("Omega n={n},m={m}");
            out.push(r);
        }
    }
    Ok(())
}

fn identity<T: Real>(modes: &TrapModes<T>, s: &SuiteSettings<T>) -> Result<ResidualReport> {
    let mut acc = Accum::default();
    let mut grid = String::new();
    for &t in &s.times {
        let axis = Axis::centered(T::lit(5.0) * width(&modes.radial, t)?, 41);
        if grid.is_empty() {
            grid = GridSpec::new(vec![axis, axis], s.times.clone()).summary();
        }
        let pts = axis.points();
        let pt = modes.radial.mode_at(t)?;
        let omega = PolarState::new(&pt, PolarQN::new(0, 0));
        let x0 = NumberState::new(&pt, 0, DEFAULT_N_MAX)?;
        let mut dev = Vec::with_capacity(pts.len() * pts.len());
        for &y in &pts {
            for &x in &pts {
                dev.push(((omega.eval_xy(x, y) - x0.eval(x) * x0.eval(y)).norm(), T::one()));
            }
        }
        acc.slice(&dev);
    }
    Ok(acc.report("identity_omega00", "Omega00 vs X0Y0".into(), grid, s.identity_tol.as_f64(), Gate::MaxAbs))
}
