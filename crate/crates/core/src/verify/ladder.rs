//! Ladder, commutator and eigen-relation checks.
//!
//! The one-dimensional pair is `J₋ = ξ∂_q - iξ̇q`, `J₊ = -ξ̄∂_q + iξ̄̇q`.
//! In the plane `a_∓`, `c_∓` combine the `x` and `y` pairs:
//! `a₋ = (J_{x-} + iJ_{y-})/√2`, `a₊ = (J_{x+} - iJ_{y+})/√2`,
//! `c₋ = (J_{x-} - iJ_{y-})/√2`, `c₊ = (J_{x+} + iJ_{y+})/√2`, and
//! `ℒ_z = i(y∂_x - x∂_y)`.

use rayon::prelude::*;

use super::stencil::d1;
use super::{Accum, Gate, GridSpec, ResidualReport};
use crate::cartesian::{NumberState, DEFAULT_N_MAX};
use crate::cylindrical::{PolarQN, PolarState};
use crate::error::{Error, Result};
use crate::mode::{ModePoint, ModeSolution};
use crate::scalar::{Cx, Real};

/// Ladder operators of one mode sample applied by finite differences.
#[derive(Clone, Copy, Debug)]
pub struct LadderOps<T> {
    xi: Cx<T>,
    xi_dot: Cx<T>,
}

impl<T: Real> LadderOps<T> {
    pub fn new(point: &ModePoint<T>) -> Self {
        Self { xi: point.xi, xi_dot: point.xi_dot }
    }

    /// `J₋f` along `axis` with stencil spacing `h`.
    pub fn j_minus<const D: usize>(&self, f: &impl Fn([T; D]) -> Cx<T>, p: [T; D], axis: usize, h: T) -> Cx<T> {
        self.xi * d1(f, p, axis, h) - Cx::new(T::zero(), p[axis]) * self.xi_dot * f(p)
    }

    /// `J₊f` along `axis` with stencil spacing `h`.
    pub fn j_plus<const D: usize>(&self, f: &impl Fn([T; D]) -> Cx<T>, p: [T; D], axis: usize, h: T) -> Cx<T> {
        Cx::new(T::zero(), p[axis]) * self.xi_dot.conj() * f(p) - self.xi.conj() * d1(f, p, axis, h)
    }

    pub fn a_minus(&self, f: &impl Fn([T; 2]) -> Cx<T>, p: [T; 2], h: [T; 2]) -> Cx<T> {
        (self.j_minus(f, p, 0, h[0]) + Cx::<T>::i() * self.j_minus(f, p, 1, h[1])) * T::FRAC_1_SQRT_2()
    }

    pub fn a_plus(&self, f: &impl Fn([T; 2]) -> Cx<T>, p: [T; 2], h: [T; 2]) -> Cx<T> {
        (self.j_plus(f, p, 0, h[0]) - Cx::<T>::i() * self.j_plus(f, p, 1, h[1])) * T::FRAC_1_SQRT_2()
    }

    pub fn c_minus(&self, f: &impl Fn([T; 2]) -> Cx<T>, p: [T; 2], h: [T; 2]) -> Cx<T> {
        (self.j_minus(f, p, 0, h[0]) - Cx::<T>::i() * self.j_minus(f, p, 1, h[1])) * T::FRAC_1_SQRT_2()
    }

    pub fn c_plus(&self, f: &impl Fn([T; 2]) -> Cx<T>, p: [T; 2], h: [T; 2]) -> Cx<T> {
        (self.j_plus(f, p, 0, h[0]) + Cx::<T>::i() * self.j_plus(f, p, 1, h[1])) * T::FRAC_1_SQRT_2()
    }

    /// `ℒ_z f = i(y∂_x - x∂_y)f`; independent of the mode.
    pub fn l_z(&self, f: &impl Fn([T; 2]) -> Cx<T>, p: [T; 2], h: [T; 2]) -> Cx<T> {
        let [x, y] = p;
        Cx::<T>::i() * (d1(f, p, 0, h[0]) * y - d1(f, p, 1, h[1]) * x)
    }
}

/// Evaluates `K` residual fields per center and time, gated on the grid norm.
fn run_checks<T, const D: usize, const K: usize, F, L>(grid: &GridSpec<T>, slice: F) -> Result<[Accum; K]>
where
    T: Real,
    F: Fn(T) -> Result<L>,
    L: Fn([T; D]) -> [Cx<T>; K] + Sync,
{
    let (centers, weights) = grid.centers::<D>(|_| true)?;
    let mut acc = [Accum::default(); K];
    for &t in &grid.times {
        let field = slice(t)?;
        let values: Vec<[Cx<T>; K]> = centers.par_iter().map(|&p| field(p)).collect();
        for (k, a) in acc.iter_mut().enumerate() {
            let col: Vec<(T, T)> = values.iter().zip(&weights).map(|(v, &w)| (v[k].norm(), w)).collect();
            a.slice(&col);
        }
    }
    Ok(acc)
}

fn zero<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::zero())
}

/// `J₋Z_n = √n Z_{n-1}` and `J₊Z_n = √(n+1) Z_{n+1}` on the mode's `z`
/// grid. Returns the lowering report then the raising report.
pub fn ladder_check_z<T: Real>(
    mode: &ModeSolution<T>,
    n: usize,
    grid: &GridSpec<T>,
    tol: T,
) -> Result<Vec<ResidualReport>> {
    grid.validate(1)?;
    if n + 1 > DEFAULT_N_MAX {
        return Err(Error::OrderTooLarge { n: n + 1, max: DEFAULT_N_MAX });
    }
    let [h] = grid.stencils::<1>();
    let [lower, raise] = run_checks::<T, 1, 2, _, _>(grid, |t| {
        let pt = mode.mode_at(t)?;
        let ops = LadderOps::new(&pt);
        let zn = NumberState::new(&pt, n, DEFAULT_N_MAX)?;
        let below = if n > 0 { Some(NumberState::new(&pt, n - 1, DEFAULT_N_MAX)?) } else { None };
        let above = NumberState::new(&pt, n + 1, DEFAULT_N_MAX)?;
        let (sn, sn1) = (T::of(n).sqrt(), T::of(n + 1).sqrt());
        Ok(move |p: [T; 1]| {
            let f = |q: [T; 1]| zn.eval(q[0]);
            let lowered = below.map_or(zero(), |b| b.eval(p[0]) * sn);
            [ops.j_minus(&f, p, 0, h) - lowered, ops.j_plus(&f, p, 0, h) - above.eval(p[0]) * sn1]
        })
    })?;
    let params = format!("n={n}");
    let (g, tol) = (grid.summary(), tol.as_f64());
    Ok(vec![
        lower.report("ladder_z_minus", params.clone(), g.clone(), tol, Gate::GridNorm),
        raise.report("ladder_z_plus", params, g, tol, Gate::GridNorm),
    ])
}

/// A named test function on the axial line.
pub type TestFn<'a, T> = (&'a str, &'a (dyn Fn([T; 1]) -> Cx<T> + Sync));

/// `(J₋J₊ - J₊J₋)f - f` for each named test function, built on the mode
/// at every grid time.
pub fn commutator_check<T: Real>(
    mode: &ModeSolution<T>,
    tests: &[TestFn<T>],
    grid: &GridSpec<T>,
    tol: T,
) -> Result<Vec<ResidualReport>> {
    grid.validate(1)?;
    let [h] = grid.stencils::<1>();
    tests
        .iter()
        .map(|&(name, f)| {
            let [acc] = run_checks::<T, 1, 1, _, _>(grid, |t| {
                let ops = LadderOps::new(&mode.mode_at(t)?);
                Ok(move |p: [T; 1]| {
                    let up = |q: [T; 1]| ops.j_plus(&f, q, 0, h);
                    let down = |q: [T; 1]| ops.j_minus(&f, q, 0, h);
                    [ops.j_minus(&up, p, 0, h) - ops.j_plus(&down, p, 0, h) - f(p)]
                })
            })?;
            Ok(acc.report("commutator_z", name.to_string(), grid.summary(), tol.as_f64(), Gate::GridNorm))
        })
        .collect()
}

fn polar_slice<T: Real>(mode: &ModeSolution<T>, t: T, qn: PolarQN) -> Result<(LadderOps<T>, PolarState<T>, ModePoint<T>)> {
    let pt = mode.mode_at(t)?;
    Ok((LadderOps::new(&pt), PolarState::new(&pt, qn), pt))
}

/// `a₋Ω_{n,m} = √n Ω_{n-1,m}`, `a₊Ω_{n,m} = √(n+1) Ω_{n+1,m}`,
/// `c₋Ω_{n,m} = √m Ω_{n,m-1}`, `c₊Ω_{n,m} = √(m+1) Ω_{n,m+1}` on an
/// `(x, y)` grid for the radial mode. Reports come in that order.
pub fn polar_ladder_check<T: Real>(
    mode: &ModeSolution<T>,
    qn: PolarQN,
    grid: &GridSpec<T>,
    tol: T,
) -> Result<Vec<ResidualReport>> {
    grid.validate(2)?;
    let h = grid.stencils::<2>();
    let (n, m) = (qn.n, qn.m);
    let accs = run_checks::<T, 2, 4, _, _>(grid, |t| {
        let (ops, omega, pt) = polar_slice(mode, t, qn)?;
        let a_down = (n > 0).then(|| PolarState::new(&pt, PolarQN::new(n - 1, m)));
        let a_up = PolarState::new(&pt, PolarQN::new(n + 1, m));
        let c_down = (m > 0).then(|| PolarState::new(&pt, PolarQN::new(n, m - 1)));
        let c_up = PolarState::new(&pt, PolarQN::new(n, m + 1));
        let s = |k: usize| T::of(k).sqrt();
        let (sn, sn1, sm, sm1) = (s(n), s(n + 1), s(m), s(m + 1));
        Ok(move |p: [T; 2]| {
            let f = |q: [T; 2]| omega.eval_xy(q[0], q[1]);
            let at = |st: &PolarState<T>| st.eval_xy(p[0], p[1]);
            [
                ops.a_minus(&f, p, h) - a_down.as_ref().map_or(zero(), |st| at(st) * sn),
                ops.a_plus(&f, p, h) - at(&a_up) * sn1,
                ops.c_minus(&f, p, h) - c_down.as_ref().map_or(zero(), |st| at(st) * sm),
                ops.c_plus(&f, p, h) - at(&c_up) * sm1,
            ]
        })
    })?;
    let params = format!("n={n},m={m}");
    let names = ["ladder_a_minus", "ladder_a_plus", "ladder_c_minus", "ladder_c_plus"];
    Ok(names
        .iter()
        .zip(accs)
        .map(|(name, acc)| acc.report(name, params.clone(), grid.summary(), tol.as_f64(), Gate::GridNorm))
        .collect())
}

/// Eigen-relations of `Ω_{n,m}` with `K = a₊a₋ + c₊c₋ + 1`,
/// `f = (K - ℒ_z)/2` and `d = (K + ℒ_z)/2`:
/// `ℒ_z → m - n`, `K → n + m + 1`, `f → n + ½`, `d → m + ½`,
/// `a₊a₋ - f → -½`, `c₊c₋ - d → -½`. Reports come in that order.
pub fn eigen_check<T: Real>(
    mode: &ModeSolution<T>,
    qn: PolarQN,
    grid: &GridSpec<T>,
    tol: T,
) -> Result<Vec<ResidualReport>> {
    grid.validate(2)?;
    let h = grid.stencils::<2>();
    let (n, m) = (T::of(qn.n), T::of(qn.m));
    let half = T::lit(0.5);
    let accs = run_checks::<T, 2, 6, _, _>(grid, |t| {
        let (ops, omega, _) = polar_slice(mode, t, qn)?;
        Ok(move |p: [T; 2]| {
            let f = |q: [T; 2]| omega.eval_xy(q[0], q[1]);
            let a_low = |q: [T; 2]| ops.a_minus(&f, q, h);
            let c_low = |q: [T; 2]| ops.c_minus(&f, q, h);
            let v = f(p);
            let lz = ops.l_z(&f, p, h);
            let aa = ops.a_plus(&a_low, p, h);
            let cc = ops.c_plus(&c_low, p, h);
            let k = aa + cc + v;
            let fo = (k - lz) * half;
            let d = (k + lz) * half;
            [
                lz - v * (m - n),
                k - v * (n + m + T::one()),
                fo - v * (n + half),
                d - v * (m + half),
                aa - fo + v * half,
                cc - d + v * half,
            ]
        })
    })?;
    let params = format!("n={},m={}", qn.n, qn.m);
    let names = ["eigen_lz", "eigen_k", "eigen_f", "eigen_d", "casimir_a", "casimir_c"];
    Ok(names
        .iter()
        .zip(accs)
        .map(|(name, acc)| acc.report(name, params.clone(), grid.summary(), tol.as_f64(), Gate::GridNorm))
        .collect())
}
