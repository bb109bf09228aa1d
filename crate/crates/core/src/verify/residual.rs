//! Schrödinger-operator residuals.
//!
//! With ħ = m = 1 and the equation scaled by 2, the operators are
//! `∂_zz + 2i∂_t - 2g₃z²`, `∇² + 2i∂_t - 2g(x² + y²) - 2g₃z²` and
//! `∂_rr + r⁻¹∂_r + r⁻²∂_θθ + 2i∂_t - 2gr²`.

use rayon::prelude::*;

use super::stencil::{d1, d2, time_derivative};
use super::{Accum, Gate, GridSpec, ResidualReport};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Applies `spatial(state, p, state(p), t) + 2i ∂_t state(p)` on every kept
/// center at every time slice.
fn apply<T, const D: usize, F, S, L>(
    state: &F,
    grid: &GridSpec<T>,
    keep: impl Fn(&[T; D]) -> bool,
    measure: impl Fn(&[T; D]) -> T + Sync,
    spatial: L,
) -> Result<Accum>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; D]) -> Cx<T> + Sync,
    L: Fn(&S, [T; D], Cx<T>, T) -> Cx<T> + Sync,
{
    let (centers, weights) = grid.centers::<D>(keep)?;
    let d = grid.dt_probe;
    let half = d / T::lit(2.0);
    let two_i = Cx::new(T::zero(), T::lit(2.0));
    let mut acc = Accum::default();
    for &t in &grid.times {
        let probes = [state(t - d)?, state(t - half)?, state(t + half)?, state(t + d)?];
        let s0 = state(t)?;
        let slice: Vec<(T, T)> = centers
            .par_iter()
            .zip(&weights)
            .map(|(&p, &w)| {
                let f0 = s0(p);
                let dt = time_derivative([probes[0](p), probes[1](p), probes[2](p), probes[3](p)], d);
                let r = spatial(&s0, p, f0, t) + two_i * dt;
                (r.norm(), w * measure(&p))
            })
            .collect();
        acc.slice(&slice);
    }
    Ok(acc)
}

/// Residual of `∂_zz + 2i∂_t - 2g₃(t)z²` on a one-axis grid; gated on the
/// pointwise maximum.
pub fn schrodinger_residual_1d<T, F, S, G>(state: F, coupling: G, grid: &GridSpec<T>, tol: T) -> Result<ResidualReport>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; 1]) -> Cx<T> + Sync,
    G: Fn(T) -> T + Sync,
{
    grid.validate(1)?;
    let [h] = grid.stencils::<1>();
    let two = T::lit(2.0);
    let acc = apply(&state, grid, |_| true, |_| T::one(), |s, p, f0, t| {
        let z = p[0];
        d2(s, p, f0, 0, h) - f0 * (two * coupling(t) * z * z)
    })?;
    Ok(acc.report("schrodinger_1d", String::new(), grid.summary(), tol.as_f64(), Gate::MaxAbs))
}

/// Residual of `∇² + 2i∂_t - 2g(t)(x² + y²) - 2g₃(t)z²`; `couplings(t)`
/// returns `(g, g₃)`.
pub fn schrodinger_residual_3d_cartesian<T, F, S, G>(
    state: F,
    couplings: G,
    grid: &GridSpec<T>,
    tol: T,
) -> Result<ResidualReport>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; 3]) -> Cx<T> + Sync,
    G: Fn(T) -> (T, T) + Sync,
{
    grid.validate(3)?;
    let h = grid.stencils::<3>();
    let two = T::lit(2.0);
    let acc = apply(&state, grid, |_| true, |_| T::one(), |s, p, f0, t| {
        let (g, g3) = couplings(t);
        let [x, y, z] = p;
        let lap = d2(s, p, f0, 0, h[0]) + d2(s, p, f0, 1, h[1]) + d2(s, p, f0, 2, h[2]);
        lap - f0 * (two * (g * (x * x + y * y) + g3 * z * z))
    })?;
    Ok(acc.report("schrodinger_3d", String::new(), grid.summary(), tol.as_f64(), Gate::MaxAbs))
}

/// Residual of `∂_rr + r⁻¹∂_r + r⁻²∂_θθ + 2i∂_t - 2g(t)r²` on an `(r, θ)`
/// grid. The θ axis must be periodic and the r axis must stay off the
/// origin; centers with `r < 4h_r` are skipped.
pub fn schrodinger_residual_polar<T, F, S, G>(state: F, coupling: G, grid: &GridSpec<T>, tol: T) -> Result<ResidualReport>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; 2]) -> Cx<T> + Sync,
    G: Fn(T) -> T + Sync,
{
    grid.validate(2)?;
    if !(grid.axes[0].min > T::zero()) || grid.axes[0].periodic {
        return Err(Error::Grid("polar r axis must be non-periodic with r_min > 0".into()));
    }
    if !grid.axes[1].periodic {
        return Err(Error::Grid("polar θ axis must be periodic".into()));
    }
    let [hr, ht] = grid.stencils::<2>();
    let guard = T::lit(4.0) * hr;
    let two = T::lit(2.0);
    let acc = apply(&state, grid, |p| p[0] >= guard, |p| p[0], |s, p, f0, t| {
        let r = p[0];
        d2(s, p, f0, 0, hr) + d1(s, p, 0, hr) / r + d2(s, p, f0, 1, ht) / (r * r) - f0 * (two * coupling(t) * r * r)
    })?;
    Ok(acc.report("schrodinger_polar", String::new(), grid.summary(), tol.as_f64(), Gate::MaxAbs))
}
