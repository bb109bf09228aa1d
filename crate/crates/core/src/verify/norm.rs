//! Quadrature norms, overlaps and the coverage guard.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Axis, Gate, GridSpec, ResidualReport};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};

/// Coordinate measure of a grid.
///
/// `Cartesian` integrates every axis with the trapezoid rule. `Cylindrical`
/// expects axes `(r, θ)` or `(r, θ, z)` with `r` starting at 0 (Simpson,
/// odd count, weight `r`), periodic `θ` and trapezoid `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Cartesian,
    Cylindrical,
}

/// Share of each non-periodic axis treated as boundary by the coverage guard.
const BOUNDARY_FRACTION: f64 = 0.05;

struct AxisRule<T> {
    points: Vec<T>,
    weights: Vec<T>,
    boundary: Vec<bool>,
}

fn trapezoid<T: Real>(axis: &Axis<T>) -> Vec<T> {
    let h = axis.spacing();
    let mut w = vec![h; axis.count];
    if !axis.periodic {
        w[0] = h / T::lit(2.0);
        w[axis.count - 1] = h / T::lit(2.0);
    }
    w
}

fn simpson<T: Real>(axis: &Axis<T>) -> Result<Vec<T>> {
    if axis.count.is_multiple_of(2) {
        return Err(Error::Grid("Simpson's rule needs an odd point count".into()));
    }
    let h3 = axis.spacing() / T::lit(3.0);
    Ok((0..axis.count)
        .map(|i| {
            if i == 0 || i + 1 == axis.count {
                h3
            } else if i % 2 == 1 {
                h3 * T::lit(4.0)
            } else {
                h3 * T::lit(2.0)
            }
        })
        .collect())
}

fn rules<T: Real>(axes: &[Axis<T>], measure: Measure) -> Result<Vec<AxisRule<T>>> {
    if measure == Measure::Cylindrical {
        if !(axes.len() == 2 || axes.len() == 3) {
            return Err(Error::Grid("cylindrical measure needs (r, θ) or (r, θ, z) axes".into()));
        }
        if axes[0].periodic || axes[0].min != T::zero() {
            return Err(Error::Grid("cylindrical r axis must start at 0".into()));
        }
        if !axes[1].periodic {
            return Err(Error::Grid("cylindrical θ axis must be periodic".into()));
        }
    }
    axes.iter()
        .enumerate()
        .map(|(i, a)| {
            a.validate(i)?;
            let points = a.points();
            let radial = measure == Measure::Cylindrical && i == 0;
            let weights = if radial {
                simpson(a)?.into_iter().zip(&points).map(|(w, &r)| w * r).collect()
            } else {
                trapezoid(a)
            };
            let edge = (a.max - a.min) * T::lit(BOUNDARY_FRACTION);
            let boundary = points
                .iter()
                .map(|&x| !a.periodic && ((!radial && x < a.min + edge) || x > a.max - edge))
                .collect();
            Ok(AxisRule { points, weights, boundary })
        })
        .collect()
}

/// Sums `w · g(p, on_boundary)` over the tensor grid.
fn tensor_sum<T, const D: usize, G>(rules: &[AxisRule<T>], g: G) -> (Cx<T>, T)
where
    T: Real,
    G: Fn([T; D]) -> Cx<T> + Sync,
{
    let total: usize = rules.iter().map(|r| r.points.len()).product();
    let zero = || (Cx::new(T::zero(), T::zero()), T::zero());
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut rem = flat;
            let mut w = T::one();
            let mut edge = false;
            let p: [T; D] = std::array::from_fn(|d| {
                let r = &rules[d];
                let i = rem % r.points.len();
                rem /= r.points.len();
                w *= r.weights[i];
                edge |= r.boundary[i];
                r.points[i]
            });
            let v = g(p) * w;
            (v, if edge { v.re } else { T::zero() })
        })
        .reduce(zero, |a, b| (a.0 + b.0, a.1 + b.1))
}

/// `⟨a|b⟩ = Σ w ā b` over the tensor grid of `axes`.
pub fn overlap<T, const D: usize, A, B>(a: A, b: B, measure: Measure, axes: &[Axis<T>]) -> Result<Cx<T>>
where
    T: Real,
    A: Fn([T; D]) -> Cx<T> + Sync,
    B: Fn([T; D]) -> Cx<T> + Sync,
{
    if axes.len() != D {
        return Err(Error::Grid(format!("expected {D} axes, got {}", axes.len())));
    }
    let rules = rules(axes, measure)?;
    Ok(tensor_sum(&rules, |p| a(p).conj() * b(p)).0)
}

/// Quadrature norm `∫|ψ|²` at every grid time. Reports `max |norm - 1|`
/// as `max_abs` and the spread over times as `grid_norm`; passes when both
/// are within `tol`. Fails with [`Error::Coverage`] when the mass in the
/// outer 5% of any non-periodic axis exceeds `tol/10`.
pub fn norm_conservation<T, const D: usize, F, S>(
    state: F,
    measure: Measure,
    grid: &GridSpec<T>,
    tol: T,
) -> Result<ResidualReport>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; D]) -> Cx<T> + Sync,
{
    grid.validate(D)?;
    let mut report = norm_conservation_adaptive(state, measure, |_| Ok(grid.axes.clone()), &grid.times, tol)?;
    report.grid = grid.summary();
    Ok(report)
}

/// [`norm_conservation`] with the axes chosen per time by `axes_at(t)`,
/// e.g. to follow a breathing width.
pub fn norm_conservation_adaptive<T, const D: usize, F, S, A>(
    state: F,
    measure: Measure,
    axes_at: A,
    times: &[T],
    tol: T,
) -> Result<ResidualReport>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; D]) -> Cx<T> + Sync,
    A: Fn(T) -> Result<Vec<Axis<T>>>,
{
    if times.is_empty() {
        return Err(Error::Grid("at least one time slice is required".into()));
    }
    let limit = tol.as_f64() / 10.0;
    let mut norms = Vec::with_capacity(times.len());
    let mut points = 0;
    let mut first_grid = None;
    for &t in times {
        let axes = axes_at(t)?;
        if axes.len() != D {
            return Err(Error::Grid(format!("expected {D} axes, got {}", axes.len())));
        }
        let rules = rules(&axes, measure)?;
        points += rules.iter().map(|r| r.points.len()).product::<usize>();
        first_grid.get_or_insert_with(|| GridSpec::new(axes.clone(), times.to_vec()).summary());
        let s = state(t)?;
        let (total, edge) = tensor_sum(&rules, |p| Cx::new(s(p).norm_sqr(), T::zero()));
        let mass = edge.as_f64();
        if !(mass <= limit) {
            return Err(Error::Coverage { mass, limit });
        }
        norms.push(total.re.as_f64());
    }
    let dev: Vec<f64> = norms.iter().map(|n| (n - 1.0).abs()).collect();
    let max_abs = dev.iter().cloned().fold(0.0, f64::max);
    let rms = (dev.iter().map(|d| d * d).sum::<f64>() / dev.len() as f64).sqrt();
    let hi = norms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    let tol = tol.as_f64();
    Ok(ResidualReport {
        check: "norm".into(),
        params: String::new(),
        grid: first_grid.unwrap_or_default(),
        max_abs,
        rms,
        grid_norm: spread,
        points,
        tol,
        gate: Gate::MaxAbs,
        pass: max_abs <= tol && spread <= tol,
    })
}
