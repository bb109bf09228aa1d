//! Plot-ready CSV and JSON exports.
//!
//! CSV floats are written with 17 significant digits so files round-trip
//! exactly. Nothing time- or host-dependent goes into a data file.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cylindrical::lattice;
use crate::error::{Error, Result};
use crate::mode::{ModeSolution, StabilityChart};
use crate::scalar::{Cx, Real};
use crate::verify::{Axis, ResidualReport};

/// Formats a float with 17 significant digits.
pub fn float<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn csv_writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    Ok(out)
}

/// Mode trajectory: `t, re_xi, im_xi, re_xidot, im_xidot, phi, phi_dot, theta`.
pub fn write_mode_csv<T: Real, W: Write>(mode: &ModeSolution<T>, w: W) -> Result<()> {
    let mut out = csv_writer(w, &["t", "re_xi", "im_xi", "re_xidot", "im_xidot", "phi", "phi_dot", "theta"])?;
    for i in 0..mode.len() {
        let p = mode.sample(i);
        out.write_record([
            float(p.t),
            float(p.xi.re),
            float(p.xi.im),
            float(p.xi_dot.re),
            float(p.xi_dot.im),
            float(p.phi),
            float(p.phi_dot),
            float(p.theta),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Stability chart, one row per cell with `p1` varying slowest:
/// `p1, p2, trace_r, trace_z, stable_r, stable_z, stable_trap`.
pub fn write_chart_csv<T: Real, W: Write>(chart: &StabilityChart<T>, w: W) -> Result<()> {
    let mut out = csv_writer(w, &["p1", "p2", "trace_r", "trace_z", "stable_r", "stable_z", "stable_trap"])?;
    for (i1, &p1) in chart.p1.iter().enumerate() {
        for (i2, &p2) in chart.p2.iter().enumerate() {
            let k = chart.index(i1, i2);
            out.write_record([
                float(p1),
                float(p2),
                float(chart.trace_radial[k]),
                float(chart.trace_axial[k]),
                flag(chart.stable_radial[k]).into(),
                flag(chart.stable_axial[k]).into(),
                flag(chart.stable_trap[k]).into(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One sampled field value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample<T, const D: usize> {
    pub point: [T; D],
    pub t: T,
    pub value: Cx<T>,
}

/// Samples `state(t)` on the tensor grid of `axes` at every time, axis 0
/// varying fastest within each time slice.
pub fn sample_field<T, const D: usize, F, S>(axes: &[Axis<T>; D], times: &[T], state: F) -> Result<Vec<FieldSample<T, D>>>
where
    T: Real,
    F: Fn(T) -> Result<S>,
    S: Fn([T; D]) -> Cx<T> + Sync,
{
    let points: Vec<Vec<T>> = axes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if a.count == 0 || !(a.min <= a.max) {
                return Err(Error::Grid(format!("axis {i} needs min <= max and a positive count")));
            }
            Ok(if a.count == 1 { vec![a.min] } else { a.points() })
        })
        .collect::<Result<_>>()?;
    let total: usize = points.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total * times.len());
    for &t in times {
        let s = state(t)?;
        let slice: Vec<_> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut rem = flat;
                let point = std::array::from_fn(|d| {
                    let i = rem % points[d].len();
                    rem /= points[d].len();
                    points[d][i]
                });
                FieldSample { point, t, value: s(point) }
            })
            .collect();
        out.extend(slice);
    }
    Ok(out)
}

fn value_cols<T: Real>(v: Cx<T>) -> [String; 3] {
    [float(v.re), float(v.im), float(v.norm_sqr())]
}

/// Line samples: `<coord>, t, re, im, abs2` with `coord` e.g. `x` or `z`.
pub fn write_line_csv<T: Real, W: Write>(coord: &str, samples: &[FieldSample<T, 1>], w: W) -> Result<()> {
    let mut out = csv_writer(w, &[coord, "t", "re", "im", "abs2"])?;
    for s in samples {
        let [re, im, abs2] = value_cols(s.value);
        out.write_record([float(s.point[0]), float(s.t), re, im, abs2])?;
    }
    out.flush()?;
    Ok(())
}

/// Polar-plane samples: `r, theta, t, re, im, abs2`.
pub fn write_polar_csv<T: Real, W: Write>(samples: &[FieldSample<T, 2>], w: W) -> Result<()> {
    let mut out = csv_writer(w, &["r", "theta", "t", "re", "im", "abs2"])?;
    for s in samples {
        let [re, im, abs2] = value_cols(s.value);
        out.write_record([float(s.point[0]), float(s.point[1]), float(s.t), re, im, abs2])?;
    }
    out.flush()?;
    Ok(())
}

/// Three-dimensional field at one time, values flattened with axis 0 fastest
/// as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub axes: [String; 3],
    pub counts: [usize; 3],
    pub spacings: [f64; 3],
    pub origin: [f64; 3],
    pub t: f64,
    pub values: Vec<[f64; 2]>,
}

impl GridField {
    /// Samples `state` on `axes` at time `t`.
    pub fn sample<T, F, S>(names: [&str; 3], axes: &[Axis<T>; 3], t: T, state: F) -> Result<Self>
    where
        T: Real,
        F: Fn(T) -> Result<S>,
        S: Fn([T; 3]) -> Cx<T> + Sync,
    {
        let samples = sample_field(axes, &[t], state)?;
        Ok(Self {
            axes: names.map(String::from),
            counts: std::array::from_fn(|d| axes[d].count),
            spacings: std::array::from_fn(|d| if axes[d].count > 1 { axes[d].spacing().as_f64() } else { 0.0 }),
            origin: std::array::from_fn(|d| axes[d].min.as_f64()),
            t: t.as_f64(),
            values: samples.iter().map(|s| [s.value.re.as_f64(), s.value.im.as_f64()]).collect(),
        })
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer(w, self)?;
        Ok(())
    }
}

/// Allowed quantum numbers up to level `max_level`: `n, m, n_r, l_z`.
pub fn write_lattice_csv<W: Write>(max_level: usize, w: W) -> Result<()> {
    let mut out = csv_writer(w, &["n", "m", "n_r", "l_z"])?;
    for (p, c) in lattice(max_level) {
        out.write_record([p.n.to_string(), p.m.to_string(), c.n_r.to_string(), c.l_z.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Exported form of a [`ResidualReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub check: String,
    pub params: String,
    pub max_abs: f64,
    pub rms: f64,
    pub tol: f64,
    pub pass: bool,
}

impl From<&ResidualReport> for ReportEntry {
    fn from(r: &ResidualReport) -> Self {
        Self { check: r.check.clone(), params: r.params.clone(), max_abs: r.value(), rms: r.rms, tol: r.tol, pass: r.pass }
    }
}

/// Verification report: a JSON list of [`ReportEntry`].
pub fn write_report_json<W: Write>(reports: &[ResidualReport], w: W) -> Result<()> {
    let entries: Vec<ReportEntry> = reports.iter().map(ReportEntry::from).collect();
    serde_json::to_writer_pretty(w, &entries)?;
    Ok(())
}
