//! Subcommand bodies. Each returns `Ok(true)` when every requested check
//! passed.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use paultrap::cartesian::{CartesianState, NumberState, TrapModes, DEFAULT_N_MAX};
use paultrap::cylindrical::{theta_factor, RadialState};
use paultrap::io::{self, GridField};
use paultrap::mode::{default_ic, stability_scan, ModeOptions, StepControl, Sweep, SweepKind};
use paultrap::verify::{run_suite, Axis, Suite, SuiteSettings};
use paultrap::{Error, Result, TrapConfig64};
use serde::Serialize;

use crate::config::RunConfig;
use crate::parse::{self, StateSpec};

/// Largest sample spacing used when the modes only back state evaluation.
const SAMPLE_CADENCE: f64 = 0.01;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn modes_over(run: &RunConfig, span: (f64, f64), samples: Option<usize>) -> Result<TrapModes<f64>> {
    let cfg = &run.trap;
    let mut opts = ModeOptions::<f64>::default();
    if let Some(tol) = run.tolerances.wronskian {
        opts.wronskian_tol = tol;
    }
    opts = match samples {
        Some(n) if n < 2 => return Err(Error::Config("samples must be at least 2".into())),
        Some(n) => ModeOptions { samples: n, ..opts },
        None => opts.with_cadence(span.1 - span.0, SAMPLE_CADENCE.min(cfg.period() / 64.0)),
    };
    let ic_r = run.ic.radial.map_or_else(|| default_ic(cfg.radial_coupling(), span.0), |ic| ic.pair());
    let ic_z = run.ic.axial.map_or_else(|| default_ic(cfg.axial_coupling(), span.0), |ic| ic.pair());
    match TrapModes::integrate_from(cfg, ic_r, ic_z, span, &opts) {
        Err(Error::WronskianPrecondition { re, im }) => {
            Err(Error::Config(format!("initial conditions have Wronskian {re}{im:+}i, expected -i")))
        }
        r => r,
    }
}

/// Span that covers `times` with room for the time-derivative probes.
fn span_for(run: &RunConfig, times: &[f64]) -> Result<(f64, f64)> {
    let start = run.t_start();
    if let Some(&t) = times.iter().find(|&&t| t < start) {
        return Err(Error::Config(format!("time {t} precedes t_start {start}")));
    }
    let last = times.iter().cloned().fold(start, f64::max);
    Ok((start, last + 0.1))
}

pub fn evolve(run: &RunConfig, out: &Path) -> Result<bool> {
    let start = run.t_start();
    let end = run.t_end.unwrap_or(start + run.trap.period());
    if !(end > start) {
        return Err(Error::Config(format!("t_end {end} must exceed t_start {start}")));
    }
    let modes = modes_over(run, (start, end), Some(run.samples.unwrap_or(2001)))?;
    io::write_mode_csv(&modes.radial, create(out, "radial_mode.csv")?)?;
    io::write_mode_csv(&modes.axial, create(out, "axial_mode.csv")?)?;
    println!(
        "wrote {} samples per mode over [{start}, {end}]; Wronskian drift radial {:.3e}, axial {:.3e}",
        modes.radial.len(),
        modes.radial.wronskian_drift(),
        modes.axial.wronskian_drift()
    );
    Ok(true)
}

pub fn stability(run: &RunConfig, out: &Path) -> Result<bool> {
    let spec = run.sweep.as_deref().ok_or_else(|| Error::Config("stability needs --sweep".into()))?;
    let (p1, p2) = parse::sweep(spec)?;
    let kind = run.sweep_kind.as_deref().map_or(Ok(SweepKind::Mathieu), parse::sweep_kind)?;
    let chart = stability_scan(&run.trap, &Sweep { kind, p1, p2 }, &StepControl::default())?;
    io::write_chart_csv(&chart, create(out, "chart.csv")?)?;
    let stable = chart.stable_trap.iter().filter(|&&s| s).count();
    println!("{} cells, {stable} stable in both axes", chart.cells());
    Ok(true)
}

pub fn sample(run: &RunConfig, out: &Path) -> Result<bool> {
    let spec = parse::state(run.state.as_deref().unwrap_or("cart:0,0,0"))?;
    let times = parse::times(run.times.as_deref().unwrap_or("0"))?;
    let default_grid = match spec {
        StateSpec::Axial(_) => "-8:8:161",
        StateSpec::Cartesian(_) => "-6:6:61",
        StateSpec::Cylindrical(..) => "0:6:61,0:6.283185307179586:33,-6:6:121",
    };
    let mut axes = parse::grid(run.grid.as_deref().unwrap_or(default_grid))?;
    let modes = modes_over(run, span_for(run, &times)?, None)?;
    match spec {
        StateSpec::Axial(n) => {
            let [axis] = take::<1>(&mut axes)?;
            let samples = io::sample_field(&[axis], &times, |t| {
                let st = NumberState::new(&modes.axial.mode_at(t)?, n, DEFAULT_N_MAX)?;
                Ok(move |[z]: [f64; 1]| st.eval(z))
            })?;
            io::write_line_csv("z", &samples, create(out, &format!("z_n{n}.csv"))?)?;
        }
        StateSpec::Cartesian(qn) => {
            if axes.len() == 1 {
                axes = vec![axes[0]; 3];
            }
            let axes = take::<3>(&mut axes)?;
            for (i, &t) in times.iter().enumerate() {
                let field = GridField::sample(["x", "y", "z"], &axes, t, |t| {
                    let st = CartesianState::at(&modes, qn, t)?;
                    Ok(move |[x, y, z]: [f64; 3]| st.eval(x, y, z))
                })?;
                field.write_json(create(out, &format!("cart_{}_{}_{}_t{i}.json", qn.nx, qn.ny, qn.nz))?)?;
            }
        }
        StateSpec::Cylindrical(qn, n_z) => {
            let [r, theta, z] = take::<3>(&mut axes)?;
            if r.min < 0.0 {
                return Err(Error::Config("r axis must start at r >= 0".into()));
            }
            let stem = format!("cyl_{}_{}", qn.n_r, qn.l_z);
            let transverse = io::sample_field(&[r, theta], &times, |t| {
                let st = RadialState::new(&modes.radial.mode_at(t)?, qn)?;
                Ok(move |[r, th]: [f64; 2]| st.eval(r) * theta_factor(qn.l_z, th))
            })?;
            io::write_polar_csv(&transverse, create(out, &format!("{stem}_transverse.csv"))?)?;
            let axial = io::sample_field(&[z], &times, |t| {
                let st = NumberState::new(&modes.axial.mode_at(t)?, n_z, DEFAULT_N_MAX)?;
                Ok(move |[z]: [f64; 1]| st.eval(z))
            })?;
            io::write_line_csv("z", &axial, create(out, &format!("{stem}_axial_n{n_z}.csv"))?)?;
        }
    }
    println!("sampled {} time slice(s) into {}", times.len(), out.display());
    Ok(true)
}

fn take<const D: usize>(axes: &mut Vec<Axis<f64>>) -> Result<[Axis<f64>; D]> {
    std::mem::take(axes)
        .try_into()
        .map_err(|v: Vec<_>| Error::Config(format!("state needs {D} grid axes, got {}", v.len())))
}

/// Five slices spread over the first drive period, capped at one time unit.
fn default_verify_times(cfg: &TrapConfig64, start: f64) -> Vec<f64> {
    let window = cfg.period().min(1.0);
    (1..=5).map(|k| start + window * k as f64 / 6.0).collect()
}

#[derive(Serialize)]
struct ReportMeta<'a> {
    version: &'a str,
    suite: &'a str,
    trap: &'a TrapConfig64,
    times: &'a [f64],
    checks: usize,
    failed: usize,
    grids: Vec<GridMeta<'a>>,
    generated_unix: u64,
    elapsed_seconds: f64,
}

#[derive(Serialize)]
struct GridMeta<'a> {
    check: &'a str,
    params: &'a str,
    grid: &'a str,
    points: usize,
}

pub fn verify(run: &RunConfig, out: &Path) -> Result<bool> {
    let clock = std::time::Instant::now();
    let name = run.suite.as_deref().unwrap_or("full");
    let suite: Suite = name.parse()?;
    let times = match run.times.as_deref() {
        Some(s) => parse::times(s)?,
        None => default_verify_times(&run.trap, run.t_start()),
    };
    if let Some(&t) = times.iter().find(|&&t| t <= run.t_start()) {
        return Err(Error::Config(format!("verification time {t} must exceed t_start")));
    }
    let modes = modes_over(run, span_for(run, &times)?, None)?;
    let mut settings = SuiteSettings::new(times.clone());
    let tol = &run.tolerances;
    settings.residual_tol = tol.residual.unwrap_or(settings.residual_tol);
    settings.ladder_tol = tol.ladder.unwrap_or(settings.ladder_tol);
    settings.eigen_tol = tol.eigen.unwrap_or(settings.eigen_tol);
    settings.norm_tol = tol.norm.unwrap_or(settings.norm_tol);
    settings.identity_tol = tol.identity.unwrap_or(settings.identity_tol);
    let reports = run_suite(&run.trap, &modes, suite, &settings)?;

    io::write_report_json(&reports, create(out, "report.json")?)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    let meta = ReportMeta {
        version: env!("CARGO_PKG_VERSION"),
        suite: name,
        trap: &run.trap,
        times: &times,
        checks: reports.len(),
        failed,
        grids: reports
            .iter()
            .map(|r| GridMeta { check: &r.check, params: &r.params, grid: &r.grid, points: r.points })
            .collect(),
        generated_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        elapsed_seconds: clock.elapsed().as_secs_f64(),
    };
    let mut w = create(out, "report_meta.json")?;
    serde_json::to_writer_pretty(&mut w, &meta)?;
    w.flush()?;

    for r in &reports {
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:<20} {:<22} {:.3e} (tol {:.1e})", r.check, r.params, r.value(), r.tol);
    }
    println!("{} checks, {failed} failed", reports.len());
    Ok(failed == 0)
}

pub fn lattice(max_level: usize, out: &Path) -> Result<bool> {
    io::write_lattice_csv(max_level, create(out, "lattice.csv")?)?;
    println!("wrote levels 0..={max_level}");
    Ok(true)
}

pub fn out_dir(flag: Option<PathBuf>, run: Option<&RunConfig>) -> PathBuf {
    flag.or_else(|| run.and_then(|r| r.out.clone())).unwrap_or_else(|| PathBuf::from("out"))
}
