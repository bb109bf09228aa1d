use std::fs::File;

use paultrap::cartesian::{CartesianQN, CartesianState, TrapModes};
use paultrap::io::{sample_field, write_chart_csv, write_mode_csv, write_polar_csv, write_report_json, GridField, ReportEntry};
use paultrap::mode::{stability_scan, ModeOptions, StepControl, Sweep, SweepKind, SweepRange};
use paultrap::verify::{run_suite, Axis, Suite, SuiteSettings};
use paultrap::{Cx, TrapConfig64};

fn static_trap() -> TrapConfig64 {
    TrapConfig64::new(1.0, 1.0, 0.5, 0.0, 2.0, 0.0).unwrap()
}

#[test]
fn mode_csv_round_trips_exactly() {
    let cfg = TrapConfig64::from_mathieu(1.0, 1.0, 2.0, 0.02, 0.3).unwrap();
    let modes = TrapModes::integrate(&cfg, (0.0, 3.0), &ModeOptions { samples: 31, ..ModeOptions::default() }).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("axial.csv");
    write_mode_csv(&modes.axial, File::create(&path).unwrap()).unwrap();
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["t", "re_xi", "im_xi", "re_xidot", "im_xidot", "phi", "phi_dot", "theta"]);
    for (i, row) in rd.records().enumerate() {
        let row = row.unwrap();
        let p = modes.axial.sample(i);
        let vals: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(vals, [p.t, p.xi.re, p.xi.im, p.xi_dot.re, p.xi_dot.im, p.phi, p.phi_dot, p.theta]);
    }
}

#[test]
fn chart_csv_layout() {
    let sweep = Sweep {
        kind: SweepKind::Voltage,
        p1: SweepRange { min: 0.2, max: 1.0, count: 3 },
        p2: SweepRange { min: 0.0, max: 1.0, count: 4 },
    };
    let chart = stability_scan(&static_trap(), &sweep, &StepControl::default()).unwrap();
    let mut buf = Vec::new();
    write_chart_csv(&chart, &mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), ["p1", "p2", "trace_r", "trace_z", "stable_r", "stable_z", "stable_trap"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 12);
    for row in &rows {
        for flag in [&row[4], &row[5], &row[6]] {
            assert!(flag == "0" || flag == "1");
        }
        // Vac = 0 with Vdc > 0 leaves the axial direction a saddle.
        if row[1].parse::<f64>().unwrap() == 0.0 {
            assert_eq!(&row[5], "0");
        }
    }
    let empty = Sweep { p1: SweepRange { min: 0.0, max: 1.0, count: 0 }, ..sweep };
    assert!(stability_scan(&static_trap(), &empty, &StepControl::default()).is_err());
}

#[test]
fn grid_json_is_x_fastest() {
    let cfg = static_trap();
    let modes = TrapModes::integrate(&cfg, (0.0, 1.0), &ModeOptions { samples: 101, ..ModeOptions::default() }).unwrap();
    let axes = [Axis::new(-1.0, 1.0, 3), Axis::new(-2.0, 2.0, 5), Axis::new(0.0, 1.0, 2)];
    let qn = CartesianQN::new(1, 0, 1);
    let field = GridField::sample(["x", "y", "z"], &axes, 0.5, |t| {
        let st = CartesianState::at(&modes, qn, t)?;
        Ok(move |[x, y, z]: [f64; 3]| st.eval(x, y, z))
    })
    .unwrap();
    assert_eq!(field.counts, [3, 5, 2]);
    assert_eq!(field.spacings, [1.0, 1.0, 1.0]);
    assert_eq!(field.origin, [-1.0, -2.0, 0.0]);
    let st = CartesianState::at(&modes, qn, 0.5).unwrap();
    let (ix, iy, iz) = (2, 3, 1);
    let v = field.values[ix + 3 * (iy + 5 * iz)];
    let want = st.eval(-1.0 + ix as f64, -2.0 + iy as f64, iz as f64);
    assert_eq!(v, [want.re, want.im]);

    let mut buf = Vec::new();
    field.write_json(&mut buf).unwrap();
    let back: GridField = serde_json::from_slice(&buf).unwrap();
    assert_eq!(back, field);
}

#[test]
fn polar_csv_columns() {
    let axes = [Axis::new(0.0, 1.0, 3), Axis::periodic(0.0, std::f64::consts::TAU, 4)];
    let samples = sample_field(&axes, &[0.0, 1.0], |t| Ok(move |[r, th]: [f64; 2]| Cx::new(r, th + t))).unwrap();
    let mut buf = Vec::new();
    write_polar_csv(&samples, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,theta,t,re,im,abs2"));
    assert_eq!(lines.count(), 24);
}

#[test]
fn static_trap_passes_full_suite() {
    let cfg = static_trap();
    let times: Vec<f64> = (1..=5).map(|k| k as f64 / 6.0).collect();
    let modes = TrapModes::integrate(&cfg, (0.0, 1.1), &ModeOptions::default().with_cadence(1.1, 0.01)).unwrap();
    let reports = run_suite(&cfg, &modes, Suite::Full, &SuiteSettings::new(times.clone())).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(failed.is_empty(), "{failed:#?}");

    let fault = run_suite(&cfg, &modes, Suite::InjectedFault, &SuiteSettings::new(times)).unwrap();
    let injected = fault.iter().find(|r| r.check == "injected_wrong_width").unwrap();
    assert!(!injected.pass);

    let mut buf = Vec::new();
    write_report_json(&reports, &mut buf).unwrap();
    let entries: Vec<ReportEntry> = serde_json::from_slice(&buf).unwrap();
    assert_eq!(entries.len(), reports.len());
    assert!(entries.iter().all(|e| e.pass && !e.check.is_empty()));
}
