//! Flag value grammars.

use paultrap::cartesian::CartesianQN;
use paultrap::cylindrical::CylindricalQN;
use paultrap::mode::{SweepKind, SweepRange};
use paultrap::verify::Axis;
use paultrap::{Error, Result};

fn bad(what: &str, s: &str) -> Error {
    Error::Config(format!("invalid {what} {s:?}"))
}

fn num<F: std::str::FromStr>(what: &str, s: &str) -> Result<F> {
    s.trim().parse().map_err(|_| bad(what, s))
}

fn finite(what: &str, s: &str) -> Result<f64> {
    let v: f64 = num(what, s)?;
    if !v.is_finite() {
        return Err(bad(what, s));
    }
    Ok(v)
}

/// `min:max:count[,min:max:count...]`.
pub fn grid(s: &str) -> Result<Vec<Axis<f64>>> {
    s.split(',')
        .map(|part| {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(bad("grid axis", part));
            }
            let (min, max, count) = (finite("grid axis", f[0])?, finite("grid axis", f[1])?, num("grid axis", f[2])?);
            if count == 0 || max < min || (count > 1 && max == min) {
                return Err(bad("grid axis", part));
            }
            Ok(Axis::new(min, max, count))
        })
        .collect()
}

/// `t1,t2,...`.
pub fn times(s: &str) -> Result<Vec<f64>> {
    let t: Vec<f64> = s.split(',').map(|x| finite("time", x)).collect::<Result<_>>()?;
    if t.is_empty() {
        return Err(bad("time list", s));
    }
    Ok(t)
}

/// `p1min:p1max:n1,p2min:p2max:n2`.
pub fn sweep(s: &str) -> Result<(SweepRange<f64>, SweepRange<f64>)> {
    let axes = grid(s).map_err(|_| bad("sweep", s))?;
    if axes.len() != 2 {
        return Err(bad("sweep", s));
    }
    let range = |a: &Axis<f64>| SweepRange { min: a.min, max: a.max, count: a.count };
    Ok((range(&axes[0]), range(&axes[1])))
}

pub fn sweep_kind(s: &str) -> Result<SweepKind> {
    match s {
        "mathieu" => Ok(SweepKind::Mathieu),
        "voltage" => Ok(SweepKind::Voltage),
        _ => Err(bad("sweep kind (expected mathieu or voltage)", s)),
    }
}

/// State selected for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSpec {
    /// `z:n`, the axial factor alone.
    Axial(usize),
    /// `cart:nx,ny,nz`.
    Cartesian(CartesianQN),
    /// `cyl:nr,lz,nz`; construction enforces the selection rule.
    Cylindrical(CylindricalQN, usize),
}

pub fn state(s: &str) -> Result<StateSpec> {
    let (kind, rest) = s.split_once(':').ok_or_else(|| bad("state", s))?;
    let fields: Vec<&str> = rest.split(',').collect();
    match (kind, fields.as_slice()) {
        ("z", [n]) => Ok(StateSpec::Axial(num("state", n)?)),
        ("cart", [x, y, z]) => Ok(StateSpec::Cartesian(CartesianQN::new(num("state", x)?, num("state", y)?, num("state", z)?))),
        ("cyl", [nr, lz, nz]) => {
            let qn = CylindricalQN::new(num("state", nr)?, num("state", lz)?)?;
            Ok(StateSpec::Cylindrical(qn, num("state", nz)?))
        }
        _ => Err(bad("state", s)),
    }
}
