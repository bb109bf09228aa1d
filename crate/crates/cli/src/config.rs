//! Run configuration files.

use std::path::{Path, PathBuf};

use paultrap::{Cx, Error, Result, TrapConfig64};
use serde::Deserialize;
use serde_json::Value;

/// Initial `(ξ, ξ̇)` of one mode as `[re, im]` pairs.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeIc {
    pub xi: [f64; 2],
    pub xi_dot: [f64; 2],
}

impl ModeIc {
    pub fn pair(&self) -> (Cx<f64>, Cx<f64>) {
        (Cx::new(self.xi[0], self.xi[1]), Cx::new(self.xi_dot[0], self.xi_dot[1]))
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcOverrides {
    pub radial: Option<ModeIc>,
    pub axial: Option<ModeIc>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub wronskian: Option<f64>,
    pub residual: Option<f64>,
    pub ladder: Option<f64>,
    pub eigen: Option<f64>,
    pub norm: Option<f64>,
    pub identity: Option<f64>,
}

/// Contents of a `--config` file. A bare trap object is accepted as
/// shorthand for `{"trap": ...}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub trap: TrapConfig64,
    #[serde(default)]
    pub ic: IcOverrides,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
    pub grid: Option<String>,
    pub times: Option<String>,
    pub state: Option<String>,
    pub suite: Option<String>,
    pub sweep: Option<String>,
    pub sweep_kind: Option<String>,
}

impl RunConfig {
    fn bare(trap: TrapConfig64) -> Self {
        Self {
            trap,
            ic: IcOverrides::default(),
            tolerances: Tolerances::default(),
            out: None,
            t_start: None,
            t_end: None,
            samples: None,
            grid: None,
            times: None,
            state: None,
            suite: None,
            sweep: None,
            sweep_kind: None,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::Config(e.to_string());
        let value: Value = serde_json::from_str(s).map_err(bad)?;
        let wrapped = value.as_object().is_some_and(|o| o.contains_key("trap"));
        let cfg = if wrapped {
            serde_json::from_value(value).map_err(bad)?
        } else {
            Self::bare(serde_json::from_value(value).map_err(bad)?)
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.trap.validate()?;
        let t = &self.tolerances;
        for (name, v) in [
            ("wronskian", t.wronskian),
            ("residual", t.residual),
            ("ladder", t.ladder),
            ("eigen", t.eigen),
            ("norm", t.norm),
            ("identity", t.identity),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Config(format!("tolerance {name} must be positive")));
                }
            }
        }
        if let Some(t) = self.t_start {
            if !t.is_finite() {
                return Err(Error::Config("t_start must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn t_start(&self) -> f64 {
        self.t_start.unwrap_or(0.0)
    }
}
