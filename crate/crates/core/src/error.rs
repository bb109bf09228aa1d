use thiserror::Error;

/// Errors raised by the library.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("initial conditions have Wronskian {re}{im:+}i, expected -i")]
    WronskianPrecondition { re: f64, im: f64 },

    #[error("Wronskian drift {drift:e} at t = {t} exceeds tolerance {tol:e}")]
    WronskianDrift { t: f64, drift: f64, tol: f64 },

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("phase advance {advance} rad between samples at t = {t} is too large; increase the sample count")]
    PhaseAliasing { t: f64, advance: f64 },

    #[error("t = {t} is outside the solution span [{start}, {end}]")]
    OutOfSpan { t: f64, start: f64, end: f64 },

    #[error("selection rule: n_r and l_z parity (n_r = {n_r}, l_z = {l_z})")]
    SelectionRule { n_r: usize, l_z: i64 },

    #[error("order {n} exceeds the overflow-safe bound {max}")]
    OrderTooLarge { n: usize, max: usize },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid does not cover the state: boundary mass {mass:e} exceeds {limit:e}")]
    Coverage { mass: f64, limit: f64 },

    #[error("negative radius {0}")]
    NegativeRadius(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerical integration itself (drift, blow-up).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::WronskianDrift { .. } | Error::Integration { .. } | Error::PhaseAliasing { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
