//! Exact time-dependent quantum states of the three-dimensional Paul trap.
//!
//! The library builds the classical mode functions of the trap drive,
//! evaluates the Cartesian and cylindrical number states they generate,
//! classifies drive stability by monodromy, and checks every state and
//! operator relation numerically on grids.
//!
//! All numeric code is generic over [`Real`] (`f32`/`f64`); the aliases at
//! the crate root fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cartesian;
pub mod cylindrical;
pub mod error;
pub mod io;
pub mod mode;
pub mod scalar;
pub mod special;
pub mod trap;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type Complex64 = Cx<f64>;
pub type TrapConfig64 = trap::TrapConfig<f64>;
pub type MathieuParams64 = trap::MathieuParams<f64>;
pub type ModeSolution64 = mode::ModeSolution<f64>;
pub type ModePoint64 = mode::ModePoint<f64>;
pub type ModeOptions64 = mode::ModeOptions<f64>;
pub type FloquetResult64 = mode::FloquetResult<f64>;
pub type StabilityChart64 = mode::StabilityChart<f64>;
pub type Sweep64 = mode::Sweep<f64>;
pub type TrapModes64 = cartesian::TrapModes<f64>;
pub type GridSpec64 = verify::GridSpec<f64>;
