//! Two-level quantum Otto cycle driven between a positive-temperature cold
//! bath and a population-inverted (negative-temperature) hot bath.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod otto;
pub mod propagator;
pub mod qspin;
pub mod verify;

pub use error::{Error, Result};
pub use otto::{evaluate, CyclePoint, CycleResult, Regime};
pub use propagator::{xi, Direction, RampProtocol};
pub use qspin::{ComplexMat2, DensityMatrix, ReservoirSpec};
