//! First-order interaction of a single electron wavepacket with one quantized
//! light mode: state construction, scattering amplitudes, observables and the
//! matching closed-form references.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod exec;
pub mod math;
pub mod oracles;
pub mod params;
pub mod runner;
pub mod scattering;
pub mod states;
pub mod table;
pub mod verify;

pub use error::{QewError, Result};
pub use exec::Execution;
