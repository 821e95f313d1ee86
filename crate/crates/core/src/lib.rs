//! Teleportation of single-qubit mixed states over two-qubit mixed channels.
//!
//! The crate builds the full density-matrix pipeline (input state, channel,
//! Bell measurement, Pauli correction), closed-form distortion references,
//! entanglement measures, and a randomized harness for block-matrix
//! inequalities.

pub mod blockprops;
pub mod channels;
pub mod cli;
pub mod density;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod metrics;
pub mod sweep;
pub mod teleport;
pub mod verify;

pub use channels::{build, Channel, ChannelSpec, Family};
pub use density::{DensityMatrix, QubitState, Subsystem, Validation};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use teleport::{run, BellOutcome, TeleportRun};
