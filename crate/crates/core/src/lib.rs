//! Quantum Fourier-space arithmetic for modular exponentiation.

pub mod angle;
pub mod blocks;
pub mod circuit;
pub mod classical;
pub mod decompose;
pub mod error;
pub mod gate;
pub mod resources;
pub mod sim;
pub mod verify;

pub use angle::{adder_angle, Angle};
pub use circuit::{Block, Circuit};
pub use error::{Error, Result};
pub use gate::{Gate, GateKind};
