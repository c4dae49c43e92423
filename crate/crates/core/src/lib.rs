//! Steering, entanglement and their trade-offs in three-qubit states.

pub mod bloch;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod qlinalg;
pub mod relations;
pub mod steering;

pub use error::{Error, Result, Violation};
