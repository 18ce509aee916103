//! Sparse construction and state-vector simulation of controlled unitary
//! gates (CUGs) over registers of mixed-level qudits.
//!
//! The central operation is [`cug::build_cug`]: the matrix of a gate with any
//! number of conditionals is assembled as identity + active − inactive, two
//! full-size matrix additions regardless of how many control wires are
//! involved. The sum-over-projector-assignments form is kept alongside as
//! [`cug::build_cug_naive`] for cross-checking and benchmarking.
//!
//! Modules:
//! - [`tensor`]: sparse complex matrices, Kronecker products, products, and
//!   unitarity checks.
//! - [`gates`]: the elementary gate registry (projectors, H, NOT, phase
//!   gates, QFT± coins, Grover coin, cyclic shifts, SWAP).
//! - [`cug`]: register profiles, gate specifications, and the two builders.
//! - [`circuit`]: embedding, wire permutations, step cascades, and circuit
//!   compilation/application.
//! - [`state`]: state vectors, amplitude listings, and measurement.

pub mod circuit;
pub mod cug;
pub mod error;
pub mod gates;
pub mod state;
pub mod tensor;

pub use circuit::{Circuit, PlacedElement, RotationDirection, StepDirection};
pub use cug::{Conditional, CugSpec, RegisterProfile, UBlock};
pub use error::{Error, Result};
pub use gates::{GateName, GateSpec, Sign};
pub use state::{MeasurementOutcome, StateVector};
pub use num_complex::Complex64;
pub use tensor::{DenseVector, SparseMatrix};
