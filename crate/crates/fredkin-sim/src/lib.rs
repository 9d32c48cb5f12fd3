//! Simulation and verification toolkit for low-cost Fredkin (controlled-swap)
//! gates built from auxiliary qudit levels and partial-swap operations, together
//! with their linear-optical realization.
//!
//! The crate has four layers:
//!
//! * [`qudit`] — mixed-radix state vectors, embedded gate application, circuit
//!   unitaries, and subspace projection. Everything else is built on this.
//! * [`synthesis`] — constructors for the partial-swap, level-exchange and
//!   qubit-level CNOT gates, the three-qubit and n-controlled Fredkin circuit
//!   builders, truth-table reference oracles, and end-to-end verification with
//!   gate counting.
//! * [`optics`] — a polarization/spatial-mode channel model of the post-selected
//!   partial-swap interferometer and the chained three-photon Fredkin gate:
//!   transfer matrices for wave plates and polarizing beam splitters, photon
//!   amplitude tensors, coincidence post-selection, feedforward corrections,
//!   success probabilities, and a closed-form resource calculator.
//! * [`fock`] — an independent second-quantized oracle that recomputes
//!   multi-photon coincidence amplitudes from matrix permanents and certifies
//!   the distinguishable-photon model.
//!
//! [`report`] wraps the above in machine-readable report documents consumed by
//! the `fredkin-sim` command-line tool; see the `examples/` directory for
//! runnable entry points into each capability.

pub mod fock;
pub mod optics;
pub mod qudit;
pub mod report;
pub mod synthesis;

pub use qudit::{Circuit, GateKind, GateOp, MixedRadixState, UnitaryMatrix, WireSystem};
