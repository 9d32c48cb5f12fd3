//! Linear-optical model of the post-selected partial-swap gate and the
//! chained three-photon controlled-swap built from it.
//!
//! Photons are distinguishable, labeled subsystems: a joint state is a
//! complex tensor with one channel index per photon, and a compiled
//! interferometer matrix acts on every index independently. Bunching terms
//! (two photons in one channel) stay in the tensor and are excluded by
//! coincidence post-selection; the `fock` module certifies that this model
//! agrees with the bosonic permanent calculation on every accepted pattern.

mod chain;
mod channel;
mod element;
mod netlist;
mod outcome;
mod photon;
mod resources;
mod spec;

pub use chain::{build_fredkin_interferometer, ChainPlan, StageBranch};
pub use channel::{Channel, ChannelBasis, Pol};
pub use element::{hwp_matrix, OpticalElement, PbsCrossing};
pub use netlist::{load_netlist, netlist_document, NetlistDoc};
pub use outcome::{
    apply_feedforward, enumerate_outcomes, gate_fidelity, ideal_logical_matrix, table_one,
    FidelityReport, PostSelectionOutcome, TableOne, TableOneCell,
};
pub use photon::{propagate, PhotonState};
pub use resources::{resource_calculator, DyadicFraction, ResourceEstimate};
pub use spec::{build_pswap_interferometer, DetectionArm, GateName, InterferometerSpec, SlotRole};

use thiserror::Error;

use crate::qudit::QuditError;

#[derive(Debug, Error)]
pub enum OpticsError {
    #[error("unknown channel {0}")]
    UnknownChannel(String),
    #[error("duplicate channel {0}")]
    DuplicateChannel(String),
    #[error("duplicate port {0} in element {1}")]
    DuplicatePort(String, String),
    #[error("channel mismatch: {0}")]
    ChannelMismatch(String),
    #[error("detection arms overlap on mode {0}")]
    OverlappingArms(String),
    #[error("correction element cannot be applied to an amplitude block: {0}")]
    UnsupportedCorrection(String),
    #[error("invalid logical input: {0}")]
    InvalidInput(String),
    #[error("compiled interferometer failed the unitarity check (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("netlist error: {0}")]
    Netlist(String),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}
