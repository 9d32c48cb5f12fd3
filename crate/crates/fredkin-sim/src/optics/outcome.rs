//! Coincidence post-selection, feedforward corrections, expectation tables,
//! and gate-level fidelity checks.

use std::collections::BTreeMap;

use ndarray::{ArrayD, Dimension, IxDyn};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::channel::{Channel, Pol};
use super::element::{hwp_matrix, OpticalElement};
use super::photon::{propagate, PhotonState};
use super::spec::{GateName, InterferometerSpec, SlotRole};
use super::OpticsError;
use crate::qudit::UnitaryMatrix;
use crate::synthesis::{make_partial_swap, reference_fredkin};

/// One accepted coincidence pattern: which detector arm fires for each output
/// slot, the amplitude block over the arms' polarization levels, its
/// probability, and the conditional correction that turns the block into the
/// ideal gate output.
///
/// Output slots are named after the photon whose logical value exits there in
/// role-following notation; for computational control inputs the physical
/// photons trade sides, which is exactly how the swap is realized.
#[derive(Debug, Clone)]
pub struct PostSelectionOutcome {
    pub pattern: BTreeMap<String, String>,
    /// Arm label per slot, in slot order.
    pub slot_arms: Vec<String>,
    /// Channel per (slot, logical level) used to interpret the block.
    pub slot_channels: Vec<Vec<Channel>>,
    pub amplitude_block: ArrayD<Complex64>,
    pub probability: f64,
    pub correction: Vec<OpticalElement>,
    pub corrected_block: ArrayD<Complex64>,
    /// Per-stage branch history for chained gates.
    pub branch: Option<String>,
}

impl PostSelectionOutcome {
    pub fn block_vector(&self) -> Vec<Complex64> {
        self.corrected_block.iter().copied().collect()
    }
}

/// Applies a correction element list to an amplitude block. Corrections are
/// diagonal in the (mode, polarization) channels the block is expressed in
/// (a pi phase on one arm, or a zero-degree plate negating V), so they act as
/// per-level scalars.
pub fn apply_feedforward(
    block: &ArrayD<Complex64>,
    slot_channels: &[Vec<Channel>],
    correction: &[OpticalElement],
) -> Result<ArrayD<Complex64>, OpticsError> {
    let mut factors: Vec<Vec<Complex64>> = slot_channels
        .iter()
        .map(|chs| vec![Complex64::new(1.0, 0.0); chs.len()])
        .collect();
    for element in correction {
        match element {
            OpticalElement::Phase { port, phi, .. } => {
                let f = Complex64::from_polar(1.0, *phi);
                for (slot, chs) in slot_channels.iter().enumerate() {
                    for (level, ch) in chs.iter().enumerate() {
                        if &ch.mode == port {
                            factors[slot][level] *= f;
                        }
                    }
                }
            }
            OpticalElement::Hwp {
                ports, theta_deg, ..
            } => {
                let m = hwp_matrix(*theta_deg);
                if m[0][1].abs() > 1e-12 {
                    return Err(OpticsError::UnsupportedCorrection(format!(
                        "wave plate at {theta_deg} degrees mixes polarizations"
                    )));
                }
                for (slot, chs) in slot_channels.iter().enumerate() {
                    for (level, ch) in chs.iter().enumerate() {
                        if ports.contains(&ch.mode) {
                            let f = match ch.pol {
                                Pol::H => m[0][0],
                                Pol::V => m[1][1],
                            };
                            factors[slot][level] *= Complex64::new(f, 0.0);
                        }
                    }
                }
            }
            OpticalElement::Pbs { label, .. } => {
                return Err(OpticsError::UnsupportedCorrection(label.clone()));
            }
        }
    }
    let mut corrected = block.clone();
    for (idx, value) in corrected.indexed_iter_mut() {
        for (slot, &level) in idx.as_array_view().iter().enumerate() {
            *value *= factors[slot][level];
        }
    }
    Ok(corrected)
}

fn pswap_correction(carrier_arm: &str, target_arm: &str) -> Vec<OpticalElement> {
    match (carrier_arm, target_arm) {
        ("9", "12") => vec![OpticalElement::phase("Ppi_9", "9", std::f64::consts::PI)],
        ("10", "11") => vec![OpticalElement::phase("Ppi_10", "10", std::f64::consts::PI)],
        _ => Vec::new(),
    }
}

/// Extracts the accepted coincidence outcomes of the partial-swap
/// interferometer from a propagated two-photon tensor: one photon in a
/// carrier-side arm (9 or 10, primes included) and one in a target arm
/// (11 or 12). Each block cell sums coherently over the photon-to-channel
/// assignments that reach it; for this layout exactly one assignment is ever
/// nonzero, which the bosonic oracle certifies.
fn pswap_outcomes(
    propagated: &PhotonState,
    spec: &InterferometerSpec,
    feedforward: bool,
) -> Result<Vec<PostSelectionOutcome>, OpticsError> {
    let carrier_arms: Vec<_> = spec
        .arms
        .iter()
        .filter(|a| a.role == SlotRole::CarrierSide)
        .collect();
    let target_arms: Vec<_> = spec
        .arms
        .iter()
        .filter(|a| a.role == SlotRole::TargetSide)
        .collect();
    let tensor = propagated.tensor();
    let mut outcomes = Vec::new();
    for ca in &carrier_arms {
        for ta in &target_arms {
            let correction = pswap_correction(&ca.label, &ta.label);
            if !feedforward && !correction.is_empty() {
                continue;
            }
            let shape = [ca.level_channels.len(), ta.level_channels.len()];
            let mut block = ArrayD::zeros(IxDyn(&shape));
            for (lc, cch) in ca.level_channels.iter().enumerate() {
                let ic = spec.basis.index_of(cch)?;
                for (lt, tch) in ta.level_channels.iter().enumerate() {
                    let it = spec.basis.index_of(tch)?;
                    // photon 0 on the carrier channel plus photon 1 there
                    block[IxDyn(&[lc, lt])] =
                        tensor[IxDyn(&[ic, it])] + tensor[IxDyn(&[it, ic])];
                }
            }
            let probability = block.iter().map(|a| a.norm_sqr()).sum();
            let slot_channels = vec![ca.level_channels.clone(), ta.level_channels.clone()];
            let corrected_block = apply_feedforward(&block, &slot_channels, &correction)?;
            let mut pattern = BTreeMap::new();
            pattern.insert("c".to_string(), ca.label.clone());
            pattern.insert("t".to_string(), ta.label.clone());
            outcomes.push(PostSelectionOutcome {
                pattern,
                slot_arms: vec![ca.label.clone(), ta.label.clone()],
                slot_channels,
                amplitude_block: block,
                probability,
                correction,
                corrected_block,
                branch: None,
            });
        }
    }
    Ok(outcomes)
}

/// Enumerates the accepted coincidence outcomes for an input state. The
/// single-stage partial swap propagates the two-photon tensor through the
/// compiled matrix; the chained three-photon gate composes its per-stage
/// post-selected transfer blocks, each stage operated in its own coincidence
/// basis.
pub fn enumerate_outcomes(
    input: &PhotonState,
    spec: &InterferometerSpec,
    feedforward: bool,
) -> Result<Vec<PostSelectionOutcome>, OpticsError> {
    match (&spec.chain, spec.gate) {
        (Some(plan), _) => super::chain::enumerate_chain(input, spec, plan, feedforward),
        (None, GateName::Pswap) => {
            let propagated = propagate(input, spec)?;
            pswap_outcomes(&propagated, spec, feedforward)
        }
        (None, GateName::Fredkin3) => Err(OpticsError::InvalidInput(
            "chained gate requires a chain plan".into(),
        )),
    }
}

/// The ideal logical matrix an interferometer realizes after post-selection
/// and correction.
pub fn ideal_logical_matrix(gate: GateName) -> UnitaryMatrix {
    match gate {
        GateName::Pswap => make_partial_swap(3, 0, 1)
            .expect("carrier dimension 3 is valid")
            .matrix()
            .clone(),
        GateName::Fredkin3 => reference_fredkin(),
    }
}

/// One cell of the coincidence expectation table: probability and amplitude
/// sign for each of the four accepted pattern families.
#[derive(Debug, Clone, Serialize)]
pub struct TableOneCell {
    pub probabilities: [f64; 4],
    pub signs: [i8; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct TableOneRow {
    pub input: String,
    pub cells: Vec<TableOneCell>,
    pub total_accepted_probability: f64,
}

/// Coincidence expectation table for the six logical basis inputs of the
/// partial swap. Columns are detector channel pairs (written for the (9,11)
/// family; the other families substitute their arms), and the sign is the
/// sign of the post-selected amplitude, not of the probability.
#[derive(Debug, Clone, Serialize)]
pub struct TableOne {
    pub columns: Vec<String>,
    pub families: Vec<(String, String)>,
    pub rows: Vec<TableOneRow>,
}

/// Basis inputs in table order: (carrier level, target level) with level 2
/// the auxiliary u-rail component.
const TABLE_INPUTS: [(usize, usize, &str); 6] = [
    (2, 0, "|Hu>|H>"),
    (2, 1, "|Hu>|V>"),
    (0, 0, "|Hd>|H>"),
    (0, 1, "|Hd>|V>"),
    (1, 0, "|Vd>|H>"),
    (1, 1, "|Vd>|V>"),
];

/// Output channel-pair columns: (carrier-slot level, target-slot level).
const TABLE_COLUMNS: [(usize, usize, &str); 6] = [
    (2, 0, "nH9p.nH11"),
    (2, 1, "nH9p.nV11"),
    (0, 0, "nH9.nH11"),
    (1, 0, "nV9.nH11"),
    (0, 1, "nH9.nV11"),
    (1, 1, "nV9.nV11"),
];

const TABLE_FAMILIES: [(&str, &str); 4] = [("9", "11"), ("10", "12"), ("9", "12"), ("10", "11")];

pub fn table_one(spec: &InterferometerSpec) -> Result<TableOne, OpticsError> {
    if spec.gate != GateName::Pswap {
        return Err(OpticsError::InvalidInput(
            "the expectation table is defined for the partial swap".into(),
        ));
    }
    let mut rows = Vec::new();
    for &(lc, lt, label) in &TABLE_INPUTS {
        let input = PhotonState::from_levels(spec, &[lc, lt])?;
        let outcomes = enumerate_outcomes(&input, spec, true)?;
        let total = outcomes.iter().map(|o| o.probability).sum();
        let mut cells = Vec::new();
        for &(oc, ot, _) in &TABLE_COLUMNS {
            let mut probabilities = [0.0; 4];
            let mut signs = [0i8; 4];
            for (f, &(ca, ta)) in TABLE_FAMILIES.iter().enumerate() {
                let outcome = outcomes
                    .iter()
                    .find(|o| o.slot_arms == [ca, ta])
                    .expect("all four pattern families are enumerated");
                let amp = outcome.amplitude_block[IxDyn(&[oc, ot])];
                probabilities[f] = amp.norm_sqr();
                signs[f] = if amp.re > 1e-12 {
                    1
                } else if amp.re < -1e-12 {
                    -1
                } else {
                    0
                };
            }
            cells.push(TableOneCell {
                probabilities,
                signs,
            });
        }
        rows.push(TableOneRow {
            input: label.to_string(),
            cells,
            total_accepted_probability: total,
        });
    }
    Ok(TableOne {
        columns: TABLE_COLUMNS.iter().map(|c| c.2.to_string()).collect(),
        families: TABLE_FAMILIES
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        rows,
    })
}

/// Fidelity and success-probability statistics over random logical inputs.
#[derive(Debug, Clone, Serialize)]
pub struct FidelityReport {
    pub gate: String,
    pub trials: usize,
    pub seed: u64,
    pub feedforward: bool,
    pub outcome_count: usize,
    pub min_fidelity: f64,
    pub success_mean: f64,
    pub success_std: f64,
}

pub fn random_logical_input(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in v.iter_mut() {
        *a /= norm;
    }
    v
}

/// Runs seeded random logical inputs through the interferometer and reports
/// the minimum corrected-outcome fidelity against the ideal gate along with
/// the mean and standard deviation of the total accepted probability.
pub fn gate_fidelity(
    spec: &InterferometerSpec,
    trials: usize,
    seed: u64,
    feedforward: bool,
) -> Result<FidelityReport, OpticsError> {
    let ideal = ideal_logical_matrix(spec.gate);
    let dim = spec.logical_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_fidelity = f64::INFINITY;
    let mut totals = Vec::with_capacity(trials);
    let mut outcome_count = 0;
    for _ in 0..trials {
        let alpha = random_logical_input(dim, &mut rng);
        let input = PhotonState::from_logical(spec, &alpha)?;
        let outcomes = enumerate_outcomes(&input, spec, feedforward)?;
        outcome_count = outcomes.len();
        totals.push(outcomes.iter().map(|o| o.probability).sum::<f64>());
        let mut expected = vec![Complex64::new(0.0, 0.0); dim];
        for (i, e) in expected.iter_mut().enumerate() {
            for (j, &a) in alpha.iter().enumerate() {
                *e += ideal.entries()[[i, j]] * a;
            }
        }
        for outcome in &outcomes {
            let v = outcome.block_vector();
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let overlap: Complex64 = expected
                .iter()
                .zip(v.iter())
                .map(|(e, b)| e.conj() * b / norm)
                .sum();
            min_fidelity = min_fidelity.min(overlap.norm_sqr());
        }
    }
    let mean = totals.iter().sum::<f64>() / trials as f64;
    let var = totals.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / trials as f64;
    Ok(FidelityReport {
        gate: spec.gate.as_str().to_string(),
        trials,
        seed,
        feedforward,
        outcome_count,
        min_fidelity,
        success_mean: mean,
        success_std: var.sqrt(),
    })
}
