//! The chained three-photon controlled-swap: an encoding PBS on the control
//! photon, three partial-swap stages on (c,t2), (c,t1), (c,t2), and a merge
//! PBS folding the carrier arms back onto a single polarization qubit.
//!
//! Stage outputs feed the next stage by arm relabeling: a stage's carrier
//! arms 9'/9 (or 10'/10) become the next stage's u/d rails, and the selected
//! target arm of the first stage becomes the third stage's target input.
//! Each stage is operated in its own coincidence basis: the two
//! correction-free branches of the intermediate stages and all four branches
//! of the final stage are accepted, which is where the overall success
//! probability 1/4 * 1/4 * 1/2 = 1/32 comes from. Outcome amplitudes are
//! composed from per-branch transfer blocks measured on the compiled
//! partial-swap matrix itself; with sixteen accepted branch histories each
//! basis input lands in a pattern with amplitude 1/(16*sqrt(2)).

use std::collections::BTreeMap;

use ndarray::{Array2, ArrayD, IxDyn};
use num_complex::Complex64;

use super::channel::{Channel, ChannelBasis};
use super::element::{OpticalElement, PbsCrossing};
use super::outcome::PostSelectionOutcome;
use super::photon::PhotonState;
use super::spec::{
    compile_elements, live_basis, pswap_arms, pswap_elements, pswap_input_slots, DetectionArm,
    GateName, InterferometerSpec, SlotRole,
};
use super::OpticsError;
use crate::qudit::{GateKind, GateOp, MixedRadixState, UnitaryMatrix, WireSystem};

/// One accepted branch of a partial-swap stage: which carrier-side arm and
/// which target arm fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageBranch {
    NineEleven,
    TenTwelve,
    NineTwelve,
    TenEleven,
}

impl StageBranch {
    pub const ALL: [StageBranch; 4] = [
        StageBranch::NineEleven,
        StageBranch::TenTwelve,
        StageBranch::NineTwelve,
        StageBranch::TenEleven,
    ];

    /// Branches that need no correction; the only ones an intermediate stage
    /// can contribute.
    pub const PLUS: [StageBranch; 2] = [StageBranch::NineEleven, StageBranch::TenTwelve];

    pub fn carrier_arm(&self) -> &'static str {
        match self {
            StageBranch::NineEleven | StageBranch::NineTwelve => "9",
            StageBranch::TenTwelve | StageBranch::TenEleven => "10",
        }
    }

    pub fn target_arm(&self) -> &'static str {
        match self {
            StageBranch::NineEleven | StageBranch::TenEleven => "11",
            StageBranch::TenTwelve | StageBranch::NineTwelve => "12",
        }
    }

    pub fn needs_correction(&self) -> bool {
        matches!(self, StageBranch::NineTwelve | StageBranch::TenEleven)
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.carrier_arm(), self.target_arm())
    }

    fn index(&self) -> usize {
        StageBranch::ALL.iter().position(|b| b == self).unwrap()
    }
}

/// Wiring plan of the chained gate: which logical slots each stage couples
/// and the measured per-branch transfer blocks of one stage.
#[derive(Debug, Clone)]
pub struct ChainPlan {
    /// (carrier wire, target wire) per stage on the (c, t1, t2) register.
    pub stage_wires: [(usize, usize); 3],
    pub stage_prefixes: [String; 3],
    /// Per-branch logical transfer, rescaled to a unitary.
    branch_unitaries: [UnitaryMatrix; 4],
    /// Amplitude carried by each branch: 1/(2*sqrt(2)).
    pub branch_amplitude: f64,
}

impl ChainPlan {
    pub fn branch_unitary(&self, b: StageBranch) -> &UnitaryMatrix {
        &self.branch_unitaries[b.index()]
    }
}

/// Measures the four post-selected branch blocks of a compiled partial-swap
/// spec and rescales them to unitaries. The scale 1/(2*sqrt(2)) is recovered
/// from the blocks themselves rather than assumed.
pub(crate) fn extract_branch_unitaries(
    stage: &InterferometerSpec,
) -> Result<([UnitaryMatrix; 4], f64), OpticsError> {
    let dim = stage.logical_dim();
    let mut raw: Vec<Array2<Complex64>> = (0..4).map(|_| Array2::zeros((dim, dim))).collect();
    for k in 0..dim {
        let mut alpha = vec![Complex64::new(0.0, 0.0); dim];
        alpha[k] = Complex64::new(1.0, 0.0);
        let input = PhotonState::from_logical(stage, &alpha)?;
        let outcomes = super::outcome::enumerate_outcomes(&input, stage, true)?;
        for (bi, branch) in StageBranch::ALL.iter().enumerate() {
            let outcome = outcomes
                .iter()
                .find(|o| {
                    o.slot_arms == [branch.carrier_arm().to_string(), branch.target_arm().to_string()]
                })
                .ok_or_else(|| {
                    OpticsError::InvalidInput(format!("missing branch {}", branch.label()))
                })?;
            for (i, a) in outcome.amplitude_block.iter().enumerate() {
                raw[bi][[i, k]] = *a;
            }
        }
    }
    // every nonzero branch entry has the same magnitude; that is the branch amplitude
    let amplitude = raw[0]
        .iter()
        .map(|a| a.norm())
        .fold(0.0f64, f64::max);
    if amplitude == 0.0 {
        return Err(OpticsError::InvalidInput(
            "stage produced an empty branch block".into(),
        ));
    }
    let mut unitaries = Vec::with_capacity(4);
    for block in raw {
        let u = UnitaryMatrix::new(block.mapv(|a| a / amplitude))?;
        let defect = u.unitarity_defect();
        if defect > 1e-10 {
            return Err(OpticsError::NotUnitary(defect));
        }
        unitaries.push(u);
    }
    let unitaries: [UnitaryMatrix; 4] = unitaries
        .try_into()
        .expect("exactly four branches were built");
    Ok((unitaries, amplitude))
}

/// Reads the logical input amplitudes back out of an un-propagated photon
/// state: the chained enumeration composes stage blocks itself.
fn logical_amplitudes(
    input: &PhotonState,
    spec: &InterferometerSpec,
) -> Result<Vec<Complex64>, OpticsError> {
    let dims = spec.logical_dims();
    let total: usize = dims.iter().product();
    let mut alpha = vec![Complex64::new(0.0, 0.0); total];
    let mut support = 0.0;
    for (k, a) in alpha.iter_mut().enumerate() {
        let mut rem = k;
        let mut idx = vec![0usize; dims.len()];
        for (slot, &d) in dims.iter().enumerate().rev() {
            let level = rem % d;
            rem /= d;
            idx[slot] = spec.basis.index_of(&spec.input_slots[slot].1[level])?;
        }
        *a = input.tensor()[IxDyn(&idx)];
        support += a.norm_sqr();
    }
    let norm_sqr = input.norm().powi(2);
    if (support - norm_sqr).abs() > 1e-9 {
        return Err(OpticsError::InvalidInput(
            "chained enumeration expects a state supported on the input channels".into(),
        ));
    }
    Ok(alpha)
}

/// Enumerates the sixteen accepted branch histories of the chained gate (or
/// the eight correction-free ones when feedforward is disabled) and composes
/// their amplitude blocks.
pub(crate) fn enumerate_chain(
    input: &PhotonState,
    spec: &InterferometerSpec,
    plan: &ChainPlan,
    feedforward: bool,
) -> Result<Vec<PostSelectionOutcome>, OpticsError> {
    let alpha = logical_amplitudes(input, spec)?;
    let register = WireSystem::new(&[3, 2, 2])?;

    // control encoding: logical |0> rides the auxiliary u rail (level 2),
    // logical |1> stays on the computational V rail (level 1)
    let mut embedded = MixedRadixState::zero(register.clone());
    for (k, &a) in alpha.iter().enumerate() {
        let (c, t1, t2) = (k >> 2, (k >> 1) & 1, k & 1);
        let carrier = if c == 0 { 2 } else { 1 };
        let idx = register.digits_to_index(&[carrier, t1, t2])?;
        embedded.amplitudes_mut()[idx] = a;
    }

    let final_branches: &[StageBranch] = if feedforward {
        &StageBranch::ALL
    } else {
        &StageBranch::PLUS
    };
    let scale = plan.branch_amplitude.powi(3);

    let mut outcomes = Vec::new();
    for &b1 in &StageBranch::PLUS {
        for &b2 in &StageBranch::PLUS {
            // state after the two intermediate stages is branch-dependent
            let mut mid = embedded.clone();
            for &(stage, b) in [(0usize, b1), (1, b2)].iter() {
                let (cw, tw) = plan.stage_wires[stage];
                let gate = GateOp::new(
                    vec![cw, tw],
                    vec![3, 2],
                    plan.branch_unitary(b).clone(),
                    GateKind::Other,
                )?;
                mid = crate::qudit::apply_gate(&mid, &gate)?;
            }
            for &b3 in final_branches {
                let (cw, tw) = plan.stage_wires[2];
                let gate = GateOp::new(
                    vec![cw, tw],
                    vec![3, 2],
                    plan.branch_unitary(b3).clone(),
                    GateKind::Other,
                )?;
                let fin = crate::qudit::apply_gate(&mid, &gate)?;

                // decode: the merge PBS folds carrier level 2 onto H and
                // level 1 onto V of the final control rail; level 0 holds no
                // accepted amplitude
                let c_arm = if b3.carrier_arm() == "9" { "11" } else { "12" };
                let t1_arm = b2.target_arm();
                let t2_arm = b3.target_arm();
                let mut block = ArrayD::zeros(IxDyn(&[2, 2, 2]));
                for c in 0..2 {
                    let carrier = if c == 0 { 2 } else { 1 };
                    for t1 in 0..2 {
                        for t2 in 0..2 {
                            let idx = register.digits_to_index(&[carrier, t1, t2])?;
                            block[IxDyn(&[c, t1, t2])] =
                                scale * fin.amplitudes()[idx];
                        }
                    }
                }
                let probability = block.iter().map(|a| a.norm_sqr()).sum();

                // distinct physical rails: the merged control arm and the
                // per-stage target arms, even where the printed labels agree
                let c_mode = format!("c{c_arm}");
                let t1_mode = format!("{}{}", plan.stage_prefixes[1], t1_arm);
                let t2_mode = format!("{}{}", plan.stage_prefixes[2], t2_arm);
                let slot_channels = vec![
                    vec![Channel::h(c_mode.clone()), Channel::v(c_mode.clone())],
                    vec![Channel::h(t1_mode.clone()), Channel::v(t1_mode)],
                    vec![Channel::h(t2_mode.clone()), Channel::v(t2_mode)],
                ];
                let correction = if b3.needs_correction() {
                    vec![OpticalElement::hwp("HWP0_c", &[c_mode.as_str()], 0.0)]
                } else {
                    Vec::new()
                };
                let corrected_block =
                    super::outcome::apply_feedforward(&block, &slot_channels, &correction)?;
                let mut pattern = BTreeMap::new();
                pattern.insert("c".to_string(), c_arm.to_string());
                pattern.insert("t1".to_string(), t1_arm.to_string());
                pattern.insert("t2".to_string(), t2_arm.to_string());
                outcomes.push(PostSelectionOutcome {
                    pattern,
                    slot_arms: vec![
                        c_arm.to_string(),
                        t1_arm.to_string(),
                        t2_arm.to_string(),
                    ],
                    slot_channels,
                    amplitude_block: block,
                    probability,
                    correction,
                    corrected_block,
                    branch: Some(format!(
                        "s1={} s2={} s3={}",
                        b1.label(),
                        b2.label(),
                        b3.label()
                    )),
                });
            }
        }
    }
    Ok(outcomes)
}

fn swap_rows(u: &mut Array2<Complex64>, i: usize, j: usize) {
    for col in 0..u.ncols() {
        let tmp = u[[i, col]];
        u[[i, col]] = u[[j, col]];
        u[[j, col]] = tmp;
    }
}

/// Left-multiplies a stage unitary embedded on a contiguous channel block.
fn embed_block(u: &mut Array2<Complex64>, offset: usize, stage: &Array2<Complex64>) {
    let n = stage.nrows();
    let cols = u.ncols();
    let mut buffer = Array2::zeros((n, cols));
    for i in 0..n {
        for col in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let c = stage[[i, j]];
                if c != Complex64::new(0.0, 0.0) {
                    acc += c * u[[offset + j, col]];
                }
            }
            buffer[[i, col]] = acc;
        }
    }
    for i in 0..n {
        for col in 0..cols {
            u[[offset + i, col]] = buffer[[i, col]];
        }
    }
}

pub(crate) struct FredkinParts {
    pub encode: OpticalElement,
    pub stage_elements: [Vec<OpticalElement>; 3],
    pub stage_prefixes: [String; 3],
    pub merge: OpticalElement,
}

pub(crate) fn default_fredkin_parts() -> FredkinParts {
    let prefixes = ["s1:".to_string(), "s2:".to_string(), "s3:".to_string()];
    FredkinParts {
        encode: OpticalElement::Pbs {
            label: "encode".into(),
            crossings: vec![PbsCrossing::split("c0", "s1:u", "s1:d")],
        },
        stage_elements: [
            pswap_elements(&prefixes[0]),
            pswap_elements(&prefixes[1]),
            pswap_elements(&prefixes[2]),
        ],
        stage_prefixes: prefixes,
        merge: OpticalElement::Pbs {
            label: "merge".into(),
            crossings: vec![
                PbsCrossing::mix("s3:9p", "s3:9", "c11", "x9"),
                PbsCrossing::mix("s3:10p", "s3:10", "c12", "x10"),
            ],
        },
    }
}

/// Assembles the chained spec from its parts: compiles each stage, measures
/// the branch blocks on the first stage, and builds one end-to-end channel
/// unitary for the representative correction-free routing (the non-selected
/// arms of that routing keep their stage channels, i.e. run straight to
/// detectors).
pub(crate) fn build_fredkin_from_parts(
    parts: FredkinParts,
) -> Result<InterferometerSpec, OpticsError> {
    let FredkinParts {
        encode,
        stage_elements,
        stage_prefixes,
        merge,
    } = parts;

    let mut stage_bases = Vec::new();
    let mut stage_compiled = Vec::new();
    for (prefix, elements) in stage_prefixes.iter().zip(stage_elements.iter()) {
        let slots = pswap_input_slots(prefix);
        let seeds: Vec<Channel> = vec![
            slots[0].1[2].clone(),
            slots[0].1[0].clone(),
            slots[0].1[1].clone(),
            slots[1].1[0].clone(),
            slots[1].1[1].clone(),
        ];
        let basis = live_basis(&seeds, elements)?;
        let compiled = compile_elements(&basis, elements)?;
        stage_bases.push(basis);
        stage_compiled.push(compiled);
    }

    let stage_one = InterferometerSpec {
        gate: GateName::Pswap,
        basis: stage_bases[0].clone(),
        elements: stage_elements[0].clone(),
        compiled: stage_compiled[0].clone(),
        photon_labels: vec!["c".into(), "t".into()],
        input_slots: pswap_input_slots(&stage_prefixes[0]),
        arms: pswap_arms(&stage_prefixes[0]),
        chain: None,
    };
    let (branch_unitaries, branch_amplitude) = extract_branch_unitaries(&stage_one)?;

    // union basis: control input, the three stage blocks, the relay rail
    // between stage 1's selected target arm and stage 3's target input, the
    // merged control outputs, and the merge's reject arms
    let mut channels = vec![Channel::h("c0"), Channel::v("c0")];
    let mut offsets = Vec::new();
    for basis in &stage_bases {
        offsets.push(channels.len());
        channels.extend(basis.channels().iter().cloned());
    }
    channels.push(Channel::h("relay"));
    channels.push(Channel::v("relay"));
    channels.push(Channel::h("c11"));
    channels.push(Channel::v("c11"));
    channels.push(Channel::h("c12"));
    channels.push(Channel::v("c12"));
    channels.push(Channel::h("x9"));
    channels.push(Channel::h("x10"));
    channels.push(Channel::v("x10"));
    let basis = ChannelBasis::new(channels)?;

    let n = basis.len();
    let mut compiled = Array2::eye(n);
    encode.apply_left(&basis, &mut compiled)?;
    let idx = |m: &str, pol| basis.index_of(&Channel::new(m, pol));
    let p = |k: usize, m: &str| format!("{}{}", stage_prefixes[k], m);
    use super::channel::Pol::{H, V};

    embed_block(&mut compiled, offsets[0], &stage_compiled[0]);
    // stage 1 -> stage 2 carrier relabel, stage 1 target arm 11 -> relay
    for (from, to) in [
        ((p(0, "9p"), H), (p(1, "u"), H)),
        ((p(0, "9"), H), (p(1, "d"), H)),
        ((p(0, "9"), V), (p(1, "d"), V)),
        ((p(0, "11"), H), ("relay".to_string(), H)),
        ((p(0, "11"), V), ("relay".to_string(), V)),
    ] {
        swap_rows(&mut compiled, idx(&from.0, from.1)?, idx(&to.0, to.1)?);
    }
    embed_block(&mut compiled, offsets[1], &stage_compiled[1]);
    for (from, to) in [
        ((p(1, "9p"), H), (p(2, "u"), H)),
        ((p(1, "9"), H), (p(2, "d"), H)),
        ((p(1, "9"), V), (p(2, "d"), V)),
        (("relay".to_string(), H), (p(2, "t"), H)),
        (("relay".to_string(), V), (p(2, "t"), V)),
    ] {
        swap_rows(&mut compiled, idx(&from.0, from.1)?, idx(&to.0, to.1)?);
    }
    embed_block(&mut compiled, offsets[2], &stage_compiled[2]);
    merge.apply_left(&basis, &mut compiled)?;

    let defect = UnitaryMatrix::new(compiled.clone())?.unitarity_defect();
    if defect > 1e-10 {
        return Err(OpticsError::NotUnitary(defect));
    }

    let mut elements = vec![encode];
    for stage in &stage_elements {
        elements.extend(stage.iter().cloned());
    }
    elements.push(merge);

    let input_slots = vec![
        (
            "c".to_string(),
            vec![Channel::h("c0"), Channel::v("c0")],
        ),
        (
            "t1".to_string(),
            vec![Channel::h(p(1, "t")), Channel::v(p(1, "t"))],
        ),
        (
            "t2".to_string(),
            vec![Channel::h(p(0, "t")), Channel::v(p(0, "t"))],
        ),
    ];
    let arms = vec![
        DetectionArm {
            label: "c:11".into(),
            role: SlotRole::CarrierSide,
            level_channels: vec![Channel::h("c11"), Channel::v("c11")],
        },
        DetectionArm {
            label: "c:12".into(),
            role: SlotRole::CarrierSide,
            level_channels: vec![Channel::h("c12"), Channel::v("c12")],
        },
        DetectionArm {
            label: "t1:11".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p(1, "11")), Channel::v(p(1, "11"))],
        },
        DetectionArm {
            label: "t1:12".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p(1, "12")), Channel::v(p(1, "12"))],
        },
        DetectionArm {
            label: "t2:11".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p(2, "11")), Channel::v(p(2, "11"))],
        },
        DetectionArm {
            label: "t2:12".into(),
            role: SlotRole::TargetSide,
            level_channels: vec![Channel::h(p(2, "12")), Channel::v(p(2, "12"))],
        },
    ];

    Ok(InterferometerSpec {
        gate: GateName::Fredkin3,
        basis,
        elements,
        compiled,
        photon_labels: vec!["c".into(), "t1".into(), "t2".into()],
        input_slots,
        arms,
        chain: Some(ChainPlan {
            stage_wires: [(0, 2), (0, 1), (0, 2)],
            stage_prefixes,
            branch_unitaries,
            branch_amplitude,
        }),
    })
}

/// Builds the chained three-photon controlled-swap interferometer.
pub fn build_fredkin_interferometer() -> Result<InterferometerSpec, OpticsError> {
    build_fredkin_from_parts(default_fredkin_parts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::spec::build_pswap_interferometer;

    #[test]
    fn branch_blocks_are_uniform_scaled_unitaries() {
        let pswap = build_pswap_interferometer().unwrap();
        let (unitaries, amplitude) = extract_branch_unitaries(&pswap).unwrap();
        assert!((amplitude - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        for u in &unitaries {
            assert!(u.unitarity_defect() <= 1e-10);
        }
    }

    #[test]
    fn correction_free_branches_match_the_ideal_partial_swap() {
        let pswap = build_pswap_interferometer().unwrap();
        let (unitaries, _) = extract_branch_unitaries(&pswap).unwrap();
        let ideal = super::super::outcome::ideal_logical_matrix(GateName::Pswap);
        for b in StageBranch::PLUS {
            let cmp = crate::qudit::matrices_equal(
                unitaries[b.index()].view(),
                ideal.view(),
                1e-10,
            )
            .unwrap();
            assert!(cmp.equal, "branch {} deviates", b.label());
        }
    }

    #[test]
    fn sign_branches_differ_only_on_computational_rows() {
        let pswap = build_pswap_interferometer().unwrap();
        let (unitaries, _) = extract_branch_unitaries(&pswap).unwrap();
        let ideal = super::super::outcome::ideal_logical_matrix(GateName::Pswap);
        for b in [StageBranch::NineTwelve, StageBranch::TenEleven] {
            let u = unitaries[b.index()].entries();
            for ((i, j), &v) in u.indexed_iter() {
                // carrier levels 0 and 1 pick up the minus sign, level 2 does not
                let sign = if i / 2 == 2 { 1.0 } else { -1.0 };
                let expect = sign * ideal.entries()[[i, j]];
                assert!((v - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn compiled_chain_is_unitary() {
        let spec = build_fredkin_interferometer().unwrap();
        let defect = spec.compiled_unitary().unitarity_defect();
        assert!(defect <= 1e-10, "defect {defect}");
        assert!(spec.basis.len() > 3 * 35);
    }
}
