//! Fredkin circuit synthesis on carriers with auxiliary levels.
//!
//! The three-qubit construction uses a qutrit control carrier: a level
//! exchange parks the computational |0> in the auxiliary |2>, three
//! qutrit-qubit partial-swap gates perform the conditional exchange, and the
//! mirrored level exchange restores the carrier. The n-controlled extension
//! widens the carrier to n+2 levels and adds a ladder of qubit-level CNOTs
//! and level exchanges that parks the carrier outside {|0>,|1>} unless every
//! control is |1>. Gate cost is 2n+1 two-qubit gates plus 2n single-qudit
//! gates.
//!
//! Every builder is checked against a direct truth-table oracle by exhaustive
//! basis enumeration; [`verify_synthesis`] packages that check together with
//! leakage measurement and gate counting.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qudit::{
    kept_basis_indices, Circuit, GateKind, GateOp, MixedRadixState, QuditError, UnitaryMatrix,
    WireSystem, TOL,
};

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error("carrier dimension must be at least 3, got {0}")]
    CarrierTooSmall(usize),
    #[error("control count must be at least 1, got {0}")]
    InvalidControlCount(usize),
    #[error("exchange levels must be distinct, got {0} and {0}")]
    DegenerateExchange(usize),
    #[error(transparent)]
    Qudit(#[from] QuditError),
}

/// Verification summary for one n-controlled Fredkin synthesis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthesisReport {
    pub n: usize,
    pub verified: bool,
    pub max_deviation: f64,
    pub leakage: f64,
    pub two_qubit_count: usize,
    pub single_qudit_count: usize,
    pub carrier_dim: usize,
}

/// Partial-swap gate on a (carrier, qubit) pair: a full SWAP on the
/// {|0>,|1>} x {|0>,|1>} subspace, identity whenever the carrier sits in any
/// level >= 2. One constructor serves every carrier dimension, which is what
/// lets the same gate appear in both the qutrit and the n-controlled circuits.
pub fn make_partial_swap(
    carrier_dim: usize,
    carrier_wire: usize,
    target_wire: usize,
) -> Result<GateOp, SynthesisError> {
    if carrier_dim < 3 {
        return Err(SynthesisError::CarrierTooSmall(carrier_dim));
    }
    let dim = 2 * carrier_dim;
    let mut perm: Vec<usize> = (0..dim).collect();
    // local index = carrier_level * 2 + qubit_level
    perm.swap(1, 2);
    let gate = GateOp::new(
        vec![carrier_wire, target_wire],
        vec![carrier_dim, 2],
        UnitaryMatrix::permutation(&perm),
        GateKind::TwoQubit,
    )?;
    Ok(gate)
}

/// Single-qudit permutation exchanging |a> and |b>, identity elsewhere.
/// Self-inverse.
pub fn make_level_exchange(
    carrier_dim: usize,
    a: usize,
    b: usize,
    wire: usize,
) -> Result<GateOp, SynthesisError> {
    if a == b {
        return Err(SynthesisError::DegenerateExchange(a));
    }
    for level in [a, b] {
        if level >= carrier_dim {
            return Err(QuditError::InvalidLevel {
                level,
                dim: carrier_dim,
            }
            .into());
        }
    }
    let mut perm: Vec<usize> = (0..carrier_dim).collect();
    perm.swap(a, b);
    let gate = GateOp::new(
        vec![wire],
        vec![carrier_dim],
        UnitaryMatrix::permutation(&perm),
        GateKind::SingleQudit,
    )?;
    Ok(gate)
}

/// Qubit-level CNOT: if the (2-dimensional) control wire reads |1>, exchange
/// levels `a` and `b` of the target carrier; otherwise do nothing.
pub fn make_qubit_level_cnot(
    target_dim: usize,
    levels: (usize, usize),
    control_wire: usize,
    target_wire: usize,
) -> Result<GateOp, SynthesisError> {
    let (a, b) = levels;
    if a == b {
        return Err(SynthesisError::DegenerateExchange(a));
    }
    for level in [a, b] {
        if level >= target_dim {
            return Err(QuditError::InvalidLevel {
                level,
                dim: target_dim,
            }
            .into());
        }
    }
    let dim = 2 * target_dim;
    let mut perm: Vec<usize> = (0..dim).collect();
    // local index = control * target_dim + target_level
    perm.swap(target_dim + a, target_dim + b);
    let gate = GateOp::new(
        vec![control_wire, target_wire],
        vec![2, target_dim],
        UnitaryMatrix::permutation(&perm),
        GateKind::TwoQubit,
    )?;
    Ok(gate)
}

/// Three-qubit Fredkin on wires (control carrier, t1, t2) with carrier
/// dimension 3: level exchange |0><->|2|, partial swaps on (c,t2), (c,t1),
/// (c,t2), mirrored level exchange.
pub fn build_fredkin3() -> Circuit {
    build_n_controlled_fredkin(1).expect("n = 1 is always valid")
}

/// Auxiliary level paired by the k-th ladder exchange: computational |0> for
/// odd k, |1> for even k, parked into level k+1.
fn ladder_pairing(k: usize) -> (usize, usize) {
    let computational = if k % 2 == 1 { 0 } else { 1 };
    (computational, k + 1)
}

/// n-controlled Fredkin circuit on dims (n+2, 2, ..., 2) with n-1 plain
/// control qubits and two targets. The first control is absorbed into the
/// carrier; the ladder parks the carrier in an auxiliary level as soon as any
/// control reads |0>, the three partial swaps act only on carriers left in
/// {|0>,|1>}, and the mirrored ladder restores every control.
pub fn build_n_controlled_fredkin(n: usize) -> Result<Circuit, SynthesisError> {
    if n < 1 {
        return Err(SynthesisError::InvalidControlCount(n));
    }
    let carrier_dim = n + 2;
    let mut dims = vec![carrier_dim];
    dims.resize(n, 2); // controls c2..cn
    dims.push(2); // t1
    dims.push(2); // t2
    let system = WireSystem::new(&dims)?;
    let t1 = n;
    let t2 = n + 1;

    let mut forward: Vec<GateOp> = Vec::new();
    let (a1, b1) = ladder_pairing(1);
    forward.push(make_level_exchange(carrier_dim, a1, b1, 0)?);
    for k in 2..=n {
        // control c_k lives on wire k-1; its CNOT flips the carrier's
        // computational pair, then the exchange parks the now-inactive level.
        forward.push(make_qubit_level_cnot(carrier_dim, (0, 1), k - 1, 0)?);
        let (a, b) = ladder_pairing(k);
        forward.push(make_level_exchange(carrier_dim, a, b, 0)?);
    }

    let mut circuit = Circuit::new(system);
    for g in &forward {
        circuit.push(g.clone())?;
    }
    circuit.push(make_partial_swap(carrier_dim, 0, t2)?)?;
    circuit.push(make_partial_swap(carrier_dim, 0, t1)?)?;
    circuit.push(make_partial_swap(carrier_dim, 0, t2)?)?;
    for g in forward.iter().rev() {
        circuit.push(g.clone())?;
    }
    Ok(circuit)
}

/// Truth-table oracle for the three-qubit Fredkin gate: exchanges the two
/// target qubits iff the control is |1>.
pub fn reference_fredkin() -> UnitaryMatrix {
    reference_n_controlled_fredkin(1).expect("n = 1 is always valid")
}

/// Truth-table oracle on n+2 qubits: swap the last two iff all n controls
/// read |1>.
pub fn reference_n_controlled_fredkin(n: usize) -> Result<UnitaryMatrix, SynthesisError> {
    if n < 1 {
        return Err(SynthesisError::InvalidControlCount(n));
    }
    let qubits = n + 2;
    let dim = 1usize << qubits;
    let mut perm = Vec::with_capacity(dim);
    for j in 0..dim {
        let controls_on = (0..n).all(|k| (j >> (qubits - 1 - k)) & 1 == 1);
        let t1 = (j >> 1) & 1;
        let t2 = j & 1;
        let image = if controls_on && t1 != t2 {
            (j & !0b11) | (t2 << 1) | t1
        } else {
            j
        };
        perm.push(image);
    }
    Ok(UnitaryMatrix::permutation(&perm))
}

/// Kept-level sets selecting the all-qubit computational subspace of a
/// synthesis circuit: levels {0,1} on the carrier, everything on the qubits.
pub fn computational_kept_levels(system: &WireSystem) -> Vec<Vec<usize>> {
    system
        .dims()
        .iter()
        .map(|&d| if d > 2 { vec![0, 1] } else { vec![0, 1].into_iter().take(d).collect() })
        .collect()
}

/// Builds the n-controlled circuit and verifies it against the truth-table
/// oracle by exhaustive enumeration of the 2^(n+2) computational basis
/// states. Applying the circuit column by column is equivalent to forming the
/// full unitary and projecting it, but touches only the kept columns.
pub fn verify_synthesis(n: usize) -> Result<SynthesisReport, SynthesisError> {
    let circuit = build_n_controlled_fredkin(n)?;
    let system = circuit.system().clone();
    let carrier_dim = system.dims()[0];
    let kept = kept_basis_indices(&system, &computational_kept_levels(&system))?;
    let reference = reference_n_controlled_fredkin(n)?;
    debug_assert_eq!(kept.len(), reference.dim());

    let mut max_deviation: f64 = 0.0;
    let mut leakage: f64 = 0.0;
    for (cj, &j) in kept.iter().enumerate() {
        let digits = system.index_to_digits(j)?;
        let input = MixedRadixState::basis(system.clone(), &digits)?;
        let output = circuit.apply(&input)?;
        let mut kept_norm_sqr = 0.0;
        for (ci, &i) in kept.iter().enumerate() {
            let amp = output.amplitudes()[i];
            kept_norm_sqr += amp.norm_sqr();
            let dev = (amp - reference.entries()[[ci, cj]]).norm();
            max_deviation = max_deviation.max(dev);
        }
        let total_norm_sqr: f64 = output.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        leakage = leakage.max((total_norm_sqr - kept_norm_sqr).max(0.0).sqrt());
    }

    let (two_qubit_count, single_qudit_count, _) = circuit.count_by_kind();
    let counts_ok = two_qubit_count == 2 * n + 1 && single_qudit_count == 2 * n;
    Ok(SynthesisReport {
        n,
        verified: max_deviation <= TOL && leakage <= TOL && counts_ok,
        max_deviation,
        leakage,
        two_qubit_count,
        single_qudit_count,
        carrier_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{
        apply_gate, circuit_unitary, matrices_equal, project_to_subspace,
    };
    use ndarray::Array1;
    use num_complex::Complex64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_state(system: &WireSystem, rng: &mut ChaCha8Rng) -> MixedRadixState {
        let mut amps = Array1::zeros(system.total_dim());
        for a in amps.iter_mut() {
            *a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let mut st = MixedRadixState::new(system.clone(), amps).unwrap();
        st.normalize();
        st
    }

    #[test]
    fn partial_swap_truth_table() {
        let g = make_partial_swap(3, 0, 1).unwrap();
        let m = g.matrix().entries();
        // |01> -> |10>, |10> -> |01>
        assert_eq!(m[[2, 1]], c(1.0));
        assert_eq!(m[[1, 2]], c(1.0));
        // |00>, |11> fixed
        assert_eq!(m[[0, 0]], c(1.0));
        assert_eq!(m[[3, 3]], c(1.0));
        // |20>, |21> fixed (carrier in the auxiliary level)
        assert_eq!(m[[4, 4]], c(1.0));
        assert_eq!(m[[5, 5]], c(1.0));
        assert_eq!(g.kind(), GateKind::TwoQubit);
    }

    #[test]
    fn partial_swap_needs_an_auxiliary_level() {
        assert!(matches!(
            make_partial_swap(2, 0, 1),
            Err(SynthesisError::CarrierTooSmall(2))
        ));
    }

    #[test]
    fn level_exchange_matches_its_table() {
        let g = make_level_exchange(3, 0, 2, 0).unwrap();
        let m = g.matrix().entries();
        assert_eq!(m[[2, 0]], c(1.0));
        assert_eq!(m[[1, 1]], c(1.0));
        assert_eq!(m[[0, 2]], c(1.0));
        assert_eq!(g.kind(), GateKind::SingleQudit);
    }

    #[test]
    fn level_exchange_is_self_inverse() {
        for (d, a, b) in [(3, 0, 2), (4, 1, 3), (6, 0, 4)] {
            let g = make_level_exchange(d, a, b, 0).unwrap();
            let square = g.matrix().matmul(g.matrix());
            let cmp =
                matrices_equal(square.view(), UnitaryMatrix::identity(d).view(), TOL).unwrap();
            assert!(cmp.equal);
        }
    }

    #[test]
    fn level_exchange_rejects_bad_levels() {
        assert!(make_level_exchange(3, 1, 1, 0).is_err());
        assert!(make_level_exchange(3, 0, 3, 0).is_err());
    }

    #[test]
    fn qubit_level_cnot_behaviour() {
        let g = make_qubit_level_cnot(4, (0, 1), 0, 1).unwrap();
        let m = g.matrix().entries();
        // control |0>: identity on all four target levels
        for t in 0..4 {
            assert_eq!(m[[t, t]], c(1.0));
        }
        // control |1>: |a> <-> |b| within the control-on block at offset 4
        assert_eq!(m[[5, 4]], c(1.0));
        assert_eq!(m[[4, 5]], c(1.0));
        assert_eq!(m[[6, 6]], c(1.0));
    }

    #[test]
    fn qubit_level_cnot_reduces_to_cnot() {
        let g = make_qubit_level_cnot(2, (0, 1), 0, 1).unwrap();
        let expected = UnitaryMatrix::permutation(&[0, 1, 3, 2]);
        let cmp = matrices_equal(g.matrix().view(), expected.view(), TOL).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn qubit_level_cnot_rejects_bad_levels() {
        assert!(make_qubit_level_cnot(2, (0, 2), 0, 1).is_err());
        assert!(make_qubit_level_cnot(4, (3, 3), 0, 1).is_err());
    }

    #[test]
    fn fredkin3_gate_list_shape() {
        let circuit = build_fredkin3();
        assert_eq!(circuit.system().dims(), &[3, 2, 2]);
        assert_eq!(circuit.gates().len(), 5);
        let (two_qubit, single_qudit, other) = circuit.count_by_kind();
        assert_eq!((two_qubit, single_qudit, other), (3, 2, 0));
        // exchange, pswap(c,t2), pswap(c,t1), pswap(c,t2), exchange
        assert_eq!(circuit.gates()[0].wires(), &[0]);
        assert_eq!(circuit.gates()[1].wires(), &[0, 2]);
        assert_eq!(circuit.gates()[2].wires(), &[0, 1]);
        assert_eq!(circuit.gates()[3].wires(), &[0, 2]);
        assert_eq!(circuit.gates()[4].wires(), &[0]);
    }

    #[test]
    fn fredkin3_swaps_targets_when_control_is_on() {
        let circuit = build_fredkin3();
        let sys = circuit.system().clone();
        let input = MixedRadixState::basis(sys.clone(), &[1, 0, 1]).unwrap();
        let expected = MixedRadixState::basis(sys.clone(), &[1, 1, 0]).unwrap();
        let out = circuit.apply(&input).unwrap();
        assert!(out.max_deviation(&expected) < TOL);

        let input = MixedRadixState::basis(sys.clone(), &[0, 0, 1]).unwrap();
        let out = circuit.apply(&input).unwrap();
        assert!(out.max_deviation(&input) < TOL);
    }

    #[test]
    fn fredkin3_control_off_leaves_any_target_state_alone() {
        let circuit = build_fredkin3();
        let sys = circuit.system().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut amps = Array1::zeros(12);
        // random state supported on the control-off block
        for t in 0..4 {
            amps[t] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let mut st = MixedRadixState::new(sys, amps).unwrap();
        st.normalize();
        let out = circuit.apply(&st).unwrap();
        assert!(out.max_deviation(&st) < TOL);
    }

    /// The staged state rewrites of the qutrit construction: parking the
    /// control, the three partial swaps, and the restoration.
    #[test]
    fn fredkin3_intermediate_states() {
        let sys = WireSystem::new(&[3, 2, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut alphas = [Complex64::new(0.0, 0.0); 8];
        let mut norm = 0.0;
        for a in alphas.iter_mut() {
            *a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            norm += a.norm_sqr();
        }
        let norm = norm.sqrt();
        for a in alphas.iter_mut() {
            *a /= norm;
        }

        // phi0: alphas over the computational block, carrier most significant
        let mut amps = Array1::zeros(12);
        for (k, &a) in alphas.iter().enumerate() {
            let digits = [k >> 2, (k >> 1) & 1, k & 1];
            amps[sys.digits_to_index(&digits).unwrap()] = a;
        }
        let phi0 = MixedRadixState::new(sys.clone(), amps).unwrap();

        // parking |0> in |2> moves the first four amplitudes to the carrier-2 block
        let xa = make_level_exchange(3, 0, 2, 0).unwrap();
        let phi1 = apply_gate(&phi0, &xa).unwrap();
        let mut expected = Array1::zeros(12);
        for (k, &a) in alphas.iter().enumerate() {
            let carrier = if k < 4 { 2 } else { 1 };
            let digits = [carrier, (k >> 1) & 1, k & 1];
            expected[sys.digits_to_index(&digits).unwrap()] = a;
        }
        assert!(
            phi1.max_deviation(&MixedRadixState::new(sys.clone(), expected.clone()).unwrap())
                < TOL
        );

        // the three partial swaps exchange only the (1,0,1) and (1,1,0) slots
        let mut phi2 = phi1.clone();
        for (cw, tw) in [(0, 2), (0, 1), (0, 2)] {
            phi2 = apply_gate(&phi2, &make_partial_swap(3, cw, tw).unwrap()).unwrap();
        }
        let i101 = sys.digits_to_index(&[1, 0, 1]).unwrap();
        let i110 = sys.digits_to_index(&[1, 1, 0]).unwrap();
        expected.swap(i101, i110);
        assert!(
            phi2.max_deviation(&MixedRadixState::new(sys.clone(), expected).unwrap()) < TOL
        );

        // restoring the carrier completes the Fredkin action on phi0
        let phi3 = apply_gate(&phi2, &xa).unwrap();
        let mut fredkin_amps = Array1::zeros(12);
        for (k, &a) in alphas.iter().enumerate() {
            let swapped = if k >> 2 == 1 {
                (k & !0b11) | ((k & 1) << 1) | ((k >> 1) & 1)
            } else {
                k
            };
            let digits = [swapped >> 2, (swapped >> 1) & 1, swapped & 1];
            fredkin_amps[sys.digits_to_index(&digits).unwrap()] = a;
        }
        assert!(
            phi3.max_deviation(&MixedRadixState::new(sys, fredkin_amps).unwrap()) < TOL
        );
    }

    #[test]
    fn reference_fredkin_truth_table() {
        let f = reference_fredkin();
        let m = f.entries();
        assert_eq!(m[[0b110, 0b101]], c(1.0));
        assert_eq!(m[[0b101, 0b110]], c(1.0));
        assert_eq!(m[[0b011, 0b011]], c(1.0));
        assert_eq!(m[[0b100, 0b100]], c(1.0));
        assert_eq!(m[[0b111, 0b111]], c(1.0));
        let square = f.matmul(&f);
        let cmp = matrices_equal(square.view(), UnitaryMatrix::identity(8).view(), TOL).unwrap();
        assert!(cmp.equal, "a controlled swap is its own inverse");
    }

    #[test]
    fn reference_two_control_cases() {
        let f = reference_n_controlled_fredkin(2).unwrap();
        let m = f.entries();
        assert_eq!(m[[0b1110, 0b1101]], c(1.0)); // both controls on: swap
        assert_eq!(m[[0b0101, 0b0101]], c(1.0)); // a control off: fixed
        let f1 = reference_n_controlled_fredkin(1).unwrap();
        let cmp = matrices_equal(f1.view(), reference_fredkin().view(), TOL).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn full_unitary_projection_matches_reference() {
        // The product of the five embedded gate matrices, restricted to the
        // qubit subspace, is exactly the 8x8 controlled-swap permutation.
        let circuit = build_fredkin3();
        let u = circuit_unitary(&circuit).unwrap();
        assert!(u.is_unitary(TOL));
        let kept = computational_kept_levels(circuit.system());
        let p = project_to_subspace(&u, circuit.system(), &kept).unwrap();
        assert!(p.leakage <= TOL);
        let cmp = matrices_equal(p.block.view(), reference_fredkin().view(), TOL).unwrap();
        assert!(cmp.equal, "max deviation {}", cmp.max_deviation);
    }

    #[test]
    fn projected_fredkin3_block_is_an_involution() {
        let circuit = build_fredkin3();
        let u = circuit_unitary(&circuit).unwrap();
        let p = project_to_subspace(&u, circuit.system(), &computational_kept_levels(circuit.system()))
            .unwrap();
        let block = UnitaryMatrix::new(p.block).unwrap();
        let square = block.matmul(&block);
        let cmp = matrices_equal(square.view(), UnitaryMatrix::identity(8).view(), TOL).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn n1_reduces_to_fredkin3() {
        let a = build_n_controlled_fredkin(1).unwrap();
        let b = build_fredkin3();
        assert_eq!(a.gates().len(), b.gates().len());
        for (ga, gb) in a.gates().iter().zip(b.gates().iter()) {
            assert_eq!(ga.wires(), gb.wires());
            let cmp = matrices_equal(ga.matrix().view(), gb.matrix().view(), TOL).unwrap();
            assert!(cmp.equal);
        }
    }

    #[test]
    fn two_control_examples() {
        let circuit = build_n_controlled_fredkin(2).unwrap();
        let sys = circuit.system().clone();
        assert_eq!(sys.dims(), &[4, 2, 2, 2]);
        let input = MixedRadixState::basis(sys.clone(), &[1, 1, 0, 1]).unwrap();
        let expected = MixedRadixState::basis(sys.clone(), &[1, 1, 1, 0]).unwrap();
        assert!(circuit.apply(&input).unwrap().max_deviation(&expected) < TOL);

        let input = MixedRadixState::basis(sys, &[1, 0, 0, 1]).unwrap();
        assert!(circuit.apply(&input).unwrap().max_deviation(&input) < TOL);
    }

    #[test]
    fn verify_small_counts() {
        let r1 = verify_synthesis(1).unwrap();
        assert!(r1.verified);
        assert_eq!(
            (r1.two_qubit_count, r1.single_qudit_count, r1.carrier_dim),
            (3, 2, 3)
        );
        let r4 = verify_synthesis(4).unwrap();
        assert!(r4.verified);
        assert_eq!(
            (r4.two_qubit_count, r4.single_qudit_count, r4.carrier_dim),
            (9, 8, 6)
        );
    }

    #[test]
    fn invalid_control_count_is_rejected() {
        assert!(matches!(
            build_n_controlled_fredkin(0),
            Err(SynthesisError::InvalidControlCount(0))
        ));
        assert!(verify_synthesis(0).is_err());
    }

    #[test]
    fn controls_are_restored_on_every_basis_input() {
        for n in 1..=4 {
            let circuit = build_n_controlled_fredkin(n).unwrap();
            let sys = circuit.system().clone();
            let kept = kept_basis_indices(&sys, &computational_kept_levels(&sys)).unwrap();
            for &j in &kept {
                let digits = sys.index_to_digits(j).unwrap();
                let out = circuit.apply(
                    &MixedRadixState::basis(sys.clone(), &digits).unwrap(),
                )
                .unwrap();
                // permutation circuit: output is a single basis state
                let (idx, _) = out
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                    .unwrap();
                let out_digits = sys.index_to_digits(idx).unwrap();
                assert_eq!(out_digits[..n], digits[..n], "controls changed for n={n}");
            }
        }
    }

    #[test]
    fn superposition_inputs_match_the_oracle() {
        for n in 1..=4 {
            let circuit = build_n_controlled_fredkin(n).unwrap();
            let sys = circuit.system().clone();
            let kept = kept_basis_indices(&sys, &computational_kept_levels(&sys)).unwrap();
            let reference = reference_n_controlled_fredkin(n).unwrap();
            let qubit_sys = WireSystem::new(&vec![2; n + 2]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(500 + n as u64);
            for _ in 0..100 {
                let logical = random_state(&qubit_sys, &mut rng);
                // embed into the carrier system
                let mut amps = Array1::zeros(sys.total_dim());
                for (cj, &j) in kept.iter().enumerate() {
                    amps[j] = logical.amplitudes()[cj];
                }
                let embedded = MixedRadixState::new(sys.clone(), amps).unwrap();
                let out = circuit.apply(&embedded).unwrap();
                // expected: oracle applied to the logical vector, re-embedded
                let mut expected = Array1::zeros(sys.total_dim());
                for (ci, &i) in kept.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (cj, _) in kept.iter().enumerate() {
                        acc += reference.entries()[[ci, cj]] * logical.amplitudes()[cj];
                    }
                    expected[i] = acc;
                }
                let expected = MixedRadixState::new(sys.clone(), expected).unwrap();
                assert!(out.fidelity(&expected) >= 1.0 - 1e-12);
            }
        }
    }
}
