use ndarray::{Array1, Array2};
use num_complex::Complex64;

use super::{MixedRadixState, QuditError, UnitaryMatrix, WireSystem};

/// Cost-accounting classification of a gate.
///
/// The tag is assigned by the constructor that built the gate, not inferred
/// from the matrix: "two-qubit" means the gate acts nontrivially only within a
/// 2x2 subspace of each participating carrier, which is a design property of
/// the construction rather than a spectral one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    SingleQudit,
    TwoQubit,
    Other,
}

/// A unitary bound to an ordered subset of wires.
///
/// The local basis orders the first listed wire as the most significant
/// digit, matching the global index convention.
#[derive(Debug, Clone)]
pub struct GateOp {
    wires: Vec<usize>,
    local_dims: Vec<usize>,
    matrix: UnitaryMatrix,
    kind: GateKind,
}

impl GateOp {
    pub fn new(
        wires: Vec<usize>,
        local_dims: Vec<usize>,
        matrix: UnitaryMatrix,
        kind: GateKind,
    ) -> Result<Self, QuditError> {
        if wires.len() != local_dims.len() {
            return Err(QuditError::DimensionMismatch(format!(
                "{} wires but {} local dimensions",
                wires.len(),
                local_dims.len()
            )));
        }
        for (i, &w) in wires.iter().enumerate() {
            if wires[..i].contains(&w) {
                return Err(QuditError::DuplicateWire(w));
            }
        }
        let local_total: usize = local_dims.iter().product();
        if matrix.dim() != local_total {
            return Err(QuditError::DimensionMismatch(format!(
                "matrix dimension {} does not match local dimension product {}",
                matrix.dim(),
                local_total
            )));
        }
        Ok(Self {
            wires,
            local_dims,
            matrix,
            kind,
        })
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn matrix(&self) -> &UnitaryMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    fn check_against(&self, system: &WireSystem) -> Result<(), QuditError> {
        for (&w, &d) in self.wires.iter().zip(self.local_dims.iter()) {
            if w >= system.num_wires() {
                return Err(QuditError::WireOutOfRange {
                    wire: w,
                    count: system.num_wires(),
                });
            }
            if system.dims()[w] != d {
                return Err(QuditError::DimensionMismatch(format!(
                    "gate expects dimension {} on wire {}, system has {}",
                    d,
                    w,
                    system.dims()[w]
                )));
            }
        }
        Ok(())
    }
}

/// Applies an embedded gate to a state, returning the new state.
///
/// The update walks the orbits of the gate's local subspace; orbits whose
/// amplitudes are all exactly zero are skipped, so sparse states (basis
/// columns in particular) propagate in O(total_dim) per gate.
pub fn apply_gate(state: &MixedRadixState, gate: &GateOp) -> Result<MixedRadixState, QuditError> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate)?;
    Ok(out)
}

pub(crate) fn apply_gate_in_place(
    state: &mut MixedRadixState,
    gate: &GateOp,
) -> Result<(), QuditError> {
    gate.check_against(state.system())?;
    let system = state.system().clone();
    let local_dim: usize = gate.local_dims.iter().product();

    // Offset of each local basis index inside the global index.
    let mut offsets = vec![0usize; local_dim];
    for (li, offset) in offsets.iter_mut().enumerate() {
        let mut rem = li;
        for (k, &d) in gate.local_dims.iter().enumerate().rev() {
            let digit = rem % d;
            rem /= d;
            *offset += digit * system.stride(gate.wires[k]);
        }
    }

    let rest_wires: Vec<usize> = (0..system.num_wires())
        .filter(|w| !gate.wires.contains(w))
        .collect();
    let rest_dims: Vec<usize> = rest_wires.iter().map(|&w| system.dims()[w]).collect();

    let amps = state.amplitudes_mut();
    let m = gate.matrix.entries();
    let mut scratch = vec![Complex64::new(0.0, 0.0); local_dim];
    let mut rest_digits = vec![0usize; rest_wires.len()];
    loop {
        let base: usize = rest_digits
            .iter()
            .zip(rest_wires.iter())
            .map(|(&d, &w)| d * system.stride(w))
            .sum();

        let mut all_zero = true;
        for (li, s) in scratch.iter_mut().enumerate() {
            let a = amps[base + offsets[li]];
            all_zero &= a == Complex64::new(0.0, 0.0);
            *s = a;
        }
        if !all_zero {
            for (row, &offset) in offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, &s) in scratch.iter().enumerate() {
                    acc += m[[row, col]] * s;
                }
                amps[base + offset] = acc;
            }
        }

        // mixed-radix counter over the untouched wires
        let mut w = rest_digits.len();
        loop {
            if w == 0 {
                return Ok(());
            }
            w -= 1;
            rest_digits[w] += 1;
            if rest_digits[w] < rest_dims[w] {
                break;
            }
            rest_digits[w] = 0;
        }
    }
}

/// An ordered gate list over a fixed wire system.
#[derive(Debug, Clone)]
pub struct Circuit {
    system: WireSystem,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(system: WireSystem) -> Self {
        Self {
            system,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: GateOp) -> Result<(), QuditError> {
        gate.check_against(&self.system)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn system(&self) -> &WireSystem {
        &self.system
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    /// Applies all gates in order to a copy of `state`.
    pub fn apply(&self, state: &MixedRadixState) -> Result<MixedRadixState, QuditError> {
        let mut out = state.clone();
        for gate in &self.gates {
            apply_gate_in_place(&mut out, gate)?;
        }
        Ok(out)
    }

    /// Counts gates by tag, returning `(two_qubit, single_qudit, other)`.
    pub fn count_by_kind(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for g in &self.gates {
            match g.kind() {
                GateKind::TwoQubit => counts.0 += 1,
                GateKind::SingleQudit => counts.1 += 1,
                GateKind::Other => counts.2 += 1,
            }
        }
        counts
    }
}

/// Full matrix of a circuit: the product of its embedded gate unitaries in
/// application order, assembled column by column.
pub fn circuit_unitary(circuit: &Circuit) -> Result<UnitaryMatrix, QuditError> {
    let dim = circuit.system().total_dim();
    let mut entries = Array2::zeros((dim, dim));
    for j in 0..dim {
        let mut col = MixedRadixState::new(circuit.system().clone(), {
            let mut a = Array1::zeros(dim);
            a[j] = Complex64::new(1.0, 0.0);
            a
        })?;
        for gate in circuit.gates() {
            apply_gate_in_place(&mut col, gate)?;
        }
        for i in 0..dim {
            entries[[i, j]] = col.amplitudes()[i];
        }
    }
    UnitaryMatrix::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{matrices_equal, TOL};

    fn full_swap() -> GateOp {
        GateOp::new(
            vec![0, 1],
            vec![2, 2],
            UnitaryMatrix::permutation(&[0, 2, 1, 3]),
            GateKind::TwoQubit,
        )
        .unwrap()
    }

    #[test]
    fn identity_gate_leaves_state_alone() {
        let sys = WireSystem::new(&[3, 2]).unwrap();
        let gate = GateOp::new(
            vec![1],
            vec![2],
            UnitaryMatrix::identity(2),
            GateKind::Other,
        )
        .unwrap();
        let st = MixedRadixState::basis(sys, &[2, 1]).unwrap();
        let out = apply_gate(&st, &gate).unwrap();
        assert_eq!(out.max_deviation(&st), 0.0);
    }

    #[test]
    fn empty_circuit_unitary_is_identity() {
        let sys = WireSystem::new(&[2, 2]).unwrap();
        let circ = Circuit::new(sys);
        let u = circuit_unitary(&circ).unwrap();
        let cmp = matrices_equal(u.view(), UnitaryMatrix::identity(4).view(), TOL).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn swap_circuit_unitary_is_the_exchange_permutation() {
        let sys = WireSystem::new(&[2, 2]).unwrap();
        let mut circ = Circuit::new(sys);
        circ.push(full_swap()).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let expected = UnitaryMatrix::permutation(&[0, 2, 1, 3]);
        let cmp = matrices_equal(u.view(), expected.view(), TOL).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn gate_dimension_mismatch_is_rejected() {
        let sys = WireSystem::new(&[3, 2]).unwrap();
        let mut circ = Circuit::new(sys);
        assert!(circ.push(full_swap()).is_err());
    }

    #[test]
    fn duplicate_wires_are_rejected() {
        let r = GateOp::new(
            vec![0, 0],
            vec![2, 2],
            UnitaryMatrix::identity(4),
            GateKind::Other,
        );
        assert_eq!(r.unwrap_err(), QuditError::DuplicateWire(0));
    }
}
