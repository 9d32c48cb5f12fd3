//! Randomized structural invariants of the state-vector substrate.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fredkin_sim::qudit::{
    apply_gate, circuit_unitary, Circuit, GateKind, GateOp, MixedRadixState, UnitaryMatrix,
    WireSystem,
};

/// Dense unitary assembled from random two-level rotations.
fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> UnitaryMatrix {
    let mut u: Array2<Complex64> = Array2::eye(dim);
    for _ in 0..(3 * dim) {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        if i == j {
            j = (j + 1) % dim;
        }
        let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        let phi: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        let mut g: Array2<Complex64> = Array2::eye(dim);
        g[[i, i]] = Complex64::new(c, 0.0);
        g[[i, j]] = e * s;
        g[[j, i]] = -e.conj() * s;
        g[[j, j]] = Complex64::new(c, 0.0);
        u = g.dot(&u);
    }
    UnitaryMatrix::new(u).unwrap()
}

fn random_circuit(rng: &mut ChaCha8Rng) -> Circuit {
    let wires = rng.gen_range(1..=4usize);
    let dims: Vec<usize> = (0..wires).map(|_| rng.gen_range(2..=4usize)).collect();
    let system = WireSystem::new(&dims).unwrap();
    let mut circuit = Circuit::new(system);
    for _ in 0..rng.gen_range(1..=4usize) {
        let arity = if wires > 1 && rng.gen_bool(0.5) { 2 } else { 1 };
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < arity {
            let w = rng.gen_range(0..wires);
            if !chosen.contains(&w) {
                chosen.push(w);
            }
        }
        let local_dims: Vec<usize> = chosen.iter().map(|&w| dims[w]).collect();
        let local_total = local_dims.iter().product();
        let gate = GateOp::new(
            chosen,
            local_dims,
            random_unitary(local_total, rng),
            GateKind::Other,
        )
        .unwrap();
        circuit.push(gate).unwrap();
    }
    circuit
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The assembled circuit matrix acts on basis states exactly as
    /// sequential gate application does.
    #[test]
    fn circuit_unitary_agrees_with_sequential_application(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = random_circuit(&mut rng);
        let u = circuit_unitary(&circuit).unwrap();
        prop_assert!(u.is_unitary(1e-10));
        let dim = circuit.system().total_dim();
        for j in 0..dim {
            let digits = circuit.system().index_to_digits(j).unwrap();
            let mut state =
                MixedRadixState::basis(circuit.system().clone(), &digits).unwrap();
            for gate in circuit.gates() {
                state = apply_gate(&state, gate).unwrap();
            }
            for i in 0..dim {
                let dev = (state.amplitudes()[i] - u.entries()[[i, j]]).norm();
                prop_assert!(dev <= 1e-12, "entry ({i},{j}) deviates by {dev}");
            }
        }
    }

    /// Embedded application of any random gate preserves the norm.
    #[test]
    fn random_gates_preserve_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = random_circuit(&mut rng);
        let dim = circuit.system().total_dim();
        let mut amps = Array1::zeros(dim);
        for a in amps.iter_mut() {
            *a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let mut state = MixedRadixState::new(circuit.system().clone(), amps).unwrap();
        state.normalize();
        for gate in circuit.gates() {
            state = apply_gate(&state, gate).unwrap();
            prop_assert!((state.norm() - 1.0).abs() <= 1e-10);
        }
    }

    /// Digit decomposition inverts exactly over the whole index range.
    #[test]
    fn digit_conversion_is_a_bijection(dims in proptest::collection::vec(2usize..=4, 1..=4)) {
        let sys = WireSystem::new(&dims).unwrap();
        let mut seen = vec![false; sys.total_dim()];
        for (i, cell) in seen.iter_mut().enumerate() {
            let digits = sys.index_to_digits(i).unwrap();
            for (d, &limit) in digits.iter().zip(dims.iter()) {
                prop_assert!(*d < limit);
            }
            let back = sys.digits_to_index(&digits).unwrap();
            prop_assert_eq!(back, i);
            prop_assert!(!*cell);
            *cell = true;
        }
    }
}
