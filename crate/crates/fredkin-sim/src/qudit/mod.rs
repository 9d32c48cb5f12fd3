//! Mixed-radix state vectors and dense gate algebra.
//!
//! A [`WireSystem`] is an ordered list of carriers with possibly different
//! dimensions (qubits, qutrits, higher qudits). Basis states are indexed with
//! wire 0 as the most significant digit, so a ket written control-first
//! transcribes directly into an amplitude index. All matrices are dense
//! `Complex64`; the systems verified here top out at a few thousand basis
//! states, far below where sparsity would matter.

mod gate;
mod matrix;
mod project;

pub use gate::{apply_gate, circuit_unitary, Circuit, GateKind, GateOp};
pub use matrix::{matrices_equal, MatrixComparison, UnitaryMatrix};
pub use project::{kept_basis_indices, project_to_subspace, Projection};

use ndarray::Array1;
use num_complex::Complex64;
use thiserror::Error;

/// Default numerical tolerance for unitarity, normalization and equality
/// checks. Double precision leaves several orders of magnitude of headroom at
/// the matrix sizes used here.
pub const TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum QuditError {
    #[error("basis index {index} out of range for total dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("wire {wire} out of range for {count}-wire system")]
    WireOutOfRange { wire: usize, count: usize },
    #[error("duplicate wire {0} in gate")]
    DuplicateWire(usize),
    #[error("wire dimension must be >= 2, got {0}")]
    DegenerateWire(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("empty kept level set on wire {0}")]
    EmptyKeptSet(usize),
    #[error("invalid level {level} for carrier of dimension {dim}")]
    InvalidLevel { level: usize, dim: usize },
}

/// An ordered register of finite-dimensional carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireSystem {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl WireSystem {
    pub fn new(dims: &[usize]) -> Result<Self, QuditError> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(QuditError::DegenerateWire(d));
        }
        let mut strides = vec![1usize; dims.len()];
        for w in (0..dims.len().saturating_sub(1)).rev() {
            strides[w] = strides[w + 1] * dims[w + 1];
        }
        let total_dim = dims.iter().product();
        Ok(Self {
            dims: dims.to_vec(),
            strides,
            total_dim,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_wires(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    /// Stride of a wire in the flattened basis index (wire 0 is most
    /// significant).
    pub fn stride(&self, wire: usize) -> usize {
        self.strides[wire]
    }

    /// Decomposes a basis index into one digit per wire.
    pub fn index_to_digits(&self, index: usize) -> Result<Vec<usize>, QuditError> {
        if index >= self.total_dim {
            return Err(QuditError::IndexOutOfRange {
                index,
                dim: self.total_dim,
            });
        }
        let mut rem = index;
        let digits = self
            .strides
            .iter()
            .map(|&s| {
                let d = rem / s;
                rem %= s;
                d
            })
            .collect();
        Ok(digits)
    }

    /// Recombines per-wire digits into a basis index. Inverse of
    /// [`WireSystem::index_to_digits`].
    pub fn digits_to_index(&self, digits: &[usize]) -> Result<usize, QuditError> {
        if digits.len() != self.dims.len() {
            return Err(QuditError::DimensionMismatch(format!(
                "{} digits for {} wires",
                digits.len(),
                self.dims.len()
            )));
        }
        let mut index = 0;
        for (w, &d) in digits.iter().enumerate() {
            if d >= self.dims[w] {
                return Err(QuditError::InvalidLevel {
                    level: d,
                    dim: self.dims[w],
                });
            }
            index += d * self.strides[w];
        }
        Ok(index)
    }
}

/// A pure state over a [`WireSystem`], stored as a dense complex amplitude
/// vector.
#[derive(Debug, Clone)]
pub struct MixedRadixState {
    system: WireSystem,
    amplitudes: Array1<Complex64>,
}

impl MixedRadixState {
    pub fn new(system: WireSystem, amplitudes: Array1<Complex64>) -> Result<Self, QuditError> {
        if amplitudes.len() != system.total_dim() {
            return Err(QuditError::DimensionMismatch(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                system.total_dim()
            )));
        }
        Ok(Self { system, amplitudes })
    }

    /// The computational basis state `|digits...>`.
    pub fn basis(system: WireSystem, digits: &[usize]) -> Result<Self, QuditError> {
        let index = system.digits_to_index(digits)?;
        let mut amplitudes = Array1::zeros(system.total_dim());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { system, amplitudes })
    }

    pub fn zero(system: WireSystem) -> Self {
        let amplitudes = Array1::zeros(system.total_dim());
        Self { system, amplitudes }
    }

    pub fn system(&self) -> &WireSystem {
        &self.system
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut Array1<Complex64> {
        &mut self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.mapv_inplace(|a| a / n);
        }
    }

    /// Overlap `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Squared overlap magnitude with another state.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest entrywise deviation from another state.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_zero_index() {
        let sys = WireSystem::new(&[3, 2, 2]).unwrap();
        assert_eq!(sys.index_to_digits(0).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn digits_mixed_radix() {
        // 11 = 2*4 + 1*2 + 1 in a (3,2,2) register
        let sys = WireSystem::new(&[3, 2, 2]).unwrap();
        assert_eq!(sys.index_to_digits(11).unwrap(), vec![2, 1, 1]);
    }

    #[test]
    fn digits_binary() {
        let sys = WireSystem::new(&[2, 2, 2]).unwrap();
        assert_eq!(sys.index_to_digits(5).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn digits_out_of_range() {
        let sys = WireSystem::new(&[3, 2, 2]).unwrap();
        assert_eq!(
            sys.index_to_digits(12),
            Err(QuditError::IndexOutOfRange { index: 12, dim: 12 })
        );
    }

    #[test]
    fn rejects_trivial_wire() {
        assert_eq!(
            WireSystem::new(&[2, 1]),
            Err(QuditError::DegenerateWire(1))
        );
    }

    #[test]
    fn digit_conversion_round_trips() {
        for dims in [vec![3, 2, 2], vec![2, 2], vec![4, 3, 2], vec![5], vec![2, 3, 4, 2]] {
            let sys = WireSystem::new(&dims).unwrap();
            for i in 0..sys.total_dim() {
                let digits = sys.index_to_digits(i).unwrap();
                assert_eq!(sys.digits_to_index(&digits).unwrap(), i);
            }
        }
    }

    #[test]
    fn basis_state_is_normalized() {
        let sys = WireSystem::new(&[3, 2, 2]).unwrap();
        let st = MixedRadixState::basis(sys, &[1, 0, 1]).unwrap();
        assert!((st.norm() - 1.0).abs() < TOL);
        assert_eq!(st.amplitudes()[5], Complex64::new(1.0, 0.0));
    }
}
