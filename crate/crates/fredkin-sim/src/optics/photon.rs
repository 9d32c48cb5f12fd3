use ndarray::{Array2, ArrayD, Axis, IxDyn};
use num_complex::Complex64;

use super::channel::ChannelBasis;
use super::spec::InterferometerSpec;
use super::OpticsError;

/// Joint amplitude tensor of several distinguishable photons over a shared
/// channel basis, one tensor index per photon.
#[derive(Debug, Clone)]
pub struct PhotonState {
    labels: Vec<String>,
    basis: ChannelBasis,
    tensor: ArrayD<Complex64>,
}

impl PhotonState {
    pub fn new(
        basis: ChannelBasis,
        labels: Vec<String>,
        tensor: ArrayD<Complex64>,
    ) -> Result<Self, OpticsError> {
        if tensor.ndim() != labels.len() || tensor.shape().iter().any(|&s| s != basis.len()) {
            return Err(OpticsError::ChannelMismatch(format!(
                "tensor shape {:?} does not match {} photons over {} channels",
                tensor.shape(),
                labels.len(),
                basis.len()
            )));
        }
        Ok(Self {
            labels,
            basis,
            tensor,
        })
    }

    /// Encodes a logical amplitude vector into input channels, photon `i`
    /// carrying logical slot `i`. The vector is indexed with slot 0 as the
    /// most significant digit.
    pub fn from_logical(
        spec: &InterferometerSpec,
        amplitudes: &[Complex64],
    ) -> Result<Self, OpticsError> {
        let dims = spec.logical_dims();
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(OpticsError::InvalidInput(format!(
                "{} amplitudes for logical dimension {}",
                amplitudes.len(),
                total
            )));
        }
        let n = spec.basis.len();
        let mut tensor = ArrayD::zeros(IxDyn(&vec![n; dims.len()]));
        for (k, &a) in amplitudes.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut rem = k;
            let mut channel_idx = vec![0usize; dims.len()];
            for (slot, &d) in dims.iter().enumerate().rev() {
                let level = rem % d;
                rem /= d;
                channel_idx[slot] = spec.basis.index_of(&spec.input_slots[slot].1[level])?;
            }
            tensor[IxDyn(&channel_idx)] = a;
        }
        Self::new(spec.basis.clone(), spec.photon_labels.clone(), tensor)
    }

    /// Basis input with one definite logical level per slot.
    pub fn from_levels(
        spec: &InterferometerSpec,
        levels: &[usize],
    ) -> Result<Self, OpticsError> {
        let dims = spec.logical_dims();
        if levels.len() != dims.len() {
            return Err(OpticsError::InvalidInput(format!(
                "{} levels for {} slots",
                levels.len(),
                dims.len()
            )));
        }
        let mut index = 0;
        for (slot, (&l, &d)) in levels.iter().zip(dims.iter()).enumerate() {
            if l >= d {
                return Err(OpticsError::InvalidInput(format!(
                    "level {l} out of range for slot {slot}"
                )));
            }
            index = index * d + l;
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.iter().product()];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::from_logical(spec, &amps)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis(&self) -> &ChannelBasis {
        &self.basis
    }

    pub fn tensor(&self) -> &ArrayD<Complex64> {
        &self.tensor
    }

    pub fn norm(&self) -> f64 {
        self.tensor
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.tensor
            .iter()
            .zip(other.tensor.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn apply_to_axis(
    tensor: &ArrayD<Complex64>,
    u: &Array2<Complex64>,
    axis: usize,
) -> ArrayD<Complex64> {
    let n = u.nrows();
    let mut out = ArrayD::zeros(tensor.raw_dim());
    for i in 0..n {
        let mut target = out.index_axis_mut(Axis(axis), i);
        for j in 0..n {
            let c = u[[i, j]];
            if c != Complex64::new(0.0, 0.0) {
                target.scaled_add(c, &tensor.index_axis(Axis(axis), j));
            }
        }
    }
    out
}

/// Propagates every photon through the compiled channel unitary.
pub fn propagate(
    state: &PhotonState,
    spec: &InterferometerSpec,
) -> Result<PhotonState, OpticsError> {
    if state.basis.len() != spec.basis.len() {
        return Err(OpticsError::ChannelMismatch(format!(
            "state over {} channels, interferometer over {}",
            state.basis.len(),
            spec.basis.len()
        )));
    }
    let mut tensor = state.tensor.clone();
    for axis in 0..state.labels.len() {
        tensor = apply_to_axis(&tensor, &spec.compiled, axis);
    }
    PhotonState::new(state.basis.clone(), state.labels.clone(), tensor)
}
