use ndarray::Array2;

use super::{QuditError, UnitaryMatrix, WireSystem};

/// A matrix block restricted to a computational subspace, together with the
/// worst-case amplitude lost outside it.
#[derive(Debug, Clone)]
pub struct Projection {
    pub block: Array2<num_complex::Complex64>,
    /// Maximum over kept columns of the norm of the discarded rows. Zero
    /// leakage certifies that auxiliary levels are fully uncomputed and the
    /// block itself is unitary.
    pub leakage: f64,
    pub kept_indices: Vec<usize>,
}

/// Indices of basis states whose digits all lie in the kept level sets.
pub fn kept_basis_indices(
    system: &WireSystem,
    kept_levels: &[Vec<usize>],
) -> Result<Vec<usize>, QuditError> {
    if kept_levels.len() != system.num_wires() {
        return Err(QuditError::DimensionMismatch(format!(
            "{} kept-level sets for {} wires",
            kept_levels.len(),
            system.num_wires()
        )));
    }
    for (w, levels) in kept_levels.iter().enumerate() {
        if levels.is_empty() {
            return Err(QuditError::EmptyKeptSet(w));
        }
        for &l in levels {
            if l >= system.dims()[w] {
                return Err(QuditError::InvalidLevel {
                    level: l,
                    dim: system.dims()[w],
                });
            }
        }
    }
    let mut kept = Vec::new();
    for i in 0..system.total_dim() {
        let digits = system.index_to_digits(i)?;
        if digits
            .iter()
            .zip(kept_levels.iter())
            .all(|(d, levels)| levels.contains(d))
        {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Restricts a unitary to the rows and columns spanned by the kept levels and
/// measures the per-column leakage into the discarded rows.
pub fn project_to_subspace(
    u: &UnitaryMatrix,
    system: &WireSystem,
    kept_levels: &[Vec<usize>],
) -> Result<Projection, QuditError> {
    if u.dim() != system.total_dim() {
        return Err(QuditError::DimensionMismatch(format!(
            "matrix dimension {} vs system dimension {}",
            u.dim(),
            system.total_dim()
        )));
    }
    let kept = kept_basis_indices(system, kept_levels)?;
    let k = kept.len();
    let entries = u.entries();
    let mut block = Array2::zeros((k, k));
    let mut leakage: f64 = 0.0;
    for (cj, &j) in kept.iter().enumerate() {
        let mut kept_norm_sqr = 0.0;
        for (ci, &i) in kept.iter().enumerate() {
            let e = entries[[i, j]];
            block[[ci, cj]] = e;
            kept_norm_sqr += e.norm_sqr();
        }
        let col_norm_sqr: f64 = (0..u.dim()).map(|i| entries[[i, j]].norm_sqr()).sum();
        leakage = leakage.max((col_norm_sqr - kept_norm_sqr).max(0.0).sqrt());
    }
    Ok(Projection {
        block,
        leakage,
        kept_indices: kept,
    })
}
