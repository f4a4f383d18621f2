//! Dense complex linear algebra over qubit registers.
//!
//! Matrices are stored row-major. States and reduced density matrices follow
//! the crate-wide basis convention (qubit `k` is bit `k` of the basis index).

mod eigh;
mod matrix;
mod state;

pub use eigh::{SpectralDecomposition, eigh};
pub use matrix::{ComplexMatrix, kron};
pub use state::{DensityMatrix, PureState, partial_trace, purity};
pub(crate) use state::single_site_purities;

use crate::{Error, MAX_QUBITS, Result};


/// `2^n`, rejecting registers beyond [`MAX_QUBITS`].
pub(crate) fn dim_for(num_qubits: usize) -> Result<usize> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::SizeLimit { qubits: num_qubits, max: MAX_QUBITS });
    }
    Ok(1usize << num_qubits)
}

/// Inverse of [`dim_for`]; `None` unless `dim` is a power of two.
pub(crate) fn qubits_for(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() { Some(dim.trailing_zeros() as usize) } else { None }
}
